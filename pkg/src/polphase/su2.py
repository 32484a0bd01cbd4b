"""SU(2) algebra for polarization transformations and the Pancharatnam phase.

Conventions used throughout the package:

* Jones vectors live in the basis {|V>, |H>}, with the vertical state as the
  FIRST component.  |V> plays the role of the spin-up state |+>_z and |H> the
  role of |->_z, so the usual Pauli matrices apply unchanged.
* Operators are unit-determinant (SU(2), not merely unitary): a retarder
  splits its retardance symmetrically between the two axes.
* All angles are radians.
* The canonical ZYZ branch puts beta in [0, pi/2], so cos(beta) >= 0 and the
  fringe visibility cos(beta) is nonnegative.  Any sign of cos(beta) is
  absorbed into delta, which is therefore defined modulo pi.

The two Euler factorizations are

    yzy:  U(xi, eta, zeta) = exp(-i xi sigma_y / 2) exp(+i eta sigma_z / 2)
                             exp(-i zeta sigma_y / 2)

    zyz:  U(beta, gamma, delta) = [[ e^{+i delta} cos(beta), -e^{+i gamma} sin(beta)],
                                   [ e^{-i gamma} sin(beta),  e^{-i delta} cos(beta)]]

and the Pancharatnam phase of |i> relative to |f> is arg<i|f>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerances: EPS_MAT for exact-algebra checks (double precision composition
# of at most ~10 matrices), EPS_DEGENERATE for detecting undefined angles.
EPS_MAT = 1e-12
EPS_DEGENERATE = 1e-9

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

#: |V> = |+>_z and |H> = |->_z
KET_V = np.array([1.0, 0.0], dtype=complex)
KET_H = np.array([0.0, 1.0], dtype=complex)


class OrthogonalStates(ValueError):
    """The two states are orthogonal; their relative phase is undefined."""


@dataclass(frozen=True)
class YzyParams:
    """Euler angles (xi, eta, zeta) of the y-z-y factorization."""

    xi: float
    eta: float
    zeta: float


@dataclass(frozen=True)
class ZyzParams:
    """Euler angles (beta, gamma, delta) of the z-y-z factorization.

    beta is kept on the canonical branch [0, pi/2].  When the matrix element
    fixing gamma or delta vanishes, the corresponding angle is reported as 0
    and the matching ``*_defined`` flag is cleared instead of raising.
    """

    beta: float
    gamma: float
    delta: float
    gamma_defined: bool = True
    delta_defined: bool = True


def wrap_angle(angle):
    """Wrap an angle (scalar or array) to the interval (-pi, pi]."""
    wrapped = np.remainder(angle, 2.0 * np.pi)
    out = np.where(wrapped > np.pi, wrapped - 2.0 * np.pi, wrapped)
    if np.isscalar(angle) or np.ndim(angle) == 0:
        return float(out)
    return out


def rot_y(angle: float) -> np.ndarray:
    """exp(-i angle sigma_y / 2), a real rotation in the {|V>,|H>} plane."""
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rot_z(angle: float) -> np.ndarray:
    """exp(+i angle sigma_z / 2) = diag(e^{i angle/2}, e^{-i angle/2})."""
    return np.array(
        [[np.exp(0.5j * angle), 0.0], [0.0, np.exp(-0.5j * angle)]], dtype=complex
    )


def from_yzy(xi: float, eta: float, zeta: float) -> np.ndarray:
    """Build the SU(2) operator from its y-z-y Euler angles."""
    return rot_y(xi) @ rot_z(eta) @ rot_y(zeta)


def from_zyz(beta: float, gamma: float, delta: float) -> np.ndarray:
    """Build the SU(2) operator from its z-y-z Euler angles (explicit form)."""
    cb, sb = np.cos(beta), np.sin(beta)
    return np.array(
        [
            [np.exp(1j * delta) * cb, -np.exp(1j * gamma) * sb],
            [np.exp(-1j * gamma) * sb, np.exp(-1j * delta) * cb],
        ],
        dtype=complex,
    )


def to_zyz(u: np.ndarray) -> ZyzParams:
    """Read the z-y-z Euler angles off an SU(2) matrix.

    beta = arccos|u11| lies on [0, pi/2]; delta = arg(u11) and
    gamma = -arg(u21) wherever the corresponding element is nonzero.  Near
    beta = 0 the angle gamma is undefined (and near beta = pi/2, delta); the
    defined angles are still returned, with the degeneracy flagged.
    """
    u = np.asarray(u, dtype=complex)
    m11, m21 = u[0, 0], u[1, 0]
    beta = float(np.arccos(min(abs(m11), 1.0)))
    delta_defined = bool(abs(m11) > EPS_DEGENERATE)
    gamma_defined = bool(abs(m21) > EPS_DEGENERATE)
    delta = float(np.angle(m11)) if delta_defined else 0.0
    gamma = float(-np.angle(m21)) if gamma_defined else 0.0
    return ZyzParams(beta, gamma, delta, gamma_defined, delta_defined)


def yzy_to_zyz(xi: float, eta: float, zeta: float) -> ZyzParams:
    """Convert y-z-y angles to z-y-z angles.

    Goes through the matrix rather than through trigonometric identities,
    which avoids quadrant and branch mistakes; the identity
    tan(delta) = tan(eta/2) cos((xi-zeta)/2) / cos((xi+zeta)/2) is kept as a
    test oracle only.
    """
    return to_zyz(from_yzy(xi, eta, zeta))


def apply(u: np.ndarray, state: np.ndarray) -> np.ndarray:
    """Apply an operator to a Jones vector."""
    return np.asarray(u, dtype=complex) @ np.asarray(state, dtype=complex)


def pancharatnam_phase(initial: np.ndarray, final: np.ndarray) -> float:
    """Pancharatnam's relative phase arg<i|f>, in (-pi, pi].

    Raises OrthogonalStates when |<i|f>| is below the degeneracy threshold,
    since the phase of a vanishing inner product carries no information.
    """
    ip = np.vdot(np.asarray(initial, dtype=complex), np.asarray(final, dtype=complex))
    if abs(ip) <= EPS_DEGENERATE:
        raise OrthogonalStates(
            f"inner product magnitude {abs(ip):.3e} below {EPS_DEGENERATE:g}"
        )
    return float(np.angle(ip))


def anticommutation_phase() -> float:
    """Relative phase between (sigma_x sigma_y)|V> and (sigma_y sigma_x)|V>.

    The two products differ by a sign, so the phase is exactly pi.
    """
    a = apply(PAULI_X @ PAULI_Y, KET_V)
    b = apply(PAULI_Y @ PAULI_X, KET_V)
    return pancharatnam_phase(a, b)
