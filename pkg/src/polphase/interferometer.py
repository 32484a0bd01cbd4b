"""Two-qubit operator model of a Mach-Zehnder interferometer.

The light carries a polarization qubit {|V>, |H>} and a path ("which way")
qubit {|X>, |Y>}.  States live in the product basis, ordered

    {|VX>, |VY>, |HX>, |HY>}

(polarization index major).  Beam splitters, mirrors and phase shifters act
on the path factor only; a retarder array inserted in one arm acts on the
polarization factor of that arm alone.

The full pass through the instrument is

    U_T = U_BS  U_mirr  U_X(phi)  U_P^Y  U_BS

with the retarder array on arm Y and the scanned phase phi on arm X.  With
the symmetric beam-splitter convention used here (factor i on reflection),
the exit port whose fringe is

    I = (1/2) [1 - cos(beta) cos(phi - delta)]        (vertical input)

is the Y-labelled output: the port that is dark at phi = 0 when no retarders
are present.  The X-labelled output carries the complementary fringe, and the
two always sum to the input power.  Feeding the top half of the beam through
a vertical polarizer and the bottom half through a horizontal one shifts the
two half-fringes by 2 delta relative to each other, which is what
split_beam_shift recovers.
"""

from __future__ import annotations

import numpy as np

from .su2 import IDENTITY2, to_zyz, wrap_angle

#: visibility below this is treated as zero (fringes flat, shift undefined)
EPS_VISIBILITY = 1e-6

_PATH_X = np.diag([1.0, 0.0]).astype(complex)
_PATH_Y = np.diag([0.0, 1.0]).astype(complex)


class ZeroVisibility(ValueError):
    """Fringe visibility vanishes; the fringe shift is undefined."""


def beam_splitter() -> np.ndarray:
    """Symmetric 50:50 beam splitter: transmit 1, reflect i, on either side."""
    bs = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=complex) / np.sqrt(2.0)
    return np.kron(IDENTITY2, bs)


def mirror() -> np.ndarray:
    """Folding mirrors: swap the two paths with a -i reflection phase each."""
    m = np.array([[0.0, -1.0j], [-1.0j, 0.0]], dtype=complex)
    return np.kron(IDENTITY2, m)


def phase_shifter(arm: str, phi: float) -> np.ndarray:
    """Phase e^{i phi} on the selected arm ('X' or 'Y')."""
    if arm == "X":
        p = np.diag([np.exp(1j * phi), 1.0])
    elif arm == "Y":
        p = np.diag([1.0, np.exp(1j * phi)])
    else:
        raise ValueError(f"arm must be 'X' or 'Y', got {arm!r}")
    return np.kron(IDENTITY2, p.astype(complex))


def arm_unitary(u: np.ndarray, arm: str) -> np.ndarray:
    """Polarization transformation u applied in one arm, identity in the other."""
    u = np.asarray(u, dtype=complex)
    if arm == "X":
        return np.kron(u, _PATH_X) + np.kron(IDENTITY2, _PATH_Y)
    if arm == "Y":
        return np.kron(u, _PATH_Y) + np.kron(IDENTITY2, _PATH_X)
    raise ValueError(f"arm must be 'X' or 'Y', got {arm!r}")


def mach_zehnder(u: np.ndarray, phi: float, u_arm: str = "Y", phase_arm: str = "X") -> np.ndarray:
    """Total operator of the interferometer pass (retarders default to arm Y)."""
    return (
        beam_splitter()
        @ mirror()
        @ phase_shifter(phase_arm, phi)
        @ arm_unitary(u, u_arm)
        @ beam_splitter()
    )


def _input_ket(input_pol: str) -> np.ndarray:
    if input_pol == "V":
        ket = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    elif input_pol == "H":
        ket = np.array([0.0, 0.0, 1.0, 0.0], dtype=complex)
    else:
        raise ValueError(f"input_pol must be 'V' or 'H', got {input_pol!r}")
    return ket


def _intensity_sweep(input_pol: str, u: np.ndarray, phis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(detector-port, complementary-port) intensities over an array of phi.

    Vectorized over phi: the scanned phase only multiplies the X components,
    so the fixed front and back sections are applied once.
    """
    front = arm_unitary(u, "Y") @ beam_splitter()
    back = beam_splitter() @ mirror()
    v0 = front @ _input_ket(input_pol)
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    states = np.repeat(v0[:, None], len(phis), axis=1)
    states[0] *= np.exp(1j * phis)  # |VX>
    states[2] *= np.exp(1j * phis)  # |HX>
    out = back @ states
    detector = np.abs(out[1]) ** 2 + np.abs(out[3]) ** 2  # |VY>, |HY>
    complement = np.abs(out[0]) ** 2 + np.abs(out[2]) ** 2
    return detector, complement


def output_intensity(input_pol: str, u: np.ndarray, phi: float, complementary: bool = False) -> float:
    """Detected intensity at the fringe port, summed over both polarizations.

    Equals (1/2)[1 - cos(beta) cos(phi -+ delta)] for V/H input, with
    (beta, delta) the z-y-z angles of u.  ``complementary=True`` returns the
    other exit port instead; the two ports sum to 1.
    """
    det, comp = _intensity_sweep(input_pol, u, np.array([phi]))
    return float(comp[0] if complementary else det[0])


def split_beam_shift(u: np.ndarray, phi_grid: np.ndarray) -> float:
    """Relative fringe shift 2*delta between the V-fed and H-fed halves.

    Sweeps the detector intensity for vertical and horizontal input over
    phi_grid, circularly cross-correlates the two curves, and interpolates
    the correlation peak quadratically.  Returns the shift in (-pi, pi].

    phi_grid must be uniform with at least 16 samples covering at least one
    full period (one period exactly, endpoint excluded, is the natural
    choice; the circular correlation is exact in that case).
    """
    phis = np.asarray(phi_grid, dtype=float)
    n = len(phis)
    if n < 16:
        raise ValueError(f"need at least 16 grid samples, got {n}")
    steps = np.diff(phis)
    if not np.allclose(steps, steps[0], rtol=0.0, atol=1e-9):
        raise ValueError("phi_grid must be uniformly spaced")
    h = float(steps[0])
    if n * h < 2.0 * np.pi - 1e-9:
        raise ValueError("phi_grid must span at least one full period")

    visibility = np.cos(to_zyz(u).beta)
    if visibility <= EPS_VISIBILITY:
        raise ZeroVisibility(f"visibility {visibility:.3e} below {EPS_VISIBILITY:g}")

    i_v, _ = _intensity_sweep("V", u, phis)
    i_h, _ = _intensity_sweep("H", u, phis)
    corr = np.fft.irfft(np.conj(np.fft.rfft(i_h)) * np.fft.rfft(i_v), n)
    peak = int(np.argmax(corr))
    ym, y0, yp = corr[(peak - 1) % n], corr[peak], corr[(peak + 1) % n]
    denom = ym - 2.0 * y0 + yp
    offset = 0.5 * (ym - yp) / denom if denom != 0.0 else 0.0
    return wrap_angle((peak + offset) * h)


def visibility_yzy(xi: float, eta: float, zeta: float) -> float:
    """Fringe visibility in the y-z-y angles.

    v^2 = (1/2)[1 + cos(xi) cos(zeta) - cos(eta) sin(xi) sin(zeta)], which
    equals cos(beta)^2 = |<V|U|V>|^2.
    """
    v2 = 0.5 * (
        1.0
        + np.cos(xi) * np.cos(zeta)
        - np.cos(eta) * np.sin(xi) * np.sin(zeta)
    )
    return float(np.sqrt(np.clip(v2, 0.0, 1.0)))


def visibility_plates(theta1: float, theta2: float, theta3: float) -> float:
    """Fringe visibility in terms of the Q(theta1) H(theta2) Q(theta3) axes.

    Same quantity as visibility_yzy, written directly in the plate angles of
    the compiling quarter-half-quarter array (theta1 is the first plate the
    light meets).
    """
    v2 = 0.5 * (
        1.0
        + np.cos((3.0 * np.pi + 4.0 * theta3) / 2.0) * np.cos((np.pi - 4.0 * theta1) / 2.0)
        - np.cos(2.0 * theta1 - 4.0 * theta2 + 2.0 * theta3)
        * np.sin((3.0 * np.pi + 4.0 * theta3) / 2.0)
        * np.sin((np.pi - 4.0 * theta1) / 2.0)
    )
    return float(np.sqrt(np.clip(v2, 0.0, 1.0)))
