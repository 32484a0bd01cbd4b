"""Jones matrices of wave-plate retarders and SU(2) gate compilation.

A retarder with its major axis at angle theta from the vertical is the
unit-determinant matrix

    R(theta) diag(e^{-i Gamma/2}, e^{+i Gamma/2}) R(-theta)

with Gamma = pi/2 for a quarter-wave plate Q and Gamma = pi for a half-wave
plate H, and R the real 2x2 rotation.  The symmetric e^{-+ i Gamma/2} split is
what makes plate products match SU(2) Euler products exactly, with no stray
global phase.

Plate arrays are stored in TRAVERSAL order: ``plates[0]`` is the first plate
the light meets, so composing multiplies the Jones matrices right-to-left.
A plate axis is a line, not a direction; axes are normalized modulo pi into
(-pi/2, pi/2], which leaves every Jones matrix unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .su2 import IDENTITY2, rot_z

QUARTER_RETARDANCE = np.pi / 2.0
HALF_RETARDANCE = np.pi

PlateKind = Literal["Q", "H"]


@dataclass(frozen=True)
class WavePlate:
    """A quarter- or half-wave plate with axis angle measured from vertical."""

    kind: PlateKind
    axis: float

    def __post_init__(self):
        if self.kind not in ("Q", "H"):
            raise ValueError(f"plate kind must be 'Q' or 'H', got {self.kind!r}")
        # canonical mounting angle: axes are pi-periodic
        axis = np.remainder(self.axis, np.pi)
        if axis > np.pi / 2.0:
            axis -= np.pi
        object.__setattr__(self, "axis", float(axis))


def quarter_wave(axis: float) -> WavePlate:
    return WavePlate("Q", axis)


def half_wave(axis: float) -> WavePlate:
    return WavePlate("H", axis)


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def jones(plate: WavePlate) -> np.ndarray:
    """Jones matrix of a single plate (unit determinant)."""
    gamma = QUARTER_RETARDANCE if plate.kind == "Q" else HALF_RETARDANCE
    d = np.array(
        [[np.exp(-0.5j * gamma), 0.0], [0.0, np.exp(0.5j * gamma)]], dtype=complex
    )
    return _rotation(plate.axis) @ d @ _rotation(-plate.axis)


def compose(plates: Sequence[WavePlate]) -> np.ndarray:
    """Jones matrix of a plate array, applied in traversal order.

    An empty array composes to the identity.
    """
    out = IDENTITY2.copy()
    for plate in plates:
        out = jones(plate) @ out
    return out


def decompose_qhq(xi: float, eta: float, zeta: float) -> list[WavePlate]:
    """Compile U(xi, eta, zeta) into a quarter-half-quarter array.

    Rests on the plate/Euler identity

        Q(t3) H(t2) Q(t1) = exp(-i(t3 + 3pi/4) sigma_y)
                            exp(+i(t1 - 2 t2 + t3) sigma_z)
                            exp(+i(t1 - pi/4) sigma_y)

    which holds exactly in this retarder convention.  The returned array is in
    traversal order and composes to from_yzy(xi, eta, zeta) with no residual
    sign.
    """
    return [
        quarter_wave((np.pi - 2.0 * zeta) / 4.0),
        half_wave((xi - eta - zeta - np.pi) / 4.0),
        quarter_wave((-3.0 * np.pi + 2.0 * xi) / 4.0),
    ]


def simplify_qh(q: WavePlate, h: WavePlate) -> list[WavePlate]:
    """Swap a quarter-then-half pair: [Q(a), H(b)] -> [H(b), Q(2b - a)].

    Both lists are traversal order; the composed matrix is unchanged.
    """
    if q.kind != "Q" or h.kind != "H":
        raise ValueError("simplify_qh expects a quarter plate then a half plate")
    return [half_wave(h.axis), quarter_wave(2.0 * h.axis - q.axis)]


def merge_qhh(q: WavePlate, h1: WavePlate, h2: WavePlate) -> list[WavePlate]:
    """Collapse [Q(a), H(b), H(g)] into the two-plate equivalent.

    [Q(a), H(b), H(g)] -> [Q(a + pi/2), H(a - b + g - pi/2)], traversal order,
    with the composed matrix preserved exactly.
    """
    kinds = (q.kind, h1.kind, h2.kind)
    if kinds != ("Q", "H", "H"):
        raise ValueError(f"merge_qhh expects kinds ('Q','H','H'), got {kinds}")
    return [
        quarter_wave(q.axis + np.pi / 2.0),
        half_wave(q.axis - h1.axis + h2.axis - np.pi / 2.0),
    ]


def _minus_quarter_x() -> np.ndarray:
    """exp(-i pi sigma_x / 4), the action of Q(pi/4)."""
    return np.array([[1.0, -1.0j], [-1.0j, 1.0]], dtype=complex) / np.sqrt(2.0)


def split_frame(phi: float) -> np.ndarray:
    """The preparation operator exp(-i phi sigma_z/2) exp(-i pi sigma_x/4).

    Sends |V> to the equal superposition (e^{-i phi/2}|V> - i e^{+i phi/2}|H>)
    / sqrt(2): a fifty-fifty split of the two circular-basis components with a
    tunable relative phase phi, the single-beam analogue of an interferometer
    arm-length scan.
    """
    return rot_z(-phi) @ _minus_quarter_x()


def polarimetric_target(u: np.ndarray, phi: float) -> np.ndarray:
    """Frame-conjugated operator V(phi)^dagger U V(phi) with V = split_frame."""
    v = split_frame(phi)
    return v.conj().T @ np.asarray(u, dtype=complex) @ v


def polarimetric_array(xi, eta, zeta, phi) -> list[WavePlate]:
    """Five-plate array realizing polarimetric_target(from_yzy(...), phi).

    All five axes carry the common offset -phi/2, so the whole assembly can be
    scanned by rotating every plate together by phi/2.  The composition equals
    the conjugated target exactly (no global sign; asserted by the test
    suite rather than assumed).
    """
    off = -phi / 2.0
    return [
        quarter_wave(-np.pi / 4.0 + off),
        half_wave(-(7.0 * np.pi + xi + eta - zeta) / 4.0 + off),
        quarter_wave(-(9.0 * np.pi + 2.0 * (xi + eta)) / 4.0 + off),
        quarter_wave(-(5.0 * np.pi + 2.0 * xi) / 4.0 + off),
        quarter_wave(-3.0 * np.pi / 4.0 + off),
    ]


def reduced_array_zeta_2pi(xi, eta, phi) -> list[WavePlate]:
    """Three-plate reduction of the five-plate array at zeta = 2 pi.

    Uses the rescanned rotation angle phi' = (-3 pi - 2 phi) / 4: composing
    this array at phi' equals composing polarimetric_array(xi, eta, 2 pi, phi).
    """
    return [
        half_wave((eta - xi) / 4.0 + phi),
        quarter_wave(-xi / 2.0 + phi),
        quarter_wave(phi),
    ]


def reduced_array_xi_minus_pi(eta, zeta, phi) -> list[WavePlate]:
    """Three-plate reduction of the five-plate array at xi = -pi.

    Shares the scan angle phi of the five-plate form directly (no
    redefinition).  At eta = 0, zeta = pi the transmitted intensity is
    constant in phi, which is the adjustment configuration.
    """
    return [
        quarter_wave((-np.pi - 2.0 * phi) / 4.0),
        half_wave((-4.0 * np.pi + zeta + eta - 2.0 * phi) / 4.0),
        quarter_wave((3.0 * np.pi + 2.0 * eta - 2.0 * phi) / 4.0),
    ]


def format_plate_array(plates: Iterable[WavePlate]) -> str:
    """Serialize plates to the plain-text format: one ``Q <rad>``/``H <rad>`` per line."""
    return "".join(f"{p.kind} {p.axis:.17g}\n" for p in plates)


def parse_plate_array(text: str) -> list[WavePlate]:
    """Parse the plain-text plate format produced by format_plate_array."""
    plates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("Q", "H"):
            raise ValueError(f"line {lineno}: expected 'Q <radians>' or 'H <radians>', got {raw!r}")
        plates.append(WavePlate(parts[0], float(parts[1])))
    return plates
