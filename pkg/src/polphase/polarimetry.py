"""Single-beam ("virtual interferometry") extraction of the Pancharatnam phase.

A beam prepared in |V>, split into the two circular components with a
relative phase phi (the split_frame operator), transformed by U, and finally
projected back on the prepared state produces the intensity

    I(phi) = cos^2(beta) cos^2(delta) + sin^2(beta) cos^2(gamma + phi)

with (beta, gamma, delta) the z-y-z angles of U.  Scanning phi and reading
off the extrema

    I_min = cos^2(beta) cos^2(delta)
    I_max = I_min + sin^2(beta)

gives the phase through

    cos^2(delta) = I_min / (1 - I_max + I_min),

no second beam required.  The whole optical chain compiles into the
five-plate array of plates.polarimetric_array, scanned by rotating the plates
together, and in the y-z-y angles the same intensity reads

    I = cos^2(eta/2) cos^2((xi+zeta)/2)
        + [cos(eta/2) sin((xi+zeta)/2) cos(phi)
           + sin(eta/2) sin((xi-zeta)/2) sin(phi)]^2 .
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fringes import savgol_coefficients
from .plates import WavePlate, compose
from .su2 import EPS_DEGENERATE, KET_V, YzyParams

_RATIO_SLACK = 1e-9


class DegenerateDenominator(ValueError):
    """1 - I_max + I_min vanishes (beta = pi/2); the phase is unreadable."""


class InvalidExtrema(ValueError):
    """The supplied extrema cannot come from a sweep of the intensity law."""


@dataclass
class PolarimetricSweep:
    """One full rotation scan: intensities over phi_grid for fixed angles."""

    phi_grid: np.ndarray
    intensities: np.ndarray
    params: YzyParams


def polarimetric_intensity(xi: float, eta: float, zeta: float, phi) -> "float | np.ndarray":
    """Transmitted intensity of the five-plate scan at rotation phase phi.

    Closed form in the y-z-y angles; agrees with
    |<V| compose(polarimetric_array(xi, eta, zeta, phi)) |V>|^2 to rounding.
    Accepts a scalar or an array of phi.
    """
    phi = np.asarray(phi, dtype=float)
    ce, se = np.cos(eta / 2.0), np.sin(eta / 2.0)
    out = (
        ce**2 * np.cos((xi + zeta) / 2.0) ** 2
        + (
            ce * np.sin((xi + zeta) / 2.0) * np.cos(phi)
            + se * np.sin((xi - zeta) / 2.0) * np.sin(phi)
        )
        ** 2
    )
    return float(out) if out.ndim == 0 else out


def intensity_xi_minus_pi(eta: float, zeta: float, phi) -> "float | np.ndarray":
    """Scan intensity of the three-plate xi = -pi reduction.

    I = cos^2(zeta/2) cos^2((eta - 2 phi)/2) + sin^2(zeta/2) cos^2(eta/2);
    identical to polarimetric_intensity(-pi, eta, zeta, phi).  Constant in
    phi at eta = 0, zeta = pi (the alignment configuration).
    """
    phi = np.asarray(phi, dtype=float)
    out = (
        np.cos(zeta / 2.0) ** 2 * np.cos((eta - 2.0 * phi) / 2.0) ** 2
        + np.sin(zeta / 2.0) ** 2 * np.cos(eta / 2.0) ** 2
    )
    return float(out) if out.ndim == 0 else out


def extract_cos2_phase(i_min: float, i_max: float) -> float:
    """cos^2 of the Pancharatnam phase from the sweep extrema.

    Evaluates I_min / (1 - I_max + I_min), clamped into [0, 1] when it
    overshoots by no more than numerical slack.  Raises
    DegenerateDenominator at beta = pi/2 (the denominator is cos^2 beta) and
    InvalidExtrema when the inputs violate 0 <= I_min <= I_max <= 1 or the
    ratio is out of range by more than the slack.
    """
    if not (i_min >= -_RATIO_SLACK and i_min <= i_max + _RATIO_SLACK
            and i_max <= 1.0 + _RATIO_SLACK):
        raise InvalidExtrema(f"extrema ordering violated: i_min={i_min}, i_max={i_max}")
    denominator = 1.0 - i_max + i_min
    if denominator <= EPS_DEGENERATE:
        raise DegenerateDenominator(
            f"1 - I_max + I_min = {denominator:.3e}; phase contrast vanished"
        )
    ratio = i_min / denominator
    if not -_RATIO_SLACK <= ratio <= 1.0 + _RATIO_SLACK:
        raise InvalidExtrema(f"ratio {ratio} outside [0, 1] beyond slack")
    return float(np.clip(ratio, 0.0, 1.0))


def polarimetric_sweep(
    xi: float,
    eta: float,
    zeta: float,
    n_grid: int = 4096,
    noise_sigma: float = 0.0,
    seed=None,
) -> PolarimetricSweep:
    """Simulate one rotation scan over phi in [0, 2 pi).

    Noise is additive Gaussian on the intensity, clamped to [0, 1]; the
    generator is seeded explicitly so runs are reproducible.
    """
    if n_grid < 64:
        raise ValueError(f"n_grid must be at least 64, got {n_grid}")
    phi = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    intensity = polarimetric_intensity(xi, eta, zeta, phi)
    if noise_sigma > 0.0:
        rng = np.random.default_rng(seed)
        intensity = np.clip(intensity + rng.normal(0.0, noise_sigma, n_grid), 0.0, 1.0)
    return PolarimetricSweep(phi, intensity, YzyParams(xi, eta, zeta))


def scan_plate_array(plates: Sequence[WavePlate], phi_grid) -> np.ndarray:
    """Transmitted intensity of an arbitrary plate array under a common scan.

    Rotating every plate of the assembly together by phi/2 (each axis picks
    up -phi/2, matching the built-in five-plate construction) and projecting
    the output back on |V> gives the scan intensity |<V| U(phi) |V>|^2 at
    each grid point.  This is how a user-supplied plate file is simulated.
    """
    phis = np.atleast_1d(np.asarray(phi_grid, dtype=float))
    out = np.empty(len(phis))
    for i, phi in enumerate(phis):
        rotated = [WavePlate(p.kind, p.axis - phi / 2.0) for p in plates]
        amplitude = KET_V.conj() @ (compose(rotated) @ KET_V)
        out[i] = abs(amplitude) ** 2
    return out


def _circular_smooth(values: np.ndarray, window: int, order: int = 3) -> np.ndarray:
    # the scan is periodic, so pad by wrapping rather than truncating
    coeffs = savgol_coefficients(window, order)
    half = window // 2
    padded = np.concatenate([values[-half:], values, values[:half]])
    return np.convolve(padded, coeffs[::-1], mode="valid")


def _interpolated_extremum(values: np.ndarray, index: int) -> float:
    # circular three-point parabola through the best sample and its neighbours
    n = len(values)
    ym, y0, yp = values[(index - 1) % n], values[index], values[(index + 1) % n]
    denominator = ym - 2.0 * y0 + yp
    offset = 0.5 * (ym - yp) / denominator if denominator != 0.0 else 0.0
    return float(y0 - 0.25 * (ym - yp) * offset)


def sweep_extrema(sweep: PolarimetricSweep, smooth_window: int | None = None) -> tuple[float, float]:
    """(I_min, I_max) of a scan, quadratically interpolated around the best samples."""
    intensity = sweep.intensities
    if smooth_window is not None:
        intensity = _circular_smooth(intensity, smooth_window)
    i_min = _interpolated_extremum(intensity, int(np.argmin(intensity)))
    i_max = _interpolated_extremum(intensity, int(np.argmax(intensity)))
    return float(np.clip(i_min, 0.0, 1.0)), float(np.clip(i_max, 0.0, 1.0))


def measure_phase(
    xi: float,
    eta: float,
    zeta: float,
    n_grid: int = 4096,
    noise_sigma: float = 0.0,
    seed=None,
    smooth_window: int | None = None,
) -> float:
    """cos^2(Pancharatnam phase) measured from a simulated rotation scan.

    Sweeps phi over [0, 2 pi) on n_grid points, locates the intensity
    extrema and applies the extremum ratio.  For noisy scans the sweep is
    low-pass filtered first (a Savitzky-Golay window scaled to the grid, or
    ``smooth_window`` when given).  Equals cos^2(delta) of the underlying
    transformation up to grid resolution and noise.
    """
    sweep = polarimetric_sweep(xi, eta, zeta, n_grid, noise_sigma, seed)
    if smooth_window is None and noise_sigma > 0.0:
        smooth_window = max(5, (n_grid // 32) | 1)
    i_min, i_max = sweep_extrema(sweep, smooth_window)
    return extract_cos2_phase(i_min, i_max)
