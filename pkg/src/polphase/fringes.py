"""Synthetic dual-half interferograms and fringe-shift retrieval.

A dual-half interferogram is an intensity image whose upper half is recorded
with vertically polarized input and whose lower half with horizontally
polarized input.  Along each row the phase grows linearly with the column,
phi(x) = k0 x + phi0, so the two halves carry the fringes

    upper: (1/2) [1 - cos(beta) cos(k0 x + phi0 - delta)]
    lower: (1/2) [1 - cos(beta) cos(k0 x + phi0 + delta)]

mutually displaced by 2 delta / k0 pixels.  Because any drift of the
instrument moves both halves together, the relative shift is immune to it;
retrieving 2 delta is the whole game.  Two estimators are provided:

* minima matching: column-average each half, low-pass with a Savitzky-Golay
  filter, locate the fringe minima to sub-pixel accuracy and compare their
  positions between the halves;
* spatial-carrier Fourier: locate the dominant carrier frequency k0, read the
  fringe phase of each half off its transform at k0, and difference them.

Shifts are reported modulo 2 pi with the representative in (-pi, pi].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .su2 import wrap_angle


class TooFewMinima(ValueError):
    """A profile does not contain enough interior extrema to work with."""


class AmbiguousPairing(ValueError):
    """Minima of the two profiles cannot be paired consistently."""


class NoCarrier(ValueError):
    """No dominant spatial carrier frequency stands out of the spectrum."""


#: peak-to-peak profile span below which fringes count as absent entirely
_FLAT_FLOOR = 1e-12


@dataclass(frozen=True)
class Region:
    """A rectangular pixel region, half-open index ranges [start, end)."""

    col_start: int
    col_end: int
    row_start: int
    row_end: int

    def __post_init__(self):
        if self.col_start >= self.col_end or self.row_start >= self.row_end:
            raise ValueError(f"empty region {self}")
        if min(self.col_start, self.row_start) < 0:
            raise ValueError(f"negative region bounds {self}")


@dataclass
class Interferogram:
    """Intensity grid split at ``half_split_row`` into the V and H halves.

    ``k0`` and ``true_delta`` are metadata: the carrier frequency when known
    and, for synthetic images, the phase the generator encoded.
    """

    pixels: np.ndarray
    half_split_row: int
    k0: float | None = None
    true_delta: float | None = None

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=float)
        if self.pixels.ndim != 2:
            raise ValueError("pixels must be a 2-d array")
        h, w = self.pixels.shape
        if h < 16 or w < 16:
            raise ValueError(f"image must be at least 16x16, got {h}x{w}")
        if not 0 < self.half_split_row < h:
            raise ValueError(f"half_split_row {self.half_split_row} outside (0, {h})")
        if not np.all(np.isfinite(self.pixels)) or np.any(self.pixels < 0):
            raise ValueError("pixel intensities must be finite and nonnegative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape


def generate(
    delta: float,
    beta: float,
    k0: float,
    size: tuple[int, int] = (480, 640),
    noise_sigma: float = 0.0,
    envelope_width: float | None = None,
    seed=0,
    phi0: float = 0.0,
    split_row: int | None = None,
) -> Interferogram:
    """Render a synthetic dual-half interferogram.

    size is (height, width).  k0 is the carrier in radians per pixel and must
    sit below Nyquist (0 < k0 < pi).  envelope_width, when given, multiplies
    the whole intensity by a round Gaussian beam profile of that standard
    deviation (in pixels) centred on the image.  Noise is additive Gaussian,
    clamped to [0, 1], drawn from a generator seeded with ``seed`` so that
    images are bit-reproducible.
    """
    h, w = size
    if not 0.0 < k0 < np.pi:
        raise ValueError(f"k0 must lie in (0, pi), got {k0}")
    if noise_sigma < 0.0:
        raise ValueError("noise_sigma must be nonnegative")
    split = h // 2 if split_row is None else int(split_row)
    if not 0 < split < h:
        raise ValueError(f"split_row {split} outside (0, {h})")

    x = np.arange(w, dtype=float)
    upper = 0.5 * (1.0 - np.cos(beta) * np.cos(k0 * x + phi0 - delta))
    lower = 0.5 * (1.0 - np.cos(beta) * np.cos(k0 * x + phi0 + delta))
    pixels = np.empty((h, w), dtype=float)
    pixels[:split] = upper
    pixels[split:] = lower

    if envelope_width is not None:
        if envelope_width <= 0:
            raise ValueError("envelope_width must be positive")
        y = np.arange(h, dtype=float)
        r2 = (x - (w - 1) / 2.0) ** 2 + ((y - (h - 1) / 2.0) ** 2)[:, None]
        pixels *= np.exp(-0.5 * r2 / envelope_width**2)

    if noise_sigma > 0.0:
        rng = np.random.default_rng(seed)
        pixels = pixels + rng.normal(0.0, noise_sigma, pixels.shape)
    pixels = np.clip(pixels, 0.0, 1.0)
    return Interferogram(pixels, split, k0=k0, true_delta=delta)


def default_regions(img: Interferogram, count: int = 4, width_fraction: float = 0.6) -> list[Region]:
    """Evaluation regions stacked about the split row.

    All regions share the horizontally centred ``width_fraction`` of the
    columns; vertically they are bands of growing height centred on the
    half-split row, so every region straddles both halves.
    """
    h, w = img.shape
    c0 = int(round((1.0 - width_fraction) / 2.0 * w))
    c1 = w - c0
    reach = min(img.half_split_row, h - img.half_split_row)
    regions = []
    for k in range(1, count + 1):
        half_height = max(2, int(round(k / count * reach)))
        regions.append(Region(c0, c1, img.half_split_row - half_height,
                              img.half_split_row + half_height))
    return regions


def column_average(img: Interferogram, region: Region) -> tuple[np.ndarray, np.ndarray]:
    """Mean fringe profiles of the upper and lower halves within a region."""
    h, w = img.shape
    if region.col_end > w or region.row_end > h:
        raise ValueError(f"region {region} outside image {h}x{w}")
    split = img.half_split_row
    up_rows = (region.row_start, min(region.row_end, split))
    low_rows = (max(region.row_start, split), region.row_end)
    if up_rows[0] >= up_rows[1] or low_rows[0] >= low_rows[1]:
        raise ValueError(f"region {region} does not intersect both halves (split={split})")
    cols = slice(region.col_start, region.col_end)
    up = img.pixels[up_rows[0]:up_rows[1], cols].mean(axis=0)
    low = img.pixels[low_rows[0]:low_rows[1], cols].mean(axis=0)
    return up, low


# ---------------------------------------------------------------------------
# Savitzky-Golay smoothing

def savgol_coefficients(window: int, order: int) -> np.ndarray:
    """Convolution weights evaluating the local LS polynomial at the window centre."""
    half = window // 2
    t = np.arange(-half, half + 1, dtype=float)
    design = np.vander(t, order + 1, increasing=True)
    return np.linalg.pinv(design)[0]


def savitzky_golay(profile: np.ndarray, window: int = 11, order: int = 3) -> np.ndarray:
    """Least-squares local-polynomial smoothing of a fringe profile.

    Endpoints are handled by refitting on the truncated window that remains
    inside the data (no reflection padding), so polynomials of degree <=
    order pass through unchanged everywhere, endpoints included.
    """
    y = np.asarray(profile, dtype=float)
    n = len(y)
    if window % 2 == 0 or window < 1:
        raise ValueError(f"window must be odd and positive, got {window}")
    if order < 0 or order >= window:
        raise ValueError(f"order must satisfy 0 <= order < window, got {order}")
    if window > n:
        raise ValueError(f"window {window} longer than profile {n}")

    half = window // 2
    out = np.empty_like(y)
    centre = savgol_coefficients(window, order)
    out[half:n - half] = np.convolve(y, centre[::-1], mode="valid")
    for i in range(half):
        for idx, lo, hi in ((i, 0, i + half + 1), (n - 1 - i, n - i - half - 1, n)):
            t = np.arange(lo, hi, dtype=float) - idx
            deg = min(order, hi - lo - 1)
            design = np.vander(t, deg + 1, increasing=True)
            out[idx] = np.linalg.pinv(design)[0] @ y[lo:hi]
    return out


# ---------------------------------------------------------------------------
# Shift estimators

def _periodic_hann(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def _windowed_dtft(values: np.ndarray, k: float) -> complex:
    x = np.arange(len(values))
    return complex(np.sum(values * _periodic_hann(len(values)) * np.exp(-1j * k * x)))


def _peak_bin(mags: np.ndarray) -> int:
    """Index of the dominant nonzero-frequency peak of a magnitude spectrum.

    Raises NoCarrier when no candidate stands out: the peak must sit at bin
    >= 2 and exceed the low-frequency shoulder (leakage around the zero peak)
    by at least a factor of 2.
    """
    kbin = int(np.argmax(mags[1:]) + 1)
    if not mags[kbin] > 0:
        raise NoCarrier("profile is constant")
    if kbin < 2:
        raise NoCarrier("spectrum peaks adjacent to zero frequency")
    shoulder = float(np.max(mags[1:max(kbin // 2, 2)]))
    if not mags[kbin] >= 2.0 * shoulder:
        raise NoCarrier(
            f"peak at bin {kbin} ({mags[kbin]:.3g}) does not dominate the "
            f"low-frequency shoulder ({shoulder:.3g}) by 2x"
        )
    return kbin


def estimate_carrier(profile: np.ndarray) -> float:
    """Dominant spatial carrier frequency of a fringe profile, in rad/pixel.

    The coarse location is the strongest nonzero bin of the windowed
    transform; it is then refined to a continuous frequency by maximizing the
    transform magnitude, which is accurate to a small fraction of a bin on
    clean fringes.  Raises NoCarrier when no dominant peak stands out.
    """
    y = np.asarray(profile, dtype=float)
    n = len(y)
    if n < 8:
        raise NoCarrier(f"profile too short ({n} samples)")
    if np.ptp(y) < _FLAT_FLOOR:
        raise NoCarrier("profile is flat")
    centred = y - y.mean()
    kbin = _peak_bin(np.abs(np.fft.rfft(centred * _periodic_hann(n))))
    dk = 2.0 * np.pi / n
    lo = max(0.5 * dk, (kbin - 1.5) * dk)
    hi = min(np.pi - 1e-12, (kbin + 1.5) * dk)
    res = minimize_scalar(
        lambda k: -abs(_windowed_dtft(centred, k)) ** 2,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x)


def _subpixel_extrema(
    y: np.ndarray, minima: bool = True, carrier: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Interior local minima (or maxima) with quadratic sub-sample refinement.

    The three samples around each discrete extremum are fitted with a local
    quadratic vertex model.  When the carrier frequency is known the finite
    differences carry the harmonic correction factors 2(1 - cos k0) and
    2 sin(k0) in place of their small-angle limits k0^2 and 2 k0, which makes
    the vertex exact for a sampled cosine of that frequency; without a
    carrier the plain parabola limit is used.  Returns (positions, values).
    """
    s = y if minima else -y
    idx = np.nonzero((s[1:-1] < s[:-2]) & (s[1:-1] <= s[2:]))[0] + 1
    positions, values = [], []
    for i in idx:
        ym, y0, yp = s[i - 1], s[i], s[i + 1]
        if carrier is not None and carrier > 1e-3:
            # local model s = a + B cos(k0 x + psi), extremum at phase pi
            p = (yp + ym - 2.0 * y0) / (2.0 * (np.cos(carrier) - 1.0))
            q = (yp - ym) / (2.0 * np.sin(carrier))
            theta = np.arctan2(-q, p)  # k0*i + psi, with B > 0 toward the dip
            offset = float(-wrap_angle(theta - np.pi) / carrier)
            if abs(offset) > 1.0:  # degenerate fit, fall back to the parabola
                offset = None
            else:
                val = (y0 - p) - np.hypot(p, q)
        else:
            offset = None
        if offset is None:
            denom = ym - 2.0 * y0 + yp
            offset = 0.5 * (ym - yp) / denom if denom != 0.0 else 0.0
            val = y0 - 0.25 * (ym - yp) * offset
        positions.append(i + offset)
        values.append(val if minima else -val)
    return np.array(positions), np.array(values)


def shift_by_minima(up: np.ndarray, low: np.ndarray, k0: float) -> float:
    """Fringe shift from matched minima positions, in (-pi, pi].

    Each interior minimum of the upper profile is paired with the nearest
    minimum of the lower profile in the periodic sense: the pixel
    displacement is reduced modulo the fringe period 2 pi / k0 before being
    converted to phase, so a partner that slipped out of the frame on one
    side re-enters on the other.  The per-minimum phases are combined with a
    circular mean; a shift of exactly half a period therefore comes out as
    +pi, the (-pi, pi] representative.  If the per-minimum phases are
    mutually inconsistent (circular resultant below 0.5) the pairing is
    ambiguous and AmbiguousPairing is raised.
    """
    if k0 <= 0:
        raise ValueError("k0 must be positive")
    pos_up, _ = _subpixel_extrema(np.asarray(up, dtype=float), carrier=k0)
    pos_low, _ = _subpixel_extrema(np.asarray(low, dtype=float), carrier=k0)
    if len(pos_up) < 2 or len(pos_low) < 2:
        raise TooFewMinima(
            f"need >= 2 interior minima per profile, got {len(pos_up)} and {len(pos_low)}"
        )
    phases = np.empty(len(pos_up))
    for j, m in enumerate(pos_up):
        partner = pos_low[np.argmin(np.abs(pos_low - m))]
        phases[j] = wrap_angle(k0 * (m - partner))
    resultant = np.mean(np.exp(1j * phases))
    if abs(resultant) < 0.5:
        raise AmbiguousPairing(
            f"per-minimum shifts are inconsistent (resultant {abs(resultant):.2f})"
        )
    return float(np.angle(resultant))


def _fourier_shift_at(up: np.ndarray, low: np.ndarray, k0: float) -> float:
    su = _windowed_dtft(up - np.mean(up), k0)
    sl = _windowed_dtft(low - np.mean(low), k0)
    if abs(su) == 0.0 or abs(sl) == 0.0:
        raise NoCarrier("no carrier power at the estimated frequency")
    return wrap_angle(np.angle(sl) - np.angle(su))


def shift_by_fourier(up: np.ndarray, low: np.ndarray) -> float:
    """Fringe shift from the transform phases at the carrier, in (-pi, pi].

    The carrier is located as the dominant nonzero-frequency magnitude peak
    of the discrete transform of the upper profile; both transforms are then
    evaluated at that one bin and the shift is the difference of their phases
    (imaginary part of the log).  Sharing the frequency between the two
    profiles cancels the common linear-phase term, so any phase offset common
    to both halves drops out of the result.  When the carrier falls exactly
    on a bin the zero-frequency and mirror-image components vanish there and
    the recovery is exact.
    """
    up = np.asarray(up, dtype=float)
    low = np.asarray(low, dtype=float)
    if len(up) != len(low):
        raise ValueError(f"profile lengths differ: {len(up)} vs {len(low)}")
    if np.ptp(up) < _FLAT_FLOOR or np.ptp(low) < _FLAT_FLOOR:
        raise NoCarrier("profile is flat")
    spectrum_up = np.fft.rfft(up - up.mean())
    kbin = _peak_bin(np.abs(spectrum_up))
    spectrum_low = np.fft.rfft(low - low.mean())
    return wrap_angle(float(np.angle(spectrum_low[kbin]) - np.angle(spectrum_up[kbin])))


# ---------------------------------------------------------------------------
# Whole-image retrieval

RetrievalMethod = Literal["minima", "fourier", "both"]


@dataclass
class RetrievalResult:
    """Fringe-shift estimate aggregated over evaluation regions.

    ``estimate`` is the circular mean of the per-region estimates (radians,
    in (-pi, pi]); ``uncertainty`` is their circular sample standard
    deviation, or None when fewer than two regions succeeded (a single region
    gives no spread information).  ``method_disagreement`` is filled only for
    method="both".
    """

    estimate: float
    uncertainty: float | None
    region_estimates: list[float] = field(default_factory=list)
    method_disagreement: float | None = None
    carrier: float | None = None
    failed_regions: int = 0


def _circular_mean(angles) -> float:
    return float(np.angle(np.mean(np.exp(1j * np.asarray(angles)))))


def retrieve_phase(
    img: Interferogram,
    regions: Sequence[Region] | None = None,
    method: RetrievalMethod = "both",
    sg_window: int = 11,
    sg_order: int = 3,
) -> RetrievalResult:
    """Recover the half-to-half fringe shift 2*delta of an interferogram.

    Every region runs the pipeline column_average -> savitzky_golay -> shift
    estimator(s); the carrier frequency estimated on the smoothed upper
    profile is shared by both estimators.  Regions that raise are skipped
    (and counted); the call fails only when every region fails.
    """
    if method not in ("minima", "fourier", "both"):
        raise ValueError(f"unknown method {method!r}")
    if regions is None:
        regions = default_regions(img)
    if len(regions) == 0:
        raise ValueError("need at least one evaluation region")

    per_region: list[float] = []
    minima_estimates: list[float] = []
    fourier_estimates: list[float] = []
    carriers: list[float] = []
    failures = 0
    last_error: Exception | None = None
    for region in regions:
        try:
            up, low = column_average(img, region)
            up_s = savitzky_golay(up, sg_window, sg_order)
            low_s = savitzky_golay(low, sg_window, sg_order)
            # the truncated edge fits are the filter's weakest samples; drop
            # them before estimating so no minimum sits on a distorted stretch
            trim = sg_window // 2
            if len(up_s) > 6 * sg_window:
                up_s = up_s[trim:len(up_s) - trim]
                low_s = low_s[trim:len(low_s) - trim]
            k0 = estimate_carrier(up_s)
            values = []
            if method in ("minima", "both"):
                values.append(shift_by_minima(up_s, low_s, k0))
                minima_estimates.append(values[-1])
            if method in ("fourier", "both"):
                values.append(_fourier_shift_at(up_s, low_s, k0))
                fourier_estimates.append(values[-1])
        except (ValueError, ArithmeticError) as exc:
            failures += 1
            last_error = exc
            continue
        carriers.append(k0)
        per_region.append(_circular_mean(values))
    if not per_region:
        assert last_error is not None
        raise last_error

    estimate = _circular_mean(per_region)
    if len(per_region) >= 2:
        deviations = wrap_angle(np.asarray(per_region) - estimate)
        uncertainty = float(np.std(deviations, ddof=1))
    else:
        uncertainty = None
    disagreement = None
    if method == "both" and minima_estimates and fourier_estimates:
        disagreement = abs(
            wrap_angle(_circular_mean(minima_estimates) - _circular_mean(fourier_estimates))
        )
    return RetrievalResult(
        estimate=estimate,
        uncertainty=uncertainty,
        region_estimates=per_region,
        method_disagreement=disagreement,
        carrier=float(np.mean(carriers)),
        failed_regions=failures,
    )


def measure_visibility(
    img: Interferogram,
    region: Region,
    sg_window: int = 11,
    sg_order: int = 3,
) -> float:
    """Fringe contrast (I_max - I_min) / (I_max + I_min) within one half.

    The region must lie entirely inside the upper or the lower half.  Extrema
    are taken from the smoothed column-average profile with sub-pixel
    interpolation and averaged separately; the filter's (exactly known)
    passband gain at the carrier is divided back out, since smoothing leaves
    the mean level alone but shallows the fringes.  Note that noise keeps the
    interpolated minima strictly above zero, so measured visibilities sit
    slightly below 1 even for a unit-contrast pattern.
    """
    h, w = img.shape
    if region.col_end > w or region.row_end > h:
        raise ValueError(f"region {region} outside image {h}x{w}")
    split = img.half_split_row
    if not (region.row_end <= split or region.row_start >= split):
        raise ValueError("visibility region must lie within a single half")
    profile = img.pixels[region.row_start:region.row_end,
                         region.col_start:region.col_end].mean(axis=0)
    smooth = savitzky_golay(profile, sg_window, sg_order)
    gain = 1.0
    try:
        k0 = estimate_carrier(smooth)
        half = sg_window // 2
        taps = savgol_coefficients(sg_window, sg_order)
        gain = float(np.dot(taps, np.cos(k0 * np.arange(-half, half + 1))))
        gain = min(max(gain, 0.2), 1.0)  # never amplify, never blow up
    except NoCarrier:
        pass
    _, minima = _subpixel_extrema(smooth, minima=True)
    _, maxima = _subpixel_extrema(smooth, minima=False)
    if len(minima) < 2 or len(maxima) < 2:
        raise TooFewMinima(
            f"need >= 2 interior minima and maxima, got {len(minima)} and {len(maxima)}"
        )
    i_min = float(np.mean(minima))
    i_max = float(np.mean(maxima))
    return (i_max - i_min) / (gain * (i_max + i_min))


# ---------------------------------------------------------------------------
# Image I/O: 16-bit binary portable graymap plus plain key=value sidecar

_PGM_MAXVAL = 65535


def save_interferogram(img: Interferogram, path, extra: dict | None = None) -> None:
    """Write a 16-bit binary PGM plus a ``<path>.meta`` key=value sidecar."""
    path = Path(path)
    h, w = img.shape
    data = np.round(np.clip(img.pixels, 0.0, 1.0) * _PGM_MAXVAL).astype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{_PGM_MAXVAL}\n".encode("ascii"))
        fh.write(data.tobytes())
    meta: dict = {"split_row": img.half_split_row}
    if img.k0 is not None:
        meta["k0"] = img.k0
    if img.true_delta is not None:
        meta["true_delta"] = img.true_delta
    if extra:
        meta.update(extra)
    lines = []
    for key, value in meta.items():
        text = f"{value:.17g}" if isinstance(value, float) else str(value)
        lines.append(f"{key}={text}\n")
    Path(f"{path}.meta").write_text("".join(lines), encoding="ascii")


def _read_pgm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        if raw[pos:pos + 1] == b"#":  # comment line
            pos = raw.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        fields.append(raw[start:pos])
    pos += 1  # single whitespace after maxval
    if fields[0] != b"P5":
        raise ValueError(f"not a binary PGM: magic {fields[0]!r}")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != _PGM_MAXVAL:
        raise ValueError(f"expected 16-bit graymap (maxval {_PGM_MAXVAL}), got {maxval}")
    data = np.frombuffer(raw[pos:pos + 2 * w * h], dtype=">u2")
    if data.size != w * h:
        raise ValueError("truncated PGM payload")
    return data.reshape(h, w).astype(float) / _PGM_MAXVAL


def load_interferogram(path) -> tuple[Interferogram, dict]:
    """Read an image written by save_interferogram.

    Returns the Interferogram and the full sidecar dictionary (values parsed
    as float where possible).  A missing sidecar yields an empty dict and a
    default split at mid-height.
    """
    pixels = _read_pgm(path)
    meta: dict = {}
    sidecar = Path(f"{path}.meta")
    if sidecar.exists():
        for line in sidecar.read_text(encoding="ascii").splitlines():
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, _, value = line.partition("=")
            value = value.strip()
            for cast in (int, float):
                try:
                    value = cast(value)
                    break
                except ValueError:
                    continue
            meta[key.strip()] = value
    split = int(meta.get("split_row", pixels.shape[0] // 2))
    img = Interferogram(
        pixels,
        split,
        k0=meta.get("k0"),
        true_delta=meta.get("true_delta"),
    )
    return img, meta
