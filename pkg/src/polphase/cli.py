"""Command-line front end: compilation, sweeps and synthetic-image campaigns.

Subcommands
    decompose    compile an SU(2) transformation into a wave-plate array
    interf       Mach-Zehnder sweeps (fringe curves, phase surfaces)
    polarimetry  rotating-array scans and phase extraction
    fringe       synthetic dual-half interferograms: generate / analyze
    visibility   fringe-contrast curves and surfaces over plate angles

Every run resolves its parameters from flags plus an optional ``key=value``
config file (flags win), converts angles from degrees when ``--degrees`` is
given, and writes the fully resolved configuration next to its outputs so the
run can be reproduced exactly.  CSV output uses 12 significant digits and is
byte-stable across reruns with the same configuration and seed.  On failure a
single ``error: <Kind>: <message>`` line goes to stderr and the exit code is
nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import fringes, interferometer, plates, polarimetry, su2

OUTDIR_ENV = "POLPHASE_OUTDIR"


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    config = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, _, value = line.partition("=")
        config[key.strip()] = value.strip()
    return config


class Resolver:
    """Merge CLI flags with config-file values and record the result."""

    def __init__(self, args, config: dict, degrees: bool):
        self.args = args
        self.config = config
        self.degrees = degrees
        self.resolved: dict = {"degrees": degrees}

    def _raw(self, name: str, cast, default, required):
        value = getattr(self.args, name.replace("-", "_"), None)
        if value is None and name in self.config:
            value = cast(self.config[name])
        if value is None:
            value = default
        if required and value is None:
            raise ValueError(f"missing required parameter --{name}")
        return value

    def number(self, name, default=None, required=False) -> float | None:
        value = self._raw(name, float, default, required)
        self.resolved[name] = value
        return value

    def angle(self, name, default=None, required=False) -> float | None:
        value = self._raw(name, float, default, required)
        if value is not None and self.degrees:
            value = float(np.deg2rad(value))
        self.resolved[name] = value
        return value

    def integer(self, name, default=None, required=False) -> int | None:
        value = self._raw(name, int, default, required)
        self.resolved[name] = value
        return value

    def text(self, name, default=None, required=False) -> str | None:
        value = self._raw(name, str, default, required)
        self.resolved[name] = value
        return value

    def angle_grid(self, name, default=None, required=False) -> np.ndarray:
        """Parse 'v' or 'start:stop:count' (inclusive endpoints) into angles."""
        raw = self._raw(name, str, default, required)
        self.resolved[name] = raw
        parts = str(raw).split(":")
        if len(parts) == 1:
            values = np.array([float(parts[0])])
        elif len(parts) == 3:
            values = np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
        else:
            raise ValueError(f"--{name} must be 'value' or 'start:stop:count', got {raw!r}")
        return np.deg2rad(values) if self.degrees else values

    def write(self, outdir: Path, command: str) -> None:
        lines = [f"command={command}\n"]
        for key in sorted(self.resolved):
            lines.append(f"{key}={_format_value(self.resolved[key])}\n")
        (outdir / f"{command}_config.txt").write_text("".join(lines), encoding="ascii")


def _outdir(args) -> Path:
    out = args.out_dir or os.environ.get(OUTDIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _outpath(outdir: Path, name: str) -> Path:
    p = Path(name)
    return p if p.is_absolute() else outdir / p


# ---------------------------------------------------------------------------
# decompose

def _cmd_decompose(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    xi = r.angle("xi", required=True)
    eta = r.angle("eta", required=True)
    zeta = r.angle("zeta", required=True)
    mode = r.integer("mode", default=3)
    out = r.text("out", default="plates.txt")
    outdir = _outdir(args)

    if mode == 3:
        array = plates.decompose_qhq(xi, eta, zeta)
        target = su2.from_yzy(xi, eta, zeta)
        r.resolved["phi"] = None
    elif mode == 5:
        phi = r.angle("phi", default=0.0)
        array = plates.polarimetric_array(xi, eta, zeta, phi)
        target = plates.polarimetric_target(su2.from_yzy(xi, eta, zeta), phi)
    else:
        raise ValueError(f"--mode must be 3 or 5, got {mode}")

    composed = plates.compose(array)
    residual = float(np.max(np.abs(composed - target)))
    path = _outpath(outdir, out)
    path.write_text(plates.format_plate_array(array), encoding="ascii")
    r.write(outdir, "decompose")

    print(f"plates written to {path}")
    for p in array:
        print(f"  {p.kind} {p.axis:+.12g}")
    print("composed matrix:")
    for row in composed:
        print("  [" + "  ".join(f"{v.real:+.12g}{v.imag:+.12g}j" for v in row) + "]")
    print(f"compose-verify max residual: {residual:.3e}")
    return 0


# ---------------------------------------------------------------------------
# interf

def _cmd_interf_sweep(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    xi = r.angle("xi", required=True)
    eta = r.angle("eta", required=True)
    zeta = r.angle("zeta", required=True)
    samples = r.integer("samples", default=1024)
    out = r.text("out", default="interf_sweep.csv")
    outdir = _outdir(args)

    u = su2.from_yzy(xi, eta, zeta)
    phis = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    i_v, _ = interferometer._intensity_sweep("V", u, phis)
    i_h, _ = interferometer._intensity_sweep("H", u, phis)
    _write_csv(_outpath(outdir, out), ["phi", "I_V", "I_H"],
               zip(phis.tolist(), i_v.tolist(), i_h.tolist()))
    r.write(outdir, "interf_sweep")

    zyz = su2.to_zyz(u)
    try:
        shift = interferometer.split_beam_shift(u, phis)
        print(f"recovered_2delta={shift:.12g}")
    except interferometer.ZeroVisibility as exc:
        print(f"warning: {exc}", file=sys.stderr)
        print("recovered_2delta=undefined")
    if zyz.delta_defined:
        print(f"expected_2delta={su2.wrap_angle(2.0 * zyz.delta):.12g}")
    print(f"visibility={np.cos(zyz.beta):.12g}")
    return 0


def _cmd_interf_surface(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    zeta = r.angle("zeta", default=0.0)
    xi_grid = r.angle_grid("xi-grid", default="0:6.283185307179586:33")
    eta_grid = r.angle_grid("eta-grid", default="0:6.283185307179586:33")
    out = r.text("out", default="phase_surface.csv")
    outdir = _outdir(args)

    rows = []
    degenerate = 0
    for xi in xi_grid:
        for eta in eta_grid:
            zyz = su2.yzy_to_zyz(xi, eta, zeta)
            if zyz.delta_defined:
                cos2 = float(np.cos(zyz.delta) ** 2)
            else:
                cos2 = None  # beta = pi/2: phase undefined, cell left empty
                degenerate += 1
            rows.append((float(xi), float(eta), cos2))
    _write_csv(_outpath(outdir, out), ["xi", "eta", "cos2_phase"], rows)
    r.write(outdir, "interf_surface")
    if degenerate:
        print(f"warning: {degenerate} grid points with undefined phase (beta=pi/2)",
              file=sys.stderr)
    print(f"surface written to {_outpath(outdir, out)} ({len(rows)} points)")
    return 0


# ---------------------------------------------------------------------------
# polarimetry

def _cmd_polarimetry(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    plate_file = r.text("plates", default=None)
    if plate_file is not None:
        return _polarimetry_plate_scan(args, r, plate_file)
    mode = r.text("mode", default="full")
    if mode not in ("full", "zeta2pi", "ximinuspi"):
        raise ValueError(f"--mode must be full, zeta2pi or ximinuspi, got {mode!r}")
    if mode == "zeta2pi":
        xi = r.angle("xi", default=0.0)
        zeta = 2.0 * np.pi
        r.resolved["zeta"] = zeta
    elif mode == "ximinuspi":
        xi = -np.pi
        zeta = r.angle("zeta", default=np.pi)
        r.resolved["xi"] = xi
    else:
        xi = r.angle("xi", required=True)
        zeta = r.angle("zeta", required=True)
    eta_steps = r.integer("eta-steps", default=64)
    n_grid = r.integer("n-grid", default=4096)
    noise = r.number("noise-sigma", default=0.0)
    seed = r.integer("seed", default=0)
    out = r.text("out", default="polarimetry.csv")
    outdir = _outdir(args)

    etas = np.linspace(0.0, 2.0 * np.pi, eta_steps, endpoint=False)
    rows = []
    degenerate = 0
    for index, eta in enumerate(etas):
        zyz = su2.yzy_to_zyz(xi, eta, zeta)
        expected = float(np.cos(zyz.delta) ** 2) if zyz.delta_defined else None
        try:
            measured = polarimetry.measure_phase(
                xi, eta, zeta, n_grid=n_grid, noise_sigma=noise, seed=seed + index
            )
        except polarimetry.DegenerateDenominator as exc:
            print(f"warning: eta={eta:.6g}: {exc}", file=sys.stderr)
            measured = None
            degenerate += 1
        rows.append((float(eta), measured, expected))
    _write_csv(_outpath(outdir, out), ["eta", "cos2_measured", "cos2_expected"], rows)

    sweep_out = r.text("sweep-out", default=None)
    if sweep_out is not None:
        eta0 = r.angle("eta", required=True)
        sweep = polarimetry.polarimetric_sweep(xi, eta0, zeta, n_grid, noise, seed)
        _write_csv(_outpath(outdir, sweep_out), ["phi", "intensity"],
                   zip(sweep.phi_grid.tolist(), sweep.intensities.tolist()))
    r.write(outdir, "polarimetry")
    print(f"curve written to {_outpath(outdir, out)} ({len(rows)} points, "
          f"{degenerate} degenerate)")
    return 0


def _polarimetry_plate_scan(args, r: Resolver, plate_file: str) -> int:
    """Scan a user-supplied plate array (plain-text plate list) over phi."""
    n_grid = r.integer("n-grid", default=4096)
    noise = r.number("noise-sigma", default=0.0)
    seed = r.integer("seed", default=0)
    out = r.text("out", default="plate_scan.csv")
    outdir = _outdir(args)

    array = plates.parse_plate_array(Path(plate_file).read_text())
    phis = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    intensity = polarimetry.scan_plate_array(array, phis)
    if noise > 0.0:
        rng = np.random.default_rng(seed)
        intensity = np.clip(intensity + rng.normal(0.0, noise, n_grid), 0.0, 1.0)
    _write_csv(_outpath(outdir, out), ["phi", "intensity"],
               zip(phis.tolist(), intensity.tolist()))
    r.write(outdir, "polarimetry")

    sweep = polarimetry.PolarimetricSweep(phis, intensity, su2.YzyParams(0, 0, 0))
    window = max(5, (n_grid // 32) | 1) if noise > 0.0 else None
    i_min, i_max = polarimetry.sweep_extrema(sweep, window)
    print(f"scan written to {_outpath(outdir, out)} ({len(array)} plates)")
    print(f"I_min={i_min:.12g}")
    print(f"I_max={i_max:.12g}")
    try:
        print(f"cos2_phase={polarimetry.extract_cos2_phase(i_min, i_max):.12g}")
    except (polarimetry.DegenerateDenominator, polarimetry.InvalidExtrema) as exc:
        print(f"warning: {exc}", file=sys.stderr)
        print("cos2_phase=undefined")
    return 0


# ---------------------------------------------------------------------------
# fringe

def _cmd_fringe_generate(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    delta = r.angle("delta", required=True)
    beta = r.angle("beta", default=0.0)
    k0 = r.number("k0", default=0.2)
    width = r.integer("width", default=640)
    height = r.integer("height", default=480)
    noise = r.number("noise-sigma", default=0.0)
    envelope = r.number("envelope-width", default=None)
    phi0 = r.angle("phi0", default=0.0)
    seed = r.integer("seed", default=0)
    out = r.text("out", default="interferogram.pgm")
    outdir = _outdir(args)

    img = fringes.generate(
        delta, beta, k0, size=(height, width), noise_sigma=noise,
        envelope_width=envelope, seed=seed, phi0=phi0,
    )
    path = _outpath(outdir, out)
    fringes.save_interferogram(img, path, extra={"seed": seed, "beta": beta,
                                                 "noise_sigma": noise})
    r.write(outdir, "fringe_generate")
    print(f"image written to {path} ({height}x{width}, 2*delta={2*delta:.6g})")
    return 0


def _parse_region(text: str) -> fringes.Region:
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"region must be 'c0:c1:r0:r1', got {text!r}")
    c0, c1, r0, r1 = (int(p) for p in parts)
    return fringes.Region(c0, c1, r0, r1)


def _cmd_fringe_analyze(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    image = r.text("image", required=True)
    method = r.text("method", default="both")
    sg_window = r.integer("sg-window", default=11)
    sg_order = r.integer("sg-order", default=3)
    out = r.text("out", default=None)
    outdir = _outdir(args)

    img, meta = fringes.load_interferogram(image)
    if args.region:
        regions = [_parse_region(s) for s in args.region]
        r.resolved["regions"] = ";".join(args.region)
    else:
        regions = fringes.default_regions(img)
        r.resolved["regions"] = "auto"

    result = fringes.retrieve_phase(img, regions, method=method,
                                    sg_window=sg_window, sg_order=sg_order)
    r.write(outdir, "fringe_analyze")

    print(f"carrier_k0={result.carrier:.12g}")
    for i, est in enumerate(result.region_estimates):
        print(f"region_{i}_2delta={est:.12g}")
    print(f"estimate_2delta={result.estimate:.12g}")
    if result.uncertainty is None:
        print("uncertainty=undefined (single region)")
    else:
        print(f"uncertainty={result.uncertainty:.12g}")
    if result.method_disagreement is not None:
        print(f"method_disagreement={result.method_disagreement:.12g}")
    if result.failed_regions:
        print(f"warning: {result.failed_regions} region(s) failed", file=sys.stderr)
    if "true_delta" in meta:
        truth = su2.wrap_angle(2.0 * float(meta["true_delta"]))
        error = abs(su2.wrap_angle(result.estimate - truth))
        print(f"true_2delta={truth:.12g}")
        print(f"abs_error={error:.12g}")
    if out:
        rows = [(i, reg.col_start, reg.col_end, reg.row_start, reg.row_end, est)
                for i, (reg, est) in enumerate(zip(regions, result.region_estimates))]
        _write_csv(_outpath(outdir, out),
                   ["region", "col_start", "col_end", "row_start", "row_end", "estimate_2delta"],
                   rows)
    profiles_out = r.text("profiles-out", default=None)
    if profiles_out:
        up, low = fringes.column_average(img, regions[0])
        up_s = fringes.savitzky_golay(up, sg_window, sg_order)
        low_s = fringes.savitzky_golay(low, sg_window, sg_order)
        _write_csv(_outpath(outdir, profiles_out),
                   ["column", "upper", "lower", "upper_smooth", "lower_smooth"],
                   zip(range(regions[0].col_start, regions[0].col_end),
                       up.tolist(), low.tolist(), up_s.tolist(), low_s.tolist()))
    return 0


# ---------------------------------------------------------------------------
# visibility

def _simulated_visibility(theta1, theta2, theta3, samples=1024) -> float:
    array = [plates.quarter_wave(theta1), plates.half_wave(theta2), plates.quarter_wave(theta3)]
    u = plates.compose(array)
    phis = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    intensity, _ = interferometer._intensity_sweep("V", u, phis)
    i_max = polarimetry._interpolated_extremum(intensity, int(np.argmax(intensity)))
    i_min = polarimetry._interpolated_extremum(intensity, int(np.argmin(intensity)))
    return (i_max - i_min) / (i_max + i_min)


def _cmd_visibility(args, config) -> int:
    r = Resolver(args, config, args.degrees)
    t1_grid = r.angle_grid("theta1", required=True)
    t2_grid = r.angle_grid("theta2", required=True)
    t3_grid = r.angle_grid("theta3", required=True)
    out = r.text("out", default="visibility.csv")
    check = bool(args.check)
    r.resolved["check"] = check
    outdir = _outdir(args)

    header = ["theta1", "theta2", "theta3", "visibility"]
    if check:
        header.append("visibility_sim")
    rows = []
    for t1 in t1_grid:
        for t2 in t2_grid:
            for t3 in t3_grid:
                row = [float(t1), float(t2), float(t3),
                       interferometer.visibility_plates(t1, t2, t3)]
                if check:
                    row.append(_simulated_visibility(t1, t2, t3))
                rows.append(tuple(row))
    _write_csv(_outpath(outdir, out), header, rows)
    r.write(outdir, "visibility")
    print(f"visibility data written to {_outpath(outdir, out)} ({len(rows)} points)")
    return 0


# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--degrees", action="store_true",
                        help="interpret angle arguments as degrees")
    parser.add_argument("--config", help="key=value file supplying defaults")
    parser.add_argument("--out-dir", help=f"output directory (default ${OUTDIR_ENV} or '.')")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polphase",
        description="Pancharatnam-phase simulation and retrieval toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="compile an SU(2) operator into wave plates")
    _add_common(p)
    for name in ("xi", "eta", "zeta", "phi"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--mode", type=int, choices=(3, 5))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("interf", help="Mach-Zehnder interferometer sweeps")
    isub = p.add_subparsers(dest="interf_command", required=True)
    ps = isub.add_parser("sweep", help="phi sweep: CSV of (phi, I_V, I_H) plus 2*delta")
    _add_common(ps)
    for name in ("xi", "eta", "zeta"):
        ps.add_argument(f"--{name}", type=float)
    ps.add_argument("--samples", type=int)
    ps.add_argument("--out")
    ps.set_defaults(func=_cmd_interf_sweep)
    pu = isub.add_parser("surface", help="cos^2(phase) over an (xi, eta) grid at fixed zeta")
    _add_common(pu)
    pu.add_argument("--zeta", type=float)
    pu.add_argument("--xi-grid", help="'start:stop:count' or single value")
    pu.add_argument("--eta-grid", help="'start:stop:count' or single value")
    pu.add_argument("--out")
    pu.set_defaults(func=_cmd_interf_surface)

    p = sub.add_parser("polarimetry", help="rotating plate-array scans")
    _add_common(p)
    p.add_argument("--mode", choices=("full", "zeta2pi", "ximinuspi"))
    p.add_argument("--xi", type=float)
    p.add_argument("--eta", type=float, help="eta for the --sweep-out raw scan")
    p.add_argument("--zeta", type=float)
    p.add_argument("--eta-steps", type=int)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--noise-sigma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--plates", help="scan a plate-list file instead of Euler angles")
    p.add_argument("--sweep-out", help="also write the raw (phi, intensity) scan at --eta")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_polarimetry)

    p = sub.add_parser("fringe", help="synthetic dual-half interferograms")
    fsub = p.add_subparsers(dest="fringe_command", required=True)
    pg = fsub.add_parser("generate", help="write a synthetic image plus metadata sidecar")
    _add_common(pg)
    for name in ("delta", "beta", "k0", "noise-sigma", "envelope-width", "phi0"):
        pg.add_argument(f"--{name}", type=float)
    pg.add_argument("--width", type=int)
    pg.add_argument("--height", type=int)
    pg.add_argument("--seed", type=int)
    pg.add_argument("--out")
    pg.set_defaults(func=_cmd_fringe_generate)
    pa = fsub.add_parser("analyze", help="retrieve 2*delta from an image")
    _add_common(pa)
    pa.add_argument("--image")
    pa.add_argument("--method", choices=("minima", "fourier", "both"))
    pa.add_argument("--region", action="append",
                    help="evaluation region 'c0:c1:r0:r1' (repeatable; default: auto)")
    pa.add_argument("--sg-window", type=int)
    pa.add_argument("--sg-order", type=int)
    pa.add_argument("--out", help="optional per-region CSV report")
    pa.add_argument("--profiles-out", help="optional CSV of the first region's profiles")
    pa.set_defaults(func=_cmd_fringe_analyze)

    p = sub.add_parser("visibility", help="fringe contrast over plate angles")
    _add_common(p)
    for name in ("theta1", "theta2", "theta3"):
        p.add_argument(f"--{name}", help="'value' or 'start:stop:count'")
    p.add_argument("--check", action="store_true",
                   help="add a column cross-checking against the simulated interferometer")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_visibility)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(getattr(args, "config", None))
        return args.func(args, config)
    except Exception as exc:  # single machine-parsable error line
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
