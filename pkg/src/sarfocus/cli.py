"""Command-line front end: ``sarfocus <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dce import (
    AmbiguousTrajectoryError,
    NoEstimateError,
    estimate_doppler,
    format_estimate,
    parse_estimate,
)
from .echo import Grid, SimOptions, auto_grid, expected_cell, load_scene, simulate_raw
from .io import RasterFormatError, read_raster, render_magnitude, write_raster
from .metrics import DEFAULT_WINDOW, MisfocusError, analyze_point_target
from .params import DESK, DESK_APERTURE, RADARSAT1, ConfigError, load_config
from .raster import DomainError
from .rda import RdaOptions, focus_rda, range_compress
from .speckle import FilterSpec, median_despeckle
from .wk import WkOptions, focus_wk

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVALID = 4
EXIT_FORMAT = 5
EXIT_ESTIMATION = 6

EPILOG = """\
exit codes:
  0  success
  2  usage error (unknown flag, missing argument)
  3  file could not be read or written
  4  invalid parameter, configuration or scene
  5  malformed raster file
  6  estimation or analysis failed (no centroid, ambiguous trajectory, misfocus)

errors are reported on stderr as one line:
  sarfocus: error code=<n> kind=<kind>: <message>

environment:
  SARFOCUS_THREADS  cap on worker threads (0 or unset = all cores)
"""

PRESETS = {"desk": DESK, "radarsat1": RADARSAT1}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _params(args):
    if args.config:
        return load_config(args.config)
    return PRESETS[args.preset]


def _span(text: str | None):
    if text is None:
        return None
    try:
        a, b = text.split(":")
        return slice(int(a) if a else None, int(b) if b else None)
    except ValueError:
        raise ValueError(f"expected START:STOP, got {text!r}") from None


def _pair(text: str, kind=float):
    try:
        a, b = text.split(",")
        return kind(a), kind(b)
    except ValueError:
        raise ValueError(f"expected two comma-separated numbers, got {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    params = _params(args)
    scene = load_scene(args.scene, args.aperture)
    grid_args = (args.rows, args.cols, args.t0, args.eta0)
    if any(g is not None for g in grid_args):
        if any(g is None for g in grid_args):
            raise ValueError("--rows, --cols, --t0 and --eta0 must be given together")
        grid = Grid(*grid_args)
    else:
        grid = auto_grid(scene, params)
    opts = SimOptions(include_rvp=not args.no_rvp, noise_snr_db=args.snr, seed=args.seed)
    write_raster(simulate_raw(scene, params, grid, opts), args.output)
    return EXIT_OK


def _centroid(args):
    f_dc, frac = args.fdc, args.fdc_frac
    if args.estimate:
        est = parse_estimate(Path(args.estimate).read_text())
        f_dc = est.f_dc if f_dc is None else f_dc
        frac = est.f_dc_frac if frac is None else frac
    return (0.0 if f_dc is None else f_dc), frac


def cmd_focus_rda(args) -> int:
    params = _params(args)
    f_dc, frac = _centroid(args)
    opts = RdaOptions(rcmc_mode=args.rcmc, interp_kernel_len=args.kernel, f_dc=f_dc,
                      f_dc_frac=frac, R0_center=args.r0_center,
                      azimuth_filter=args.azimuth_filter, aperture_time=args.aperture)
    write_raster(focus_rda(read_raster(args.input), params, opts), args.output)
    return EXIT_OK


def cmd_focus_wk(args) -> int:
    params = _params(args)
    f_dc, frac = _centroid(args)
    opts = WkOptions(R_ref=args.rref, stolt_kernel_len=args.kernel, f_dc=f_dc,
                     f_dc_frac=frac, origin=args.origin)
    write_raster(focus_wk(read_raster(args.input), params, opts), args.output)
    return EXIT_OK


def cmd_estimate_dc(args) -> int:
    params = _params(args)
    data = read_raster(args.input)
    rc = data if args.compressed else range_compress(data, params)
    est = estimate_doppler(rc, params, args.method, args.resolve, _span(args.cols),
                           _span(args.rows), _span(args.window_cols))
    _emit(format_estimate(est), args.output)
    return EXIT_OK


def cmd_despeckle(args) -> int:
    r = read_raster(args.input)
    out = median_despeckle(r.data, FilterSpec.parse(args.window))
    write_raster(r.with_data(out.astype(np.complex64)), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    img = read_raster(args.input)
    cell = None
    if args.cell:
        cell = _pair(args.cell)
    elif args.target:
        R0, eta = _pair(args.target)
        cell = expected_cell(img, R0, eta, _params(args).c)
    rep = analyze_point_target(img, cell, args.window)
    _emit(rep.format_csv() if args.format == "csv" else rep.format_kv(), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    render_magnitude(read_raster(args.input), args.output, args.floor, args.clip)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sarfocus", description="Stripmap SAR simulation, focusing and analysis.",
                epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--config", help="key=value radar parameter file")
        g.add_argument("--preset", choices=sorted(PRESETS), default="desk",
                       help="built-in parameter set (default: desk)")
        return sp

    sp = add("simulate", cmd_simulate, "simulate raw echoes of a point-target scene")
    sp.add_argument("--scene", required=True, help="scene file: sigma_re sigma_im R0 eta_c [eta_0]")
    sp.add_argument("--aperture", type=float, default=DESK_APERTURE, help="aperture time (s)")
    sp.add_argument("--rows", type=int)
    sp.add_argument("--cols", type=int)
    sp.add_argument("--t0", type=float, help="fast time of column 0 (s)")
    sp.add_argument("--eta0", type=float, help="slow time of row 0 (s)")
    sp.add_argument("--snr", type=float, help="per-sample SNR in dB")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--no-rvp", action="store_true", help="drop the residual video phase term")
    sp.add_argument("output")

    def centroid_flags(sp):
        sp.add_argument("--fdc", type=float, help="unambiguous Doppler centroid (Hz)")
        sp.add_argument("--fdc-frac", type=float, help="fractional Doppler centroid (Hz)")
        sp.add_argument("--estimate", help="key=value file written by estimate-dc")

    sp = add("focus-rda", cmd_focus_rda, "focus with the range-Doppler algorithm")
    sp.add_argument("--rcmc", choices=["interp", "freq2d", "none"], default="interp")
    sp.add_argument("--kernel", type=int, choices=[4, 8, 16], default=8, help="interpolator taps")
    sp.add_argument("--r0-center", type=float, help="reference range for freq2d RCMC (m)")
    sp.add_argument("--azimuth-filter", choices=["phase", "replica"], default="phase")
    sp.add_argument("--aperture", type=float, help="aperture time for the replica filter (s)")
    centroid_flags(sp)
    sp.add_argument("input")
    sp.add_argument("output")

    sp = add("focus-wk", cmd_focus_wk, "focus with the wavenumber (omega-k) algorithm")
    sp.add_argument("--rref", type=float, help="reference range (m); default from the config")
    sp.add_argument("--kernel", type=int, choices=[4, 8, 16], default=8, help="Stolt interpolator taps")
    sp.add_argument("--origin", choices=["input", "reference"], default="input")
    centroid_flags(sp)
    sp.add_argument("input")
    sp.add_argument("output")

    sp = add("estimate-dc", cmd_estimate_dc, "estimate the Doppler centroid")
    sp.add_argument("--method", choices=["spectrum", "accc", "slope"], default="spectrum")
    sp.add_argument("--resolve", action="store_true", help="resolve the PRF ambiguity from the range walk")
    sp.add_argument("--compressed", action="store_true", help="input is already range compressed")
    sp.add_argument("--cols", help="START:STOP range cells for the fractional estimate")
    sp.add_argument("--rows", help="START:STOP rows of the trajectory window")
    sp.add_argument("--window-cols", help="START:STOP columns of the trajectory window")
    sp.add_argument("--output", "-o", help="write the estimate here instead of stdout")
    sp.add_argument("input")

    sp = add("despeckle", cmd_despeckle, "median-filter the image magnitude")
    sp.add_argument("--window", default="6x6", help="MxN window (default 6x6)")
    sp.add_argument("input")
    sp.add_argument("output")

    sp = add("analyze", cmd_analyze, "point-target impulse response report")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--cell", help="expected ROW,COL")
    g.add_argument("--target", help="expected R0,ETA (m, s) mapped through the raster axes")
    sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    sp.add_argument("--format", choices=["kv", "csv"], default="kv")
    sp.add_argument("--output", "-o")
    sp.add_argument("input")

    sp = add("render", cmd_render, "write a dB-scaled 8-bit graymap (P5)")
    sp.add_argument("--floor", type=float, default=-40.0, help="dB below the top that maps to black")
    sp.add_argument("--clip", type=float, default=100.0, help="upper percentile mapped to white")
    sp.add_argument("input")
    sp.add_argument("output")
    return p


def _fail(code: int, kind: str, exc) -> int:
    msg = " ".join(str(exc).split()) or type(exc).__name__
    print(f"sarfocus: error code={code} kind={kind}: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except RasterFormatError as exc:
        return _fail(EXIT_FORMAT, "format", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    except (NoEstimateError, AmbiguousTrajectoryError, MisfocusError) as exc:
        return _fail(EXIT_ESTIMATION, "estimation", exc)
    except (ConfigError, DomainError, ValueError) as exc:
        return _fail(EXIT_INVALID, "invalid", exc)


if __name__ == "__main__":
    sys.exit(main())
