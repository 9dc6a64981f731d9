"""Command-line front end for the transit simulation and fitting pipeline.

Every command is a thin deterministic wrapper over one library operation:
outputs depend only on the configuration file, flags and seed.  Exit codes:
0 success, 2 validation error, 3 fit non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import fileio
from .config import (
    ConfigError,
    RunConfig,
    apply_overrides,
    detector_config,
    dump_run_config,
    fall_config,
    load_run_config,
    system_config,
)
from .detector import expected_trace, sample_counts
from .kinematics import Trajectory, sample_ensemble
from .modes import LabPoint, lab_to_mode, mode_amplitude
from .reconstruct import (
    KNOWN_TRANSFORMS,
    NoTransitError,
    degeneracy_scan,
    fit_transit,
)
from .svgplot import heatmap_svg
from .thermometry import estimate_temperature, records_from_fits
from .transmission import Detunings, detuning_scan, position_scan, transmission_vs_coupling

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
    p.add_argument("--out", metavar="PATH", help="output path")
    p.add_argument("--dump-config", metavar="PATH", help="write the effective configuration")
    p.add_argument("--seed", dest="cfg_seed", type=int, metavar="N", help="random seed")
    for f in fields(RunConfig):
        if f.name in ("out", "seed"):
            continue
        flag = "--" + f.name.replace("_", "-")
        p.add_argument(
            flag,
            dest=f"cfg_{f.name}",
            type={"int": int, "float": float, "str": str}[f.type],
            metavar="V",
            help=argparse.SUPPRESS,
        )


def _build_config(args) -> RunConfig:
    rc = load_run_config(args.config) if args.config else RunConfig()
    overrides = {
        f.name: getattr(args, f"cfg_{f.name}", None)
        for f in fields(RunConfig)
        if f.name not in ("out",)
    }
    apply_overrides(rc, overrides)
    if args.out is not None:
        rc.out = args.out
    if args.dump_config:
        dump_run_config(args.dump_config, rc)
    return rc


def _out_path(rc: RunConfig, default: str) -> Path:
    return Path(rc.out or default)


def cmd_mode_image(args) -> int:
    rc = _build_config(args)
    cfg = system_config(rc)
    n = args.samples
    extent = args.extent_um
    x = np.linspace(-extent, extent, n)
    y = np.linspace(-extent, extent, n)
    xx, yy = np.meshgrid(x, y)
    mp = lab_to_mode(LabPoint(xx, yy, 0.0), cfg.geometry.tilt_deg)
    intensity = mode_amplitude(cfg.mode, cfg.geometry, mp) ** 2
    out_csv = _out_path(rc, "mode_image.csv")
    fileio.write_mode_image_csv(out_csv, x, y, intensity)
    heatmap_svg(
        out_csv.with_suffix(".svg"),
        x,
        y,
        intensity,
        xlabel="x (um)",
        ylabel="y (um)",
        title=f"|psi|^2 TEM{cfg.mode.m}{cfg.mode.n} tilt {cfg.geometry.tilt_deg:g} deg",
    )
    return EXIT_OK


def cmd_scan(args) -> int:
    rc = _build_config(args)
    cfg = system_config(rc)
    if args.axis == "pos":
        if args.g is not None:
            raise ConfigError("--g applies only to --axis freq")
        x, T = position_scan(cfg, args.y, (args.x_min, args.x_max), args.samples)
        fileio.write_scan_csv(_out_path(rc, "scan.csv"), "x_um", x, T)
    else:
        deltas = np.linspace(args.delta_min, args.delta_max, args.samples)
        if args.g is not None:
            if args.g < 0:
                raise ConfigError(f"--g must be non-negative, got {args.g}")
            T = np.array(
                [
                    transmission_vs_coupling(
                        args.g,
                        cfg.rates,
                        Detunings(d, cfg.detunings.delta_ca),
                        cfg.cross_term_sign,
                    )
                    for d in deltas
                ]
            )
        else:
            deltas, T = detuning_scan(
                cfg, LabPoint(args.x, args.y, 0.0), (args.delta_min, args.delta_max), args.samples
            )
        fileio.write_scan_csv(_out_path(rc, "scan.csv"), "delta_pa_mhz", deltas, T)
    return EXIT_OK


def _trajectory_from_args(args) -> Trajectory:
    return Trajectory(y_off_um=args.y, v_mps=args.v, t_c_s=args.tc, z_pos_nm=args.z)


def cmd_transit(args) -> int:
    rc = _build_config(args)
    trace = expected_trace(system_config(rc), _trajectory_from_args(args), detector_config(rc))
    det = detector_config(rc)
    trace = sample_counts(trace, det, rc.seed)
    fileio.write_trace_csv(_out_path(rc, "trace.csv"), trace)
    return EXIT_OK


def cmd_fit(args) -> int:
    rc = _build_config(args)
    cfg, det = system_config(rc), detector_config(rc)
    trace_path = Path(args.trace)
    if trace_path.is_dir():
        # batch mode: fit every trace in the directory, ordered by filename
        inputs = sorted(trace_path.glob("*.csv"))
        if not inputs:
            raise ConfigError(f"no trace CSV files found in {trace_path}")
        outdir = _out_path(rc, "fits")
        outdir.mkdir(parents=True, exist_ok=True)
        status = EXIT_OK
        for path in inputs:
            result = fit_transit(cfg, det, fileio.read_trace_csv(path), flux0_cps=args.flux0_known)
            fileio.write_fit_json(outdir / (path.stem + ".json"), result)
            if not result.converged:
                print(f"fit of {path.name} did not converge", file=sys.stderr)
                status = EXIT_NO_CONVERGENCE
        return status
    result = fit_transit(cfg, det, fileio.read_trace_csv(trace_path), flux0_cps=args.flux0_known)
    fileio.write_fit_json(_out_path(rc, "fit.json"), result)
    if not result.converged:
        print("fit did not converge; best-so-far parameters written", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    rc = _build_config(args)
    transforms = [t.strip() for t in args.transforms.split(",") if t.strip()]
    reports = degeneracy_scan(
        system_config(rc),
        _trajectory_from_args(args),
        transforms,
        det=detector_config(rc),
        threshold=rc.degeneracy_tol,
    )
    fileio.write_degeneracy_json(_out_path(rc, "degeneracy.json"), reports)
    return EXIT_OK


def cmd_ensemble(args) -> int:
    rc = _build_config(args)
    records = sample_ensemble(
        fall_config(rc),
        args.temperature_uk * 1e-6,
        rc.atom_mass_kg,
        args.n,
        rc.seed,
        timing_jitter_s=args.timing_jitter_ms * 1e-3,
    )
    fileio.write_ensemble_csv(_out_path(rc, "ensemble.csv"), records)
    return EXIT_OK


def cmd_thermometry(args) -> int:
    rc = _build_config(args)
    if bool(args.ensemble) == bool(args.fits):
        raise ConfigError("pass exactly one of --ensemble CSV or --fits DIR")
    fc = fall_config(rc)
    if args.ensemble:
        records = fileio.read_ensemble_csv(args.ensemble)
    else:
        paths = sorted(Path(args.fits).glob("*.json"))
        if not paths:
            raise ConfigError(f"no fit JSON files found in {args.fits}")
        records = records_from_fits([fileio.read_fit_json(p) for p in paths], fc)
    est = estimate_temperature(records, fc, rc.atom_mass_kg, n_bins=args.n_bins)
    fileio.write_temperature_json(_out_path(rc, "temperature.json"), est)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-transit",
        description="Simulate and reconstruct single-atom transits through a tilted TEM10 cavity mode",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mode-image", help="CSV + SVG heatmap of the mode intensity in the lab frame")
    _add_config_flags(p)
    p.add_argument("--extent-um", type=float, default=50.0, help="half-extent of the grid (um)")
    p.add_argument("--samples", type=int, default=161, help="grid points per axis")
    p.set_defaults(func=cmd_mode_image)

    p = sub.add_parser("scan", help="transmission scan along position or probe detuning")
    _add_config_flags(p)
    p.add_argument("--axis", choices=("pos", "freq"), required=True)
    p.add_argument("--y", type=float, default=0.0, help="off-axis position (um)")
    p.add_argument("--x", type=float, default=0.0, help="vertical position for freq scans (um)")
    p.add_argument("--x-min", type=float, default=-80.0)
    p.add_argument("--x-max", type=float, default=80.0)
    p.add_argument("--delta-min", type=float, default=-40.0)
    p.add_argument("--delta-max", type=float, default=40.0)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--g", type=float, help="fixed coupling (MHz) instead of position-dependent")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("transit", help="simulate a transit trace with Poisson counts")
    _add_config_flags(p)
    p.add_argument("--y", type=float, required=True, help="off-axis offset (um)")
    p.add_argument("--v", type=float, required=True, help="transit speed (m/s)")
    p.add_argument("--tc", type=float, default=0.0, help="crossing time (s)")
    p.add_argument("--z", type=float, default=0.0, help="axial position (nm)")
    p.set_defaults(func=cmd_transit)

    p = sub.add_parser("fit", help="maximum-likelihood trajectory fit of trace CSVs")
    _add_config_flags(p)
    p.add_argument(
        "--trace",
        required=True,
        metavar="CSV_OR_DIR",
        help="input trace file, or a directory of traces to fit in filename order",
    )
    p.add_argument(
        "--flux0-known",
        type=float,
        metavar="CPS",
        help="use this empty-cavity rate instead of measuring it from the trace",
    )
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("degeneracy", help="sup-norm trace differences under symmetry transforms")
    _add_config_flags(p)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--tc", type=float, default=0.0)
    p.add_argument("--z", type=float, default=0.0)
    p.add_argument("--transforms", default=",".join(KNOWN_TRANSFORMS))
    p.set_defaults(func=cmd_degeneracy)

    p = sub.add_parser("ensemble", help="sample a thermal ensemble of falling atoms")
    _add_config_flags(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--temperature-uk", type=float, default=186.0)
    p.add_argument(
        "--timing-jitter-ms",
        type=float,
        default=0.0,
        help="clock error added to recorded arrival times",
    )
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("thermometry", help="temperature estimate from an ensemble or fit results")
    _add_config_flags(p)
    p.add_argument("--ensemble", metavar="CSV")
    p.add_argument("--fits", metavar="DIR")
    p.add_argument("--n-bins", type=int, default=40)
    p.set_defaults(func=cmd_thermometry)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, fileio.CsvFormatError, NoTransitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
