"""CSV and JSON wire formats shared by the simulator, fitter and CLI.

Floats are written with 17 significant digits so every file round-trips to
the exact double that produced it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .detector import TransitTrace
from .kinematics import EnsembleRecord
from .reconstruct import FitResult
from .thermometry import TemperatureEstimate


class CsvFormatError(ValueError):
    """Malformed CSV input; the message carries the offending line number."""


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def write_scan_csv(path, axis_name: str, axis_values, transmissions) -> None:
    """Scan output: header `x_um,T` or `delta_pa_mhz,T`, one row per sample."""
    lines = [f"{axis_name},T"]
    lines += [f"{_fmt(a)},{_fmt(T)}" for a, T in zip(axis_values, transmissions)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_trace_csv(path, trace: TransitTrace) -> None:
    """Trace format `t_s,expected_T,counts`; counts column empty until sampled."""
    lines = ["t_s,expected_T,counts"]
    if trace.counts is None:
        lines += [f"{_fmt(t)},{_fmt(T)}," for t, T in zip(trace.t, trace.expected_T)]
    else:
        lines += [
            f"{_fmt(t)},{_fmt(T)},{int(k)}"
            for t, T, k in zip(trace.t, trace.expected_T, trace.counts)
        ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace_csv(path) -> TransitTrace:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != "t_s,expected_T,counts":
        raise CsvFormatError(f"{path}:1: expected header 't_s,expected_T,counts'")
    t, T, counts = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise CsvFormatError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
        try:
            t.append(float(parts[0]))
            T.append(float(parts[1]))
            counts.append(None if parts[2] == "" else int(parts[2]))
        except ValueError as exc:
            raise CsvFormatError(f"{path}:{lineno}: {exc}") from None
    has_counts = [c is not None for c in counts]
    if any(has_counts) and not all(has_counts):
        first_bad = has_counts.index(False) + 2
        raise CsvFormatError(f"{path}:{first_bad}: counts column is only partially filled")
    return TransitTrace(
        t=np.array(t),
        expected_T=np.array(T),
        counts=np.array(counts, dtype=np.int64) if all(has_counts) and counts else None,
    )


def write_ensemble_csv(path, records) -> None:
    """Ensemble format `v0_mps,t_arr_ms,v_arr_mps`."""
    lines = ["v0_mps,t_arr_ms,v_arr_mps"]
    lines += [f"{_fmt(r.v0_mps)},{_fmt(r.t_arr_ms)},{_fmt(r.v_arr_mps)}" for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def read_ensemble_csv(path) -> list[EnsembleRecord]:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != "v0_mps,t_arr_ms,v_arr_mps":
        raise CsvFormatError(f"{path}:1: expected header 'v0_mps,t_arr_ms,v_arr_mps'")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise CsvFormatError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
        try:
            records.append(EnsembleRecord(float(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise CsvFormatError(f"{path}:{lineno}: {exc}") from None
    return records


def write_fit_json(path, result: FitResult) -> None:
    Path(path).write_text(json.dumps(result.to_dict(), indent=2) + "\n")


def read_fit_json(path) -> FitResult:
    return FitResult.from_dict(json.loads(Path(path).read_text()))


def write_temperature_json(path, est: TemperatureEstimate) -> None:
    Path(path).write_text(
        json.dumps(
            {
                "temperature_k": est.temperature_k,
                "sigma_t_k": est.sigma_t_k,
                "n_used": est.n_used,
                "v_min_mps": est.v_min_mps,
                "t_min_ms": est.t_min_ms,
            },
            indent=2,
        )
        + "\n"
    )


def write_degeneracy_json(path, reports) -> None:
    Path(path).write_text(
        json.dumps(
            [
                {"transform": r.transform, "sup_diff": r.sup_diff, "degenerate": r.degenerate}
                for r in reports
            ],
            indent=2,
        )
        + "\n"
    )


def write_mode_image_csv(path, x_um, y_um, intensity) -> None:
    """Mode image grid: `x_um,y_um,intensity`, row-major over y then x."""
    lines = ["x_um,y_um,intensity"]
    for j, yv in enumerate(y_um):
        for i, xv in enumerate(x_um):
            lines.append(f"{_fmt(xv)},{_fmt(yv)},{_fmt(intensity[j, i])}")
    Path(path).write_text("\n".join(lines) + "\n")
