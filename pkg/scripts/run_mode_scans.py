#!/usr/bin/env python3
"""Transmission scans of the TEM10 mode: position scans at several off-axis
distances and detuning scans, written as CSV files.

Usage: python scripts/run_mode_scans.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from cavity_transit import (
    Detunings,
    LabPoint,
    ModeGeometry,
    SystemConfig,
    detuning_scan,
    position_scan,
)
from cavity_transit.fileio import write_scan_csv

import dataclasses


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/scans")
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = SystemConfig(geometry=ModeGeometry(tilt_deg=0.0))

    for y in (0.0, 20.0, -20.0, 35.0, -35.0, 40.0, -40.0, 45.0, -45.0):
        x, T = position_scan(cfg, y, (-80.0, 80.0), 2001)
        write_scan_csv(outdir / f"position_y{y:+05.1f}um.csv", "x_um", x, T)
        print(f"y = {y:+5.1f} um: min T = {T.min():.4g}")

    for dpa in (0.0, -10.0, -23.9):
        cfg_d = dataclasses.replace(cfg, detunings=Detunings(dpa, 0.0))
        x, T = position_scan(cfg_d, 0.0, (-80.0, 80.0), 2001)
        write_scan_csv(outdir / f"position_dpa{dpa:+06.1f}mhz.csv", "x_um", x, T)
        print(f"delta_pa = {dpa:+6.1f} MHz: max T = {T.max():.4g}")

    deltas, T = detuning_scan(cfg, LabPoint(16.83, 0.0, 0.0), (-40.0, 40.0), 2001)
    write_scan_csv(outdir / "detuning_at_lobe_peak.csv", "delta_pa_mhz", deltas, T)
    split = deltas[np.argmax(T * (deltas > 0))] - deltas[np.argmax(T * (deltas < 0))]
    print(f"vacuum Rabi splitting at the lobe peak: {split:.1f} MHz")
    print(f"wrote scans to {outdir}/")


if __name__ == "__main__":
    main()
