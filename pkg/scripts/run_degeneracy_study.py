#!/usr/bin/env python3
"""Tabulate which trajectory symmetries survive for each mode and tilt.

Shows the mirror degeneracy of TEM00 and axis-aligned TEM10, its removal by
the 45 degree tilt and the antinode ambiguity that no geometry removes.
"""

from cavity_transit import (
    ModeGeometry,
    ModeIndex,
    SystemConfig,
    Trajectory,
    degeneracy_scan,
)

TRANSFORMS = ["y-mirror", "z-antinode-shift", "z-mirror"]


def main():
    tr = Trajectory(y_off_um=10.0, v_mps=0.42, z_pos_nm=50.0)
    cases = [
        ("TEM00 untilted", SystemConfig(mode=ModeIndex(0, 0), geometry=ModeGeometry(tilt_deg=0.0))),
        ("TEM10 untilted", SystemConfig(geometry=ModeGeometry(tilt_deg=0.0))),
        ("TEM10 tilt 45", SystemConfig()),
        ("TEM10 tilt -45", SystemConfig(geometry=ModeGeometry(tilt_deg=-45.0))),
    ]
    print(f"trajectory: y = {tr.y_off_um} um, v = {tr.v_mps} m/s, z = {tr.z_pos_nm} nm")
    print(f"{'geometry':16}" + "".join(f"{t:>20}" for t in TRANSFORMS))
    for name, cfg in cases:
        reports = degeneracy_scan(cfg, tr, TRANSFORMS)
        cells = [
            f"{'degenerate' if r.degenerate else f'sup={r.sup_diff:.3f}':>20}" for r in reports
        ]
        print(f"{name:16}" + "".join(cells))


if __name__ == "__main__":
    main()
