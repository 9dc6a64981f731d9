"""Photon-counting detector model: expected transmission traces and Poisson counts."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .kinematics import Trajectory, x_at
from .modes import LabPoint
from .transmission import SystemConfig, transmission_at


@dataclass(frozen=True)
class DetectorConfig:
    """Counting configuration.

    flux0_cps is the detected count rate at unit transmission; background_cps
    adds a transmission-independent rate.  The window is the trace extent in
    us relative to the crossing time t_c and must contain it.  Transmission is
    evaluated at bin centers: at the speeds of interest it changes by a few
    percent at most across one bin, which is far below counting noise.
    """

    bin_width_us: float = 10.0
    flux0_cps: float = 5e6
    background_cps: float = 0.0
    window_us: tuple = (-250.0, 250.0)

    def __post_init__(self):
        if self.bin_width_us <= 0:
            raise ValueError(f"bin width must be positive, got {self.bin_width_us}")
        if self.flux0_cps < 0 or self.background_cps < 0:
            raise ValueError("count rates must be non-negative")
        start, stop = self.window_us
        if not (start < stop and start <= 0.0 <= stop):
            raise ValueError(f"window {self.window_us} must contain the crossing time")


@dataclass(frozen=True)
class TransitTrace:
    """Time-binned transit: bin-center times (s), expected transmission and
    observed counts (None until sampled)."""

    t: np.ndarray
    expected_T: np.ndarray
    counts: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        object.__setattr__(self, "expected_T", np.asarray(self.expected_T, dtype=float))
        if len(self.t) != len(self.expected_T):
            raise ValueError("time and transmission arrays differ in length")
        if self.counts is not None:
            object.__setattr__(self, "counts", np.asarray(self.counts))
            if len(self.counts) != len(self.t):
                raise ValueError("counts array differs in length")
            if np.any(self.counts < 0):
                raise ValueError("counts must be non-negative")

    def __len__(self) -> int:
        return len(self.t)


def bin_centers(det: DetectorConfig, t_c_s: float) -> np.ndarray:
    """Absolute bin-center times (s) of the detection window around t_c."""
    start, stop = det.window_us
    n_bins = int(round((stop - start) / det.bin_width_us))
    if n_bins < 1:
        raise ValueError(f"degenerate window {det.window_us}")
    return t_c_s + (start + (np.arange(n_bins) + 0.5) * det.bin_width_us) * 1e-6


def expected_trace(cfg: SystemConfig, tr: Trajectory, det: DetectorConfig) -> TransitTrace:
    """Expected transmission trace of a transit (counts left empty)."""
    t = bin_centers(det, tr.t_c_s)
    p = LabPoint(x_at(tr, t), tr.y_off_um, tr.z_pos_nm * 1e-3)
    return TransitTrace(t=t, expected_T=transmission_at(cfg, p))


def sample_counts(trace: TransitTrace, det: DetectorConfig, seed: int) -> TransitTrace:
    """Draw Poisson counts for each bin; deterministic for a given seed.

    The per-bin mean is (flux0 * T + background) * bin_width.
    """
    rng = np.random.default_rng(seed)
    lam = (det.flux0_cps * trace.expected_T + det.background_cps) * det.bin_width_us * 1e-6
    return replace(trace, counts=rng.poisson(lam).astype(np.int64))


def expected_bin_counts(trace: TransitTrace, det: DetectorConfig) -> np.ndarray:
    """Per-bin Poisson means for a trace under a detector configuration."""
    return (det.flux0_cps * trace.expected_T + det.background_cps) * det.bin_width_us * 1e-6
