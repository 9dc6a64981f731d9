"""Weak-field cavity transmission versus atom position and probe detuning.

All rates and detunings are carried as nu = omega/2pi in MHz.  The
transmission formula is degree-0 homogeneous in (g, kappa, gamma, delta_pa,
delta_ca), so this is exactly equivalent to angular-frequency units.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .modes import LabPoint, ModeGeometry, ModeIndex, effective_coupling, lab_to_mode


class SingularParameterError(ValueError):
    """The transmission denominator vanished for the given parameters."""


@dataclass(frozen=True)
class Rates:
    """Coupling and decay rates in 2pi MHz.

    g0 is the optimal TEM00 coupling, kappa the cavity field decay and gamma
    the atomic dipole decay.  Strong coupling (g0 larger than both decays) is
    checked and reported as a warning, not an error.
    """

    g0: float = 23.9
    kappa: float = 2.6
    gamma: float = 2.6

    def __post_init__(self):
        for name in ("g0", "kappa", "gamma"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.is_strong_coupling:
            warnings.warn(
                f"not in the strong-coupling regime: g0={self.g0} is not larger "
                f"than kappa={self.kappa} and gamma={self.gamma}",
                stacklevel=2,
            )

    @property
    def is_strong_coupling(self) -> bool:
        return self.g0 > self.kappa and self.g0 > self.gamma


@dataclass(frozen=True)
class Detunings:
    """Probe-atom and cavity-atom detunings in 2pi MHz."""

    delta_pa: float = 0.0
    delta_ca: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.delta_pa) and np.isfinite(self.delta_ca)):
            raise ValueError(f"detunings must be finite, got {self}")


@dataclass(frozen=True)
class SystemConfig:
    """Complete physical configuration of the atom-cavity system.

    cross_term_sign selects the sign s of the delta_ca * delta_pa cross term
    in the transmission denominator, [g^2 - delta_pa^2 + s delta_ca delta_pa
    + gamma kappa]^2.  The default -1 keeps the published weak-field form;
    +1 recovers the expansion of |(gamma + i d_pa)(kappa + i(d_pa - d_ca))
    + g^2|^2.  The two agree whenever delta_ca = 0.
    """

    rates: Rates = field(default_factory=Rates)
    detunings: Detunings = field(default_factory=Detunings)
    mode: ModeIndex = field(default_factory=ModeIndex)
    geometry: ModeGeometry = field(default_factory=ModeGeometry)
    cross_term_sign: int = -1

    def __post_init__(self):
        if self.cross_term_sign not in (-1, 1):
            raise ValueError(f"cross_term_sign must be -1 or +1, got {self.cross_term_sign}")


def transmission_vs_coupling(g_eff, rates: Rates, detunings: Detunings, cross_term_sign: int = -1):
    """Weak-field transmission for a given effective coupling (scalar or array).

    Normalized so an empty cavity on resonance transmits 1.
    """
    g = np.asarray(g_eff, dtype=float)
    dpa, dca = detunings.delta_pa, detunings.delta_ca
    kap, gam = rates.kappa, rates.gamma
    num = kap**2 * (gam**2 + dpa**2)
    den = (g**2 - dpa**2 + cross_term_sign * dca * dpa + gam * kap) ** 2 + (
        kap * dpa + gam * dpa - gam * dca
    ) ** 2
    if np.any(den == 0.0):
        raise SingularParameterError(
            f"transmission denominator vanished (rates={rates}, detunings={detunings})"
        )
    out = num / den
    return out if out.ndim else float(out)


def transmission_at(cfg: SystemConfig, p: LabPoint):
    """Transmission at a lab-frame point; fields of p may be numpy arrays.

    The 2D antinode form is the same call with p.z = 0.
    """
    mp = lab_to_mode(p, cfg.geometry.tilt_deg)
    g = effective_coupling(cfg.rates.g0, cfg.mode, cfg.geometry, mp)
    return transmission_vs_coupling(g, cfg.rates, cfg.detunings, cfg.cross_term_sign)


def position_scan(cfg: SystemConfig, y_lab_um: float, x_range_um: tuple, samples: int, z_um: float = 0.0):
    """Transmission along a vertical lab line at fixed off-axis position.

    Returns (x, T) arrays with x uniformly sampled over x_range_um.
    """
    x0, x1 = x_range_um
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    if not x1 > x0:
        raise ValueError(f"empty position range ({x0}, {x1})")
    x = np.linspace(x0, x1, samples)
    return x, transmission_at(cfg, LabPoint(x, y_lab_um, z_um))


def detuning_scan(cfg: SystemConfig, p: LabPoint, delta_pa_range_mhz: tuple, samples: int):
    """Transmission versus probe-atom detuning at a fixed lab point.

    delta_ca is held at the configured value.  Returns (delta_pa, T).
    """
    d0, d1 = delta_pa_range_mhz
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    if not d1 > d0:
        raise ValueError(f"empty detuning range ({d0}, {d1})")
    deltas = np.linspace(d0, d1, samples)
    mp = lab_to_mode(p, cfg.geometry.tilt_deg)
    g = effective_coupling(cfg.rates.g0, cfg.mode, cfg.geometry, mp)
    T = np.array(
        [
            transmission_vs_coupling(
                g, cfg.rates, Detunings(d, cfg.detunings.delta_ca), cfg.cross_term_sign
            )
            for d in deltas
        ]
    )
    return deltas, T


def local_maxima(values) -> np.ndarray:
    """Indices of strict three-point local maxima (never the endpoints)."""
    v = np.asarray(values)
    return np.where((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]))[0] + 1


def local_minima(values) -> np.ndarray:
    """Indices of strict three-point local minima (never the endpoints)."""
    v = np.asarray(values)
    return np.where((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:]))[0] + 1
