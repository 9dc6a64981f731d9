"""Trajectory recovery from count traces by Poisson maximum likelihood.

The fitter maximizes the exact Poisson log-likelihood of the binned counts
over (y_off, v, t_c) with the axial position held at the antinode (z = 0).
A coarse grid bracket is refined by Nelder-Mead simplex descent; the best
refinement restricted to the opposite sign of y_off quantifies how decisively
the mirror trajectory is excluded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from .detector import DetectorConfig, TransitTrace, expected_trace
from .kinematics import Trajectory
from .modes import LabPoint
from .transmission import SystemConfig, transmission_at

# Coarse-grid layout: y in [-3 w0, 3 w0] step w0/8, v bracketing all plausible
# fall speeds, t_c scanned over the dip support in bin-width steps.
Y_HALFWIDTH_WAISTS = 3.0
Y_STEP_WAISTS = 0.125
V_GRID_MPS = (0.25, 0.65, 0.025)
TC_HALFWIDTH_BINS = 6

N_REFINE_STARTS = 5
MAX_REFINE_EVALS = 2000
REFINE_REL_TOL = 1e-5
SIGN_RESOLVE_MARGIN = 1.0  # log-likelihood units

DIP_DEPTH_MIN = 0.5  # fraction of baseline the smoothed minimum must fall below

KNOWN_TRANSFORMS = ("y-mirror", "z-antinode-shift", "z-mirror")


class NoTransitError(ValueError):
    """The trace contains no detectable transit dip."""


@dataclass(frozen=True)
class FitParams:
    """Trajectory parameters exposed to the optimizer."""

    y_off_um: float
    v_mps: float
    t_c_s: float


@dataclass(frozen=True)
class FitResult:
    params: FitParams
    sigma_y_um: float
    sigma_v_mps: float
    sigma_tc_s: float
    log_lik: float
    mirror_log_lik: float
    converged: bool
    n_evals: int

    @property
    def sign_resolved(self) -> bool:
        """True when the mirrored hypothesis is excluded by a clear margin."""
        return self.log_lik - self.mirror_log_lik >= SIGN_RESOLVE_MARGIN

    def to_dict(self) -> dict:
        return {
            "y_off_um": self.params.y_off_um,
            "v_mps": self.params.v_mps,
            "t_c_s": self.params.t_c_s,
            "sigma_y_um": self.sigma_y_um,
            "sigma_v_mps": self.sigma_v_mps,
            "sigma_tc_s": self.sigma_tc_s,
            "log_lik": self.log_lik,
            "mirror_log_lik": self.mirror_log_lik,
            "converged": self.converged,
            "n_evals": self.n_evals,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        return cls(
            params=FitParams(d["y_off_um"], d["v_mps"], d["t_c_s"]),
            sigma_y_um=d["sigma_y_um"],
            sigma_v_mps=d["sigma_v_mps"],
            sigma_tc_s=d["sigma_tc_s"],
            log_lik=d["log_lik"],
            mirror_log_lik=d["mirror_log_lik"],
            converged=d["converged"],
            n_evals=d["n_evals"],
        )


@dataclass(frozen=True)
class DegeneracyReport:
    """Sup-norm trace difference under one symmetry transform."""

    transform: str
    sup_diff: float
    degenerate: bool


def _bin_rates(cfg: SystemConfig, t, y_um, v_mps, t_c_s, flux0_cps, background_cps, binw_s):
    """Per-bin Poisson means; broadcasts over parameter arrays."""
    x = v_mps * (t - t_c_s) * 1e6
    T = transmission_at(cfg, LabPoint(x, y_um, 0.0))
    return (flux0_cps * T + background_cps) * binw_s


def _poisson_loglik(k, lam):
    """Exact Poisson log-likelihood sum(k ln lam - lam - ln k!).

    Bins with lam = 0 contribute 0 for k = 0 and -inf otherwise.
    """
    lam = np.asarray(lam, dtype=float)
    k = np.asarray(k, dtype=float)
    safe = np.where(lam > 0, lam, 1.0)
    terms = np.where(lam > 0, k * np.log(safe) - lam, np.where(k > 0, -np.inf, 0.0))
    return float(np.sum(terms) - np.sum(gammaln(k + 1.0)))


def log_likelihood(cfg: SystemConfig, det: DetectorConfig, trace: TransitTrace, p: FitParams) -> float:
    """Poisson log-likelihood of the observed counts under trajectory p."""
    if trace.counts is None:
        raise ValueError("trace has no counts to fit")
    binw_s = _trace_bin_width(trace)
    lam = _bin_rates(
        cfg, trace.t, p.y_off_um, p.v_mps, p.t_c_s, det.flux0_cps, det.background_cps, binw_s
    )
    return _poisson_loglik(trace.counts, lam)


def _trace_bin_width(trace: TransitTrace) -> float:
    return float(np.median(np.diff(trace.t)))


def _smooth3(k):
    return np.convolve(np.asarray(k, dtype=float), np.ones(3) / 3.0, mode="same")


def _dip_index(counts) -> int:
    """Index of the deepest point of the smoothed trace; raises if no dip."""
    sm = _smooth3(counts)
    base = float(np.median(np.asarray(counts, dtype=float)))
    if base <= 0 or np.min(sm) >= (1.0 - DIP_DEPTH_MIN) * base:
        raise NoTransitError("no transit dip detected in trace")
    return int(np.argmin(sm))


def estimate_flux0(trace: TransitTrace, background_cps: float = 0.0) -> float:
    """Empty-cavity count rate (counts/s) from the bins outside the dip.

    The dip support is taken where the 3-bin smoothed counts fall below 75%
    of the trace median, padded by three bins on each side.  The baseline
    rate contains the background, which is subtracted so the result is the
    transmission-proportional rate alone.
    """
    k = np.asarray(trace.counts, dtype=float)
    sm = _smooth3(k)
    base0 = float(np.median(k))
    mask = sm < 0.75 * base0
    padded = np.zeros(len(k), dtype=bool)
    for i in np.where(mask)[0]:
        padded[max(0, i - 3) : i + 4] = True
    if np.all(padded):
        raise NoTransitError("no empty-cavity bins to estimate flux from")
    baseline_rate = float(np.mean(k[~padded])) / _trace_bin_width(trace)
    return max(baseline_rate - background_cps, 0.0)


def fit_transit(
    cfg: SystemConfig,
    det: DetectorConfig,
    trace: TransitTrace,
    *,
    flux0_cps: float | None = None,
) -> FitResult:
    """Maximum-likelihood trajectory fit of a count trace.

    The empty-cavity rate is measured from the off-dip bins unless passed
    explicitly; it is not a free fit parameter.  Returns the best parameters,
    finite-difference Fisher uncertainties and the log-likelihood of the best
    fit constrained to the opposite sign of y_off.
    """
    if trace.counts is None:
        raise ValueError("trace has no counts to fit")
    if len(trace) < 10:
        raise ValueError(f"need at least 10 bins to fit, got {len(trace)}")
    k = np.asarray(trace.counts, dtype=float)
    t = trace.t
    binw_s = _trace_bin_width(trace)
    i_dip = _dip_index(k)
    if flux0_cps is None:
        flux0_cps = estimate_flux0(trace, det.background_cps)

    w0 = cfg.geometry.w0_um
    y_grid = np.arange(-Y_HALFWIDTH_WAISTS * w0, Y_HALFWIDTH_WAISTS * w0 + 1e-9, Y_STEP_WAISTS * w0)
    v_lo, v_hi, v_step = V_GRID_MPS
    v_grid = np.arange(v_lo, v_hi + 1e-9, v_step)
    tc_grid = t[i_dip] + np.arange(-TC_HALFWIDTH_BINS, TC_HALFWIDTH_BINS + 1) * binw_s

    lam = _bin_rates(
        cfg,
        t[None, None, None, :],
        y_grid[:, None, None, None],
        v_grid[None, :, None, None],
        tc_grid[None, None, :, None],
        flux0_cps,
        det.background_cps,
        binw_s,
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        grid_ll = np.sum(
            np.where(lam > 0, k * np.log(np.where(lam > 0, lam, 1.0)) - lam, np.where(k > 0, -np.inf, 0.0)),
            axis=-1,
        )
    n_evals = grid_ll.size

    scale = np.array([w0, 0.1, 5e-5])
    ln_fact = float(np.sum(gammaln(k + 1.0)))

    def neg_ll(u, required_sign=0.0):
        y, v, tc = u * scale
        if v <= 0:
            return 1e300
        if required_sign and np.sign(y) not in (0.0, required_sign):
            return 1e300
        lam_u = _bin_rates(cfg, t, y, v, tc, flux0_cps, det.background_cps, binw_s)
        ll = _poisson_loglik_raw(k, lam_u)
        return -ll if np.isfinite(ll) else 1e300

    def refine(start, required_sign=0.0):
        res = minimize(
            neg_ll,
            np.asarray(start) / scale,
            args=(required_sign,),
            method="Nelder-Mead",
            options={"xatol": REFINE_REL_TOL, "fatol": 1e-9, "maxfev": MAX_REFINE_EVALS},
        )
        return res

    flat_order = np.argsort(grid_ll.ravel())[::-1]
    starts = []
    for o in flat_order[:N_REFINE_STARTS]:
        i, j, l = np.unravel_index(o, grid_ll.shape)
        starts.append((y_grid[i], v_grid[j], tc_grid[l]))

    best = None
    for s in starts:
        res = refine(s)
        n_evals += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    # one restart from the best point to let a collapsed simplex reopen
    res = refine(best.x * scale)
    n_evals += res.nfev
    if res.fun < best.fun:
        best = res

    y_hat = float(best.x[0] * scale[0])
    mirror_sign = -np.sign(y_hat) if y_hat != 0.0 else -1.0
    masked = np.where(
        (np.sign(y_grid) == mirror_sign)[:, None, None], grid_ll, -np.inf
    )
    i, j, l = np.unravel_index(int(np.argmax(masked)), grid_ll.shape)
    y_start = y_grid[i] if np.sign(y_grid[i]) == mirror_sign else mirror_sign * 0.5 * w0
    mirror = refine((y_start, v_grid[j], tc_grid[l]), required_sign=mirror_sign)
    n_evals += mirror.nfev

    if mirror.fun < best.fun:
        best, mirror = mirror, best

    params = FitParams(*(float(v) for v in best.x * scale))
    log_lik = float(-best.fun - ln_fact)
    mirror_log_lik = float(-mirror.fun - ln_fact)

    sigma, n_fisher = _fisher_sigma(
        lambda p: -neg_ll(p / scale), np.asarray(best.x) * scale
    )
    n_evals += n_fisher

    return FitResult(
        params=params,
        sigma_y_um=float(sigma[0]),
        sigma_v_mps=float(sigma[1]),
        sigma_tc_s=float(sigma[2]),
        log_lik=log_lik,
        mirror_log_lik=mirror_log_lik,
        converged=bool(best.success),
        n_evals=int(n_evals),
    )


def _poisson_loglik_raw(k, lam):
    """Poisson log-likelihood without the ln k! constant (optimizer objective)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        safe = np.where(lam > 0, lam, 1.0)
        terms = np.where(lam > 0, k * np.log(safe) - lam, np.where(k > 0, -np.inf, 0.0))
        return float(np.sum(terms))
    return float(np.sum(k * np.log(lam) - lam))


_FISHER_STEPS = np.array([0.05, 0.001, 5e-7])  # um, m/s, s


def _fisher_sigma(loglik, p_hat):
    """Per-parameter uncertainties from the observed Fisher information.

    Central finite differences of the log-likelihood give the Hessian; the
    sigmas are the square roots of the diagonal of its negated inverse, or
    NaN when the curvature is not positive definite.
    """
    n = len(p_hat)
    h = _FISHER_STEPS
    hess = np.empty((n, n))
    n_evals = 0
    f0 = loglik(p_hat)
    n_evals += 1
    for i in range(n):
        e = np.zeros(n)
        e[i] = h[i]
        hess[i, i] = (loglik(p_hat + e) - 2.0 * f0 + loglik(p_hat - e)) / h[i] ** 2
        n_evals += 2
    for i in range(n):
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h[i]
            ej[j] = h[j]
            hess[i, j] = hess[j, i] = (
                loglik(p_hat + ei + ej)
                - loglik(p_hat + ei - ej)
                - loglik(p_hat - ei + ej)
                + loglik(p_hat - ei - ej)
            ) / (4.0 * h[i] * h[j])
            n_evals += 4
    try:
        cov = np.linalg.inv(-hess)
        diag = np.diag(cov)
        sigma = np.where(diag > 0, np.sqrt(np.abs(diag)), np.nan)
    except np.linalg.LinAlgError:
        sigma = np.full(n, np.nan)
    return sigma, n_evals


def degeneracy_scan(
    cfg: SystemConfig,
    tr: Trajectory,
    transforms,
    det: DetectorConfig | None = None,
    threshold: float = 1e-6,
) -> list[DegeneracyReport]:
    """Sup-norm expected-trace difference under trajectory symmetry transforms.

    A transform whose sup difference stays below the threshold leaves the
    trajectory degenerate: the transformed path is indistinguishable from the
    original in the forward model.
    """
    det = det or DetectorConfig()
    base = expected_trace(cfg, tr, det).expected_T
    half_wavelength_nm = cfg.geometry.wavelength_nm / 2.0
    reports = []
    for label in transforms:
        if label == "y-mirror":
            other = Trajectory(-tr.y_off_um, tr.v_mps, tr.t_c_s, tr.z_pos_nm)
        elif label == "z-antinode-shift":
            other = Trajectory(tr.y_off_um, tr.v_mps, tr.t_c_s, tr.z_pos_nm + half_wavelength_nm)
        elif label == "z-mirror":
            other = Trajectory(tr.y_off_um, tr.v_mps, tr.t_c_s, -tr.z_pos_nm)
        else:
            raise ValueError(f"unknown transform {label!r}; known: {KNOWN_TRANSFORMS}")
        sup = float(np.max(np.abs(expected_trace(cfg, other, det).expected_T - base)))
        reports.append(DegeneracyReport(label, sup, sup < threshold))
    return reports


def x_resolution(v_mps: float, det: DetectorConfig) -> float:
    """Vertical distance (um) traveled during one counting bin."""
    if v_mps <= 0:
        raise ValueError(f"speed must be positive, got {v_mps}")
    return v_mps * det.bin_width_us
