"""Dispersion analytics: the exact recursion for the dephased walk's second
moment, its closed-form solution, the asymptotic slope, and fits on
empirical series.

With Delta = |r|^2 - |t|^2 and K the per-path initial weight, the second
moment of the mean distribution obeys

    D(n+1) = D(n) + 1 + 2 K Delta R(n),    R(n+1) = Delta R(n) + 1/K

whose increment converges to (1 + Delta)/(1 - Delta) geometrically.  The
base values R(2) and D(2) are evaluated by direct summation of their
defining two-step sums rather than any collapsed constant; the collapsed
constants are reported separately for comparison (see
``base_constants_comparison``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import coins as cn
from .evolution import PhaseDistribution, StepConfig, run_ensemble


@dataclass
class DispersionSeries:
    steps: np.ndarray
    values: np.ndarray
    provenance: str = "empirical-ensemble"
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.steps = np.asarray(self.steps)
        self.values = np.asarray(self.values, dtype=np.float64)
        if len(self.steps) != len(self.values):
            raise ValueError("steps and values must have equal length")
        if np.any(np.diff(self.steps) <= 0):
            raise ValueError("steps must be strictly increasing")

    def window(self, n_min: int, n_max: int) -> tuple[np.ndarray, np.ndarray]:
        sel = (self.steps >= n_min) & (self.steps <= n_max)
        return self.steps[sel], self.values[sel]


def _unit_vectors(size: int) -> np.ndarray:
    vecs = np.zeros((size, size // 2))
    for a in range(size):
        vecs[a, a >> 1] = -1.0 if a & 1 else 1.0
    return vecs


def base_constants_direct(size: int, r: complex, t: complex) -> tuple[float, float]:
    """(R2, D2) by direct evaluation of their defining two-step sums."""
    params = cn.GroverParams(complex(r), complex(t), size)
    k_weight = cn.initial_weight(params)
    vecs = _unit_vectors(size)
    r2 = 0.0
    d2 = 0.0
    for a1 in range(size):
        for a2 in range(size):
            w = abs(params.r if a1 == a2 else params.t) ** 2
            v = vecs[a1] + vecs[a2]
            r2 += w * float(v @ vecs[a2])
            d2 += w * float(v @ v)
    return r2, k_weight * d2


def base_constants_comparison(size: int, r: complex, t: complex) -> dict[str, float]:
    """Direct base constants next to an often-quoted collapsed variant.

    The collapsed variant carries a (|D|^2 - |D| - 1) factor where the
    direct sums give |D|(|D| - 2); both are returned so callers can report
    the discrepancy.  All derived results here use the direct values.
    """
    params = cn.GroverParams(complex(r), complex(t), size)
    k_weight = cn.initial_weight(params)
    rr = abs(params.r) ** 2
    tt = abs(params.t) ** 2
    r2_direct, d2_direct = base_constants_direct(size, r, t)
    return {
        "R2_direct": r2_direct,
        "D2_direct": d2_direct,
        "R2_collapsed": 2 * size * rr + (size**2 - size - 1) * tt,
        "D2_collapsed": k_weight * (4 * size * rr + 2 * (size**2 - size - 1) * tt),
    }


def dispersion_recursion(size: int, r: complex, t: complex, n: int) -> float:
    """Second moment of the mean distribution after n steps, by recursion."""
    if n < 2:
        raise ValueError("the recursion is defined for n >= 2")
    params = cn.GroverParams(complex(r), complex(t), size)
    k_weight = cn.initial_weight(params)
    delta = cn.memory_bias(params)
    r_cur, d_cur = base_constants_direct(size, r, t)
    for _ in range(2, n):
        d_cur = d_cur + 1.0 + 2.0 * k_weight * delta * r_cur
        r_cur = delta * r_cur + 1.0 / k_weight
    return d_cur


def dispersion_closed_form(size: int, r: complex, t: complex, n: int) -> float:
    """Closed-form solution of the recursion (geometric sum), same base
    constants.  Rejected near Delta = 0 where the recursion should be used
    (the closed form was derived assuming a nonzero bias)."""
    if n <= 2:
        raise ValueError("closed form defined for n > 2")
    params = cn.GroverParams(complex(r), complex(t), size)
    delta = cn.memory_bias(params)
    if abs(delta) < 1e-9:
        raise ValueError("memory bias is ~0; use dispersion_recursion instead")
    k_weight = cn.initial_weight(params)
    r2, d2 = base_constants_direct(size, r, t)
    r_inf = 1.0 / (k_weight * (1.0 - delta))
    # D(n) = D2 + (n-2) (1 + 2 K Delta R_inf) + 2 K Delta (R2 - R_inf) geom
    geom = (1.0 - delta ** (n - 2)) / (1.0 - delta)
    return (
        d2
        + (n - 2) * (1.0 + 2.0 * k_weight * delta * r_inf)
        + 2.0 * k_weight * delta * (r2 - r_inf) * geom
    )


def asymptotic_slope(r: complex, t: complex) -> float:
    """Long-run dispersion growth per step: (1 + Delta)/(1 - Delta)."""
    delta = abs(r) ** 2 - abs(t) ** 2
    if abs(1.0 - delta) < 1e-15:
        raise ValueError("slope diverges at Delta = 1")
    return (1.0 + delta) / (1.0 - delta)


def fit_slope(series: DispersionSeries, n_min: int, n_max: int) -> tuple[float, float, float]:
    """Ordinary least-squares line on (n, D(n)); returns (slope, intercept, r^2)."""
    x, y = series.window(n_min, n_max)
    if len(x) < 3:
        raise ValueError(f"need >= 3 points in [{n_min}, {n_max}], have {len(x)}")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_sq = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), max(0.0, min(1.0, r_sq))


def fit_growth_exponent(series: DispersionSeries, n_min: int, n_max: int) -> float:
    """Least-squares slope of log D versus log n over the window."""
    x, y = series.window(max(n_min, 1), n_max)
    if len(x) < 3:
        raise ValueError(f"need >= 3 points in [{n_min}, {n_max}], have {len(x)}")
    if np.any(y <= 0):
        raise ValueError("growth exponent requires positive dispersion values")
    exponent, _ = np.polyfit(np.log(x.astype(float)), np.log(y), 1)
    return float(exponent)


def default_fit_range(n: int) -> tuple[int, int]:
    return max(2, n // 4), n


def ensemble_series(result) -> DispersionSeries:
    """Dispersion series of an EnsembleResult."""
    return DispersionSeries(
        np.arange(result.steps + 1),
        result.dispersion_mean,
        provenance="empirical-ensemble",
        config=dict(result.config_echo),
    )


def transition_study(
    d: int,
    sigmas,
    n: int,
    trajectories: int,
    master_seed: int,
    coin: np.ndarray | None = None,
    fit_range: tuple[int, int] | None = None,
) -> dict[float, tuple[DispersionSeries, float]]:
    """Dispersion growth versus Gaussian phase-noise width.

    sigma = 0 draws all-zero phases and therefore reproduces the pure walk
    exactly.  Each sigma gets an independently derived seed.
    """
    sigmas = [float(s) for s in sigmas]
    if any(s < 0 for s in sigmas):
        raise ValueError("sigmas must be nonnegative")
    if coin is None:
        coin = cn.grover_coin(2 * d)
    lo, hi = fit_range if fit_range is not None else default_fit_range(n)
    out: dict[float, tuple[DispersionSeries, float]] = {}
    seeds = np.random.SeedSequence(master_seed).spawn(len(sigmas))
    from .lattice import LatticeIndex

    index = LatticeIndex(d, n)
    for sigma, seed in zip(sigmas, seeds):
        config = StepConfig(d, coin, PhaseDistribution("gaussian", sigma))
        result = run_ensemble(
            config,
            n,
            trajectories,
            master_seed=int(seed.generate_state(1)[0]),
            record_distributions=False,
            index=index,
            config_echo={"sigma": sigma, "dim": d},
        )
        series = ensemble_series(result)
        out[sigma] = (series, fit_growth_exponent(series, lo, hi))
    return out


def exact_series(size: int, r: complex, t: complex, n: int) -> DispersionSeries:
    """Recursion values for steps 2..n as a series."""
    steps = np.arange(2, n + 1)
    vals = np.empty(len(steps))
    params = cn.GroverParams(complex(r), complex(t), size)
    k_weight = cn.initial_weight(params)
    delta = cn.memory_bias(params)
    r_cur, d_cur = base_constants_direct(size, r, t)
    vals[0] = d_cur
    for i in range(1, len(steps)):
        d_cur = d_cur + 1.0 + 2.0 * k_weight * delta * r_cur
        r_cur = delta * r_cur + 1.0 / k_weight
        vals[i] = d_cur
    return DispersionSeries(steps, vals, provenance="recursion")
