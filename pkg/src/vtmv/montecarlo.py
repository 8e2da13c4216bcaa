"""Independent simulation oracles for the closed forms.

Wealth paths are simulated with the Euler scheme (weak order 1) under any
allocation rule, optimal or user supplied. Reproducibility is structural:
paths are processed in fixed blocks of :data:`BLOCK` and block ``k`` draws
from its own counter-based substream keyed by ``(seed, k)``, so results are
bit-identical for a given configuration regardless of how many worker
threads the environment allows (``VTMV_THREADS``, default 1) or in which
order blocks finish.

Non-finite terminal wealths (a hostile rule can overflow) are excluded from
the statistics and counted; more than 0.1 percent of them fails the run.

A separate one-draw oracle simulates the closed-form efficient terminal
payoff directly from its Brownian law, bypassing the dynamics entirely.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil, exp, sqrt
from typing import Callable

import numpy as np

from .classical import EfficientPayoff, FeedbackStrategy
from .errors import ConfigError, DomainError, SimulationError
from .market import MarketModel
from .ode import rk4_path
from .target import TargetCurve

__all__ = [
    "BLOCK",
    "SimulationConfig",
    "SimulationResult",
    "simulate_wealth",
    "estimate_stopping_time",
    "simulate_payoff",
]

BLOCK = 16384  # paths per RNG substream; even, so antithetic pairs never split
FLAGGED_BUDGET = 1e-3


@dataclass(frozen=True)
class SimulationConfig:
    """Monte Carlo run parameters.

    Args:
        paths: number of simulated paths (>= 2).
        step: Euler time step (> 0, and <= the horizon being simulated).
        seed: substream master seed.
        antithetic: mirror the Gaussian increments of each odd path.
    """

    paths: int = 100_000
    step: float = 1e-3
    seed: int = 1
    antithetic: bool = False

    def __post_init__(self) -> None:
        if self.paths < 2:
            raise ConfigError(f"need at least 2 paths, got {self.paths}")
        if not self.step > 0:
            raise ConfigError(f"step must be positive, got {self.step}")
        if self.antithetic and self.paths % 2:
            raise ConfigError("antithetic pairing needs an even path count")


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Summary statistics of a simulation run.

    ``paths`` counts the paths that entered the statistics; ``flagged``
    the excluded non-finite ones. ``trajectories`` holds the first recorded
    paths on the time grid when recording was requested.
    """

    mean: float
    variance: float
    se_mean: float
    se_variance: float
    paths: int
    flagged: int
    stopping_time_estimate: float | None = None
    times: np.ndarray | None = None
    trajectories: np.ndarray | None = None


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("VTMV_THREADS", "1")))
    except ValueError:
        return 1


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed % 2**64, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _blocks(n_paths: int) -> list[tuple[int, int, int]]:
    return [
        (k, start, min(start + BLOCK, n_paths))
        for k, start in enumerate(range(0, n_paths, BLOCK))
    ]


def _gaussians(rng: np.random.Generator, rows: int, d: int, antithetic: bool):
    if not antithetic:
        return rng.standard_normal((rows, d))
    half = (rows + 1) // 2
    z_half = rng.standard_normal((half, d))
    z = np.empty((2 * half, d))
    z[0::2] = z_half
    z[1::2] = -z_half
    return z[:rows]


def _coerce_allocation(pi, rows: int, n: int) -> np.ndarray:
    arr = np.asarray(pi, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim == 1:
        if arr.shape[0] != n:
            raise ConfigError(
                f"allocation rule returned {arr.shape[0]} assets, market has {n}"
            )
        return np.broadcast_to(arr, (rows, n))
    if arr.shape != (rows, n):
        raise ConfigError(
            f"allocation rule returned shape {arr.shape}, expected {(rows, n)}"
        )
    return arr


def _time_grid(tau: float, step: float) -> np.ndarray:
    n_full = max(1, ceil(tau / step - 1e-12))
    ts = np.minimum(np.arange(n_full + 1) * step, tau)
    ts[-1] = tau
    return ts


def _stats(
    finals: np.ndarray, total: int, antithetic: bool = False
) -> tuple[float, float, float, float, int, int]:
    finite = np.isfinite(finals)
    if antithetic:
        # The pair is the iid unit: mirrored draws anticorrelate the two
        # members, so pooled-sample formulas would overstate both errors.
        # A pair with a non-finite member is dropped whole.
        pair_ok = finite[0::2] & finite[1::2]
        lead, mate = finals[0::2][pair_ok], finals[1::2][pair_ok]
        n = 2 * lead.size
        flagged = total - n
        if flagged > FLAGGED_BUDGET * total:
            raise SimulationError(
                f"{flagged} of {total} paths were dropped (non-finite or "
                f"orphaned pair member), over the {FLAGGED_BUDGET:.1%} budget"
            )
        with np.errstate(over="ignore", invalid="ignore"):
            mean = float((lead.sum() + mate.sum()) / n)
            c_lead, c_mate = lead - mean, mate - mean
            variance = float((c_lead @ c_lead + c_mate @ c_mate) / (n - 1))
            pair_means = 0.5 * (lead + mate)
            pair_sq = 0.5 * (c_lead**2 + c_mate**2)
            se_mean = float(pair_means.std(ddof=1) / sqrt(lead.size))
            se_var = float(pair_sq.std(ddof=1) / sqrt(lead.size))
        return mean, variance, se_mean, se_var, n, flagged
    flagged = int(total - finite.sum())
    if flagged > FLAGGED_BUDGET * total:
        raise SimulationError(
            f"{flagged} of {total} paths were non-finite, over the "
            f"{FLAGGED_BUDGET:.1%} budget"
        )
    kept = finals[finite]
    n = kept.size
    # Finite but astronomically large samples can overflow the moments;
    # an inf variance is then the honest summary, not worth a warning.
    with np.errstate(over="ignore", invalid="ignore"):
        mean = float(kept.mean())
        centered = kept - mean
        variance = float(centered @ centered / (n - 1))
        m4 = float(np.mean(centered**4))
        se_mean = sqrt(variance / n) if variance < np.inf else np.inf
        se_var_sq = (m4 - (n - 3) / (n - 1) * variance * variance) / n
    if not np.isfinite(se_var_sq):
        return mean, variance, se_mean, np.inf, n, flagged
    return mean, variance, se_mean, sqrt(max(se_var_sq, 0.0)), n, flagged


def simulate_wealth(
    m: MarketModel,
    strategy: Callable,
    x0: float,
    tau: float,
    cfg: SimulationConfig,
    record_first: int = 0,
    _track_mean: bool = False,
):
    """Euler simulation of the wealth SDE under an allocation rule.

    Args:
        m: market model.
        strategy: callable ``(t, wealth_array) -> allocation``; the result
            may be scalar, ``(n,)``, or ``(paths, n)`` dollars in each asset.
        x0: initial wealth.
        tau: simulation horizon.
        cfg: path count, step, seed, antithetic switch.
        record_first: record the trajectories of this many leading paths.

    Returns:
        SimulationResult over terminal wealth.

    Raises:
        ConfigError: step larger than the horizon or a misshaped rule output.
        SimulationError: more than 0.1 percent non-finite paths.
    """
    if not tau > 0:
        raise DomainError(f"horizon must be positive, got {tau}")
    if cfg.step > tau:
        raise ConfigError(f"step {cfg.step} exceeds the horizon {tau}")

    ts = _time_grid(tau, cfg.step)
    n_steps = len(ts) - 1
    dts = np.diff(ts)
    r_arr = m.r.values_at(ts[:-1])
    beta_arr = np.stack([m.beta_at(t) for t in ts[:-1]])
    sigma_arr = np.stack([np.asarray(m.sigma.value_at(t)) for t in ts[:-1]])
    sqrt_dts = np.sqrt(dts)

    def run_block(spec: tuple[int, int, int]):
        block, start, stop = spec
        rows = stop - start
        rng = _block_rng(cfg.seed, block)
        wealth = np.full(rows, float(x0))
        rec = min(max(record_first - start, 0), rows)
        traj = np.empty((rec, n_steps + 1)) if rec else None
        if traj is not None:
            traj[:, 0] = wealth[:rec]
        sums = np.empty(n_steps + 1) if _track_mean else None
        counts = np.empty(n_steps + 1, dtype=np.int64) if _track_mean else None
        if _track_mean:
            sums[0] = wealth.sum()
            counts[0] = rows
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(n_steps):
                pi = _coerce_allocation(strategy(ts[k], wealth), rows, m.n)
                drift = r_arr[k] * wealth + pi @ beta_arr[k]
                vol = pi @ sigma_arr[k]
                z = _gaussians(rng, rows, m.d, cfg.antithetic)
                wealth = wealth + drift * dts[k] + (vol * z).sum(axis=1) * sqrt_dts[k]
                if traj is not None:
                    traj[:, k + 1] = wealth[:rec]
                if _track_mean:
                    finite = np.isfinite(wealth)
                    sums[k + 1] = wealth[finite].sum()
                    counts[k + 1] = finite.sum()
        return wealth, traj, sums, counts

    specs = _blocks(cfg.paths)
    workers = _workers()
    if workers > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(run_block, specs))
    else:
        outputs = [run_block(s) for s in specs]

    finals = np.concatenate([out[0] for out in outputs])
    mean, var, se_m, se_v, n_used, flagged = _stats(finals, cfg.paths, cfg.antithetic)

    trajectories = None
    rec_total = min(record_first, cfg.paths)
    if rec_total:
        trajectories = np.concatenate(
            [out[1] for out in outputs if out[1] is not None]
        )[:rec_total]

    mean_curve = None
    if _track_mean:
        sum_all = np.sum([out[2] for out in outputs], axis=0)
        count_all = np.sum([out[3] for out in outputs], axis=0)
        mean_curve = sum_all / np.maximum(count_all, 1)

    result = SimulationResult(
        mean=mean,
        variance=var,
        se_mean=se_m,
        se_variance=se_v,
        paths=n_used,
        flagged=flagged,
        times=ts if (rec_total or _track_mean) else None,
        trajectories=trajectories,
    )
    return (result, mean_curve) if _track_mean else result


def _crossing_time(
    ts: np.ndarray, means: np.ndarray, level: float
) -> float | None:
    tol = 1e-9 * max(1.0, abs(level))
    hit = np.flatnonzero(means >= level - tol)
    return float(ts[hit[0]]) if hit.size else None


def estimate_stopping_time(
    m: MarketModel,
    tc: TargetCurve,
    strategy: Callable,
    x0: float,
    tau: float,
    step: float = 1e-3,
    cfg: SimulationConfig | None = None,
) -> float | None:
    """First time the mean wealth reaches the moving target ``x h(tau)``.

    The default mode integrates the exact mean ODE ``dE X = [r E X +
    beta pi(t, E X)] dt`` with RK4 (valid for rules affine in wealth, which
    includes every :class:`FeedbackStrategy` and scalings of it) and scans
    the grid for the first crossing. Passing ``cfg`` switches to a Monte
    Carlo mode that tracks the cross-sectional mean instead.

    Returns None when the target is never reached on ``[0, tau]``, e.g.
    under the zero allocation.
    """
    level = tc.x * tc.h_at(tau)
    if cfg is not None:
        _, mean_curve = simulate_wealth(
            m, strategy, x0, tau, cfg, _track_mean=True
        )
        return _crossing_time(_time_grid(tau, cfg.step), mean_curve, level)

    if isinstance(strategy, FeedbackStrategy) and strategy.tau == tau:
        # beta [sigma sigma^T]^{-1} beta^T collapses to phi: exact per stretch.
        gamma = strategy.gamma
        r_tau = m.r.antiderivative(tau)

        def make_f(t_mid: float):
            r_k = m.r.value_at(t_mid)
            phi_k = m.phi.value_at(t_mid)
            r_base = m.r.antiderivative(t_mid) - r_k * t_mid

            def f(t: float, y: float) -> float:
                anchor = gamma * exp(r_base + r_k * t - r_tau)
                return r_k * y + phi_k * (anchor - y)

            return f

    else:

        def make_f(t_mid: float):
            r_k = m.r.value_at(t_mid)
            beta_k = m.beta_at(t_mid)

            def f(t: float, y: float) -> float:
                pi = np.atleast_1d(np.asarray(strategy(t, y), dtype=float))
                return r_k * y + float(beta_k @ pi)

            return f

    ts, means = rk4_path(make_f, x0, 0.0, tau, step, breakpoints=m.breakpoints)
    return _crossing_time(ts, means, level)


def simulate_payoff(payoff: EfficientPayoff, cfg: SimulationConfig) -> SimulationResult:
    """Sample the efficient terminal payoff from its one-draw Brownian law."""
    scale = sqrt(payoff.tau)

    def run_block(spec: tuple[int, int, int]):
        block, start, stop = spec
        rng = _block_rng(cfg.seed, block)
        w = _gaussians(rng, stop - start, 1, cfg.antithetic)[:, 0] * scale
        return payoff(w)

    specs = _blocks(cfg.paths)
    workers = _workers()
    if workers > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(run_block, specs))
    else:
        outputs = [run_block(s) for s in specs]
    finals = np.concatenate(outputs)
    mean, var, se_m, se_v, n_used, flagged = _stats(finals, cfg.paths, cfg.antithetic)
    return SimulationResult(
        mean=mean,
        variance=var,
        se_mean=se_m,
        se_variance=se_v,
        paths=n_used,
        flagged=flagged,
    )
