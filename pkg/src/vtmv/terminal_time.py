"""Optimal deterministic terminal time under the moving target.

Along the family of fixed-horizon solutions, the derivative of the minimal
terminal variance in the horizon has the sign of

    I(tau) = (theta(tau) - phi(tau)) e^{int_0^tau phi} - theta(tau),

with ``I(0) = -phi(0) < 0``. Two regimes exist:

* ``theta > phi`` uniformly: ``I`` eventually turns positive and the first
  root of ``I`` is the variance-minimizing horizon (a finite optimum).
* ``theta <= phi`` everywhere: the variance decreases for all horizons and
  the infimum sits at infinity.

With constant coefficients everything is closed form in ``kappa =
theta/phi``: the optimal horizon is ``ln(kappa/(kappa-1))/phi`` and the
minimal variance is ``x^2 alpha^2 kappa (kappa/(kappa-1))^{kappa-1}``.

A constant wealth level (rather than a growing curve) is a degenerate
special case: park everything in the bond and wait; the waiting time solves
``x e^{int r} = level`` and the variance is exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import exp, log

import numpy as np

from .classical import frontier_curve, solve_classical
from .errors import (
    AssumptionError,
    DomainError,
    HorizonExceededError,
    NoFiniteOptimumError,
)
from .market import MarketModel
from .target import TargetCurve

__all__ = [
    "Case",
    "TerminalTimeSolution",
    "objective_I",
    "classify_case",
    "smallest_root",
    "solve_terminal_time",
    "tau_star_constant",
    "var_star_constant",
    "constant_target_time",
    "tau_star_vs_assets",
]

DEFAULT_HORIZON = 100.0
DEFAULT_GRID = 1e-3
DEFAULT_TOL = 1e-10


class Case(str, Enum):
    """Qualitative outcome of the terminal-time analysis."""

    FINITE_OPTIMUM = "FiniteOptimum"
    INFIMUM_AT_INFINITY = "InfimumAtInfinity"
    CONSTANT_TARGET_RISKLESS = "ConstantTargetRiskless"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class TerminalTimeSolution:
    """Result record of the terminal-time search.

    ``tau_star``/``var_star`` are None when the corresponding quantity does
    not exist in the detected case; ``kappa`` is only set for constant
    coefficient inputs; ``bracket`` is the final scan bracket around the
    root; ``delta_margin`` is the smallest scanned value of
    ``theta - phi`` (positive uniform margin in the finite-optimum case).
    """

    case: Case
    tau_star: float | None = None
    var_star: float | None = None
    kappa: float | None = None
    delta_margin: float | None = None
    bracket: tuple[float, float] | None = None
    note: str | None = None


def objective_I(m: MarketModel, tc: TargetCurve, tau: float) -> float:
    """Variance-slope indicator ``I(tau)``; negative means still improving."""
    if tau < 0:
        raise DomainError(f"time must be nonnegative, got {tau}")
    theta = tc.theta.value_at(tau)
    phi = m.phi.value_at(tau)
    return (theta - phi) * exp(m.phi.antiderivative(tau)) - theta


def _objective_on(m: MarketModel, tc: TargetCurve, ts: np.ndarray) -> np.ndarray:
    theta = tc.theta.values_at(ts)
    phi = m.phi.values_at(ts)
    return (theta - phi) * np.exp(m.phi.antiderivative(ts)) - theta


def _margin_grid(
    m: MarketModel, tc: TargetCurve, horizon: float, grid: float
) -> np.ndarray:
    """theta - phi sampled on the scan grid plus all coefficient breakpoints."""
    ts = np.arange(0.0, horizon + 0.5 * grid, grid)
    extra = [t for t in (*m.breakpoints, *tc.theta.breakpoints) if t <= horizon]
    ts = np.unique(np.concatenate([ts, np.asarray(extra)]))
    return tc.theta.values_at(ts) - m.phi.values_at(ts)


def classify_case(
    m: MarketModel,
    tc: TargetCurve,
    horizon: float = DEFAULT_HORIZON,
    grid: float = DEFAULT_GRID,
) -> Case:
    """Detect the regime by scanning ``theta - phi`` up to the horizon."""
    margins = _margin_grid(m, tc, horizon, grid)
    if margins.min() > 0:
        return Case.FINITE_OPTIMUM
    if margins.max() <= 0:
        return Case.INFIMUM_AT_INFINITY
    return Case.UNCLASSIFIED


def _constant_kappa(m: MarketModel, tc: TargetCurve) -> float | None:
    if m.phi.is_constant and tc.theta.is_constant:
        return tc.theta.value_at(0.0) / m.phi.value_at(0.0)
    return None


def smallest_root(
    m: MarketModel,
    tc: TargetCurve,
    horizon: float = DEFAULT_HORIZON,
    grid: float = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> TerminalTimeSolution:
    """First zero of ``I`` by scan-then-bisect; the optimal terminal time.

    Scans the grid left to right for the first sign change (that realizes
    "smallest root"), then bisects the bracket until its width drops below
    ``tol``; the midpoint of the final bracket is the answer, so the
    reported time is within ``tol / 2`` of the true root.

    Raises:
        NoFiniteOptimumError: the regime scan does not certify a finite
            optimum up to the horizon.
        HorizonExceededError: certified regime, but no sign change shows up
            on the grid before the horizon.
    """
    margins = _margin_grid(m, tc, horizon, grid)
    if not margins.min() > 0:
        raise NoFiniteOptimumError(
            "theta - phi is not uniformly positive up to the horizon; "
            "no finite optimum is certified"
        )
    ts = np.arange(0.0, horizon + 0.5 * grid, grid)
    vals = _objective_on(m, tc, ts)
    positive = np.flatnonzero(vals > 0)
    if positive.size == 0:
        raise HorizonExceededError(
            f"no sign change of the variance slope within horizon {horizon}"
        )
    hi_idx = int(positive[0])
    if hi_idx == 0:
        raise AssumptionError("variance slope already positive at 0; phi(0) <= 0")
    lo, hi = float(ts[hi_idx - 1]), float(ts[hi_idx])

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if objective_I(m, tc, mid) > 0:
            hi = mid
        else:
            lo = mid
    tau_star = 0.5 * (lo + hi)

    return TerminalTimeSolution(
        case=Case.FINITE_OPTIMUM,
        tau_star=tau_star,
        var_star=solve_classical(m, tc, tau_star).frontier_variance,
        kappa=_constant_kappa(m, tc),
        delta_margin=float(margins.min()),
        bracket=(lo, hi),
    )


def solve_terminal_time(
    m: MarketModel,
    tc: TargetCurve,
    horizon: float = DEFAULT_HORIZON,
    grid: float = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> TerminalTimeSolution:
    """Full terminal-time analysis: classify, then resolve the case.

    The infimum-at-infinity case reports the variance at the scan horizon
    (no extrapolation); the mixed-sign case still reports the grid minimizer
    of the variance, flagged as outside the certified regimes.
    """
    case = classify_case(m, tc, horizon, grid)
    margins = _margin_grid(m, tc, horizon, grid)
    if case is Case.FINITE_OPTIMUM:
        return smallest_root(m, tc, horizon, grid, tol)
    ts = np.arange(grid, horizon + 0.5 * grid, grid)
    variances = frontier_curve(m, tc, ts)
    if case is Case.INFIMUM_AT_INFINITY:
        return TerminalTimeSolution(
            case=case,
            tau_star=None,
            var_star=float(variances[-1]),
            kappa=_constant_kappa(m, tc),
            delta_margin=float(margins.min()),
            note=(
                "variance decreases toward the scan horizon; the reported "
                "value is the variance at the horizon, not a minimum"
            ),
        )
    k = int(np.argmin(variances))
    return TerminalTimeSolution(
        case=Case.UNCLASSIFIED,
        tau_star=float(ts[k]),
        var_star=float(variances[k]),
        kappa=_constant_kappa(m, tc),
        delta_margin=float(margins.min()),
        note=(
            "theta - phi changes sign before the horizon; reporting the "
            "grid minimizer of the variance, outside the certified regimes"
        ),
    )


def tau_star_constant(theta: float, phi: float) -> float:
    """Closed-form optimal horizon for constant ``theta > phi > 0``."""
    if not phi > 0:
        raise DomainError(f"phi must be positive, got {phi}")
    if not theta > phi:
        raise NoFiniteOptimumError(
            f"finite optimum requires theta > phi, got theta={theta}, phi={phi}"
        )
    return log(theta / (theta - phi)) / phi


def var_star_constant(x: float, alpha: float, theta: float, phi: float) -> float:
    """Closed-form minimal variance for constant coefficients.

    ``x^2 alpha^2 kappa (kappa/(kappa-1))^{kappa-1}`` with ``kappa =
    theta/phi > 1``.
    """
    if not phi > 0:
        raise DomainError(f"phi must be positive, got {phi}")
    if not theta > phi:
        raise NoFiniteOptimumError(
            f"finite optimum requires theta > phi, got theta={theta}, phi={phi}"
        )
    kappa = theta / phi
    return x * x * alpha * alpha * kappa * (kappa / (kappa - 1.0)) ** (kappa - 1.0)


def constant_target_time(x: float, level: float, m: MarketModel) -> TerminalTimeSolution:
    """Horizon for a constant wealth level: ride the bond, take no risk.

    Solves ``x e^{int_0^tau r} = level`` exactly on the rate schedule. A
    level at or below the initial capital is reached immediately. The
    variance is exactly zero and the optimal allocation is identically zero.
    """
    if not x > 0:
        raise DomainError(f"initial capital must be positive, got {x}")
    if not level > 0:
        raise DomainError(f"target level must be positive, got {level}")
    note = "constant target is replicated by the bond account; zero risk"
    if level <= x:
        return TerminalTimeSolution(
            case=Case.CONSTANT_TARGET_RISKLESS,
            tau_star=0.0,
            var_star=0.0,
            note=note,
        )
    needed = log(level / x)
    bps = list(m.r.breakpoints)
    for k, left in enumerate(bps):
        rate = m.r.values[k]
        base = m.r.antiderivative(left)
        right = bps[k + 1] if k + 1 < len(bps) else None
        attained = m.r.antiderivative(right) if right is not None else np.inf
        if rate > 0 and needed <= attained + 1e-15:
            return TerminalTimeSolution(
                case=Case.CONSTANT_TARGET_RISKLESS,
                tau_star=left + (needed - base) / rate,
                var_star=0.0,
                note=note,
            )
    raise AssumptionError(
        "bond account never reaches the requested level (rate not positive)"
    )


def tau_star_vs_assets(
    r: float, b: float, sigma: float, theta: float, n_max: int
) -> list[tuple[int, float | None]]:
    """Optimal horizon as identical independent assets are added.

    Asset ``n`` contributes another squared Sharpe ratio, ``phi_n =
    n ((b - r)/sigma)^2``. Returns one ``(n, tau_star)`` pair per count;
    ``tau_star`` is None once ``theta <= phi_n`` (no finite optimum).
    """
    if n_max < 1:
        raise DomainError(f"need at least one asset, got n_max={n_max}")
    sharpe_sq = ((b - r) / sigma) ** 2
    out: list[tuple[int, float | None]] = []
    for n in range(1, n_max + 1):
        phi_n = n * sharpe_sq
        if theta > phi_n:
            out.append((n, tau_star_constant(theta, phi_n)))
        else:
            out.append((n, None))
    return out
