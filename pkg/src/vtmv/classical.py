"""Fixed-horizon mean-variance solution.

Given a market, a target curve, and a terminal time ``tau``, the optimal
strategy and the minimal terminal variance are closed forms in three
integrals: ``int r``, ``int phi``, and ``int theta/2``. The auxiliary
multiplier

    mu(tau) = (e^{int phi} - 1) / (x alpha e^{int theta/2})

converts the wealth-target constraint into the quadratic-control embedding;
``gamma = e^{int phi}/mu + x e^{int r}`` is the resulting wealth anchor: the
optimal dollar allocation is proportional to the gap between the discounted
anchor and current wealth,

    pi(t, X) = [sigma sigma^T]^{-1} beta^T (gamma e^{-int_t^tau r} - X).

The terminal-variance frontier is
``Var = (x alpha e^{int theta/2})^2 / (e^{int phi} - 1)``.

Two independent diagnostics live here as well: the closed-form mean path of
the optimally controlled wealth, and an RK4 integration of the second-moment
ODE, which downstream tests play against the frontier formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import exp, expm1, sqrt

import numpy as np

from .errors import AssumptionError, DomainError, UnsupportedModelError
from .market import MarketModel
from .ode import rk4_path
from .target import TargetCurve

__all__ = [
    "ClassicalSolution",
    "FeedbackStrategy",
    "EfficientPayoff",
    "mu_of_tau",
    "solve_classical",
    "frontier_curve",
    "mean_path",
    "second_moment_at_tau",
    "strategy_at",
    "efficient_payoff",
]


def _check_tau(tau: float) -> float:
    if not tau > 0:
        raise DomainError(f"terminal time must be positive, got {tau}")
    return float(tau)


def mu_of_tau(m: MarketModel, tc: TargetCurve, tau: float) -> float:
    """Constraint multiplier of the embedded quadratic problem.

    Positive whenever the target exceeds the bond account at ``tau`` and the
    market carries any risk premium; tends to 0 as ``tau`` does.

    Raises:
        DomainError: tau <= 0.
        AssumptionError: target excess over the bond is nonpositive at tau.
    """
    tau = _check_tau(tau)
    excess = tc.x * tc.excess_at(tau)
    if not excess > 0:
        raise AssumptionError(f"target does not exceed the bond account at tau={tau}")
    return expm1(m.phi.antiderivative(tau)) / excess


@dataclass(frozen=True)
class FeedbackStrategy:
    """Affine feedback rule of the optimal dollar allocation.

    Callable as ``fs(t, wealth)``; wealth may be a scalar or a 1-d array of
    scenario wealths, giving an ``(n,)`` or ``(paths, n)`` allocation.
    """

    market: MarketModel
    tau: float
    gamma: float

    def coefficient_at(self, t: float) -> np.ndarray:
        """Allocation direction ``[sigma sigma^T]^{-1} beta^T`` at ``t``."""
        return np.linalg.solve(self.market.gram_at(t), self.market.beta_at(t))

    def at(self, t: float, wealth):
        if not 0 <= t <= self.tau:
            raise DomainError(f"strategy defined on [0, {self.tau}], got t={t}")
        gap = self.gamma * exp(-self.market.r.integral(t, self.tau)) - np.asarray(
            wealth, dtype=float
        )
        coef = self.coefficient_at(t)
        if gap.ndim == 0:
            return float(gap) * coef
        return np.multiply.outer(gap, coef)

    __call__ = at


@dataclass(frozen=True)
class ClassicalSolution:
    """Closed-form solution of the fixed-horizon problem."""

    market: MarketModel
    target: TargetCurve
    tau: float
    mu: float
    lambda_bar: float
    gamma: float
    frontier_variance: float
    target_mean: float

    @cached_property
    def strategy(self) -> FeedbackStrategy:
        return FeedbackStrategy(market=self.market, tau=self.tau, gamma=self.gamma)


def solve_classical(m: MarketModel, tc: TargetCurve, tau: float) -> ClassicalSolution:
    """Solve the fixed-horizon problem at terminal time ``tau``."""
    tau = _check_tau(tau)
    mu = mu_of_tau(m, tc, tau)
    int_phi = m.phi.antiderivative(tau)
    bond = tc.x * exp(m.r.antiderivative(tau))
    gamma = exp(int_phi) / mu + bond
    lambda_bar = exp(int_phi) + mu * bond
    excess = tc.x * tc.excess_at(tau)
    variance = excess * excess / expm1(int_phi)
    return ClassicalSolution(
        market=m,
        target=tc,
        tau=tau,
        mu=mu,
        lambda_bar=lambda_bar,
        gamma=gamma,
        frontier_variance=variance,
        target_mean=tc.x * tc.h_at(tau),
    )


def frontier_curve(m: MarketModel, tc: TargetCurve, taus) -> np.ndarray:
    """Minimal terminal variance on an array of terminal times (vectorized)."""
    ts = np.asarray(taus, dtype=float)
    if np.any(ts <= 0):
        raise DomainError("terminal times must be positive")
    excess = tc.x * tc.alpha * np.exp(0.5 * tc.theta.antiderivative(ts))
    return excess * excess / np.expm1(m.phi.antiderivative(ts))


def mean_path(sol: ClassicalSolution, t) -> float | np.ndarray:
    """Expected optimally-controlled wealth at time ``t`` in ``[0, tau]``.

    Closed form: ``E X(t) = x e^{int_0^t (r - phi)}
    + gamma e^{-int_t^tau r} (1 - e^{-int_0^t phi})``. Equals ``x`` at 0 and
    ``x h(tau)`` at ``tau``, and increases in between for admissible inputs.
    """
    ts = np.asarray(t, dtype=float)
    if np.any(ts < 0) or np.any(ts > sol.tau):
        raise DomainError(f"mean path defined on [0, {sol.tau}]")
    m = sol.market
    int_r = m.r.antiderivative(ts)
    int_phi = m.phi.antiderivative(ts)
    int_r_tail = m.r.antiderivative(sol.tau) - int_r
    out = sol.target.x * np.exp(int_r - int_phi) - sol.gamma * np.exp(
        -int_r_tail
    ) * np.expm1(-int_phi)
    return float(out) if np.ndim(t) == 0 else out


def second_moment_at_tau(sol: ClassicalSolution, step: float = 1e-3) -> float:
    """Second moment of optimal terminal wealth by RK4 on its linear ODE.

    Integrates ``dE X^2 = [(2r - phi) E X^2 + gamma^2 e^{-2 int_t^tau r} phi] dt``
    from ``E X^2(0) = x^2``. Deliberately shares no algebra with the frontier
    formula so the two can be cross-checked.
    """
    m = sol.market
    r_tau = m.r.antiderivative(sol.tau)
    gamma_sq = sol.gamma * sol.gamma

    def make_f(t_mid: float):
        r_k = m.r.value_at(t_mid)
        phi_k = m.phi.value_at(t_mid)
        r_base = m.r.antiderivative(t_mid) - r_k * t_mid  # int_0^t r = r_base + r_k t

        def f(t: float, y: float) -> float:
            forcing = gamma_sq * phi_k * exp(2.0 * (r_base + r_k * t - r_tau))
            return (2.0 * r_k - phi_k) * y + forcing

        return f

    _, ys = rk4_path(
        make_f,
        sol.target.x**2,
        0.0,
        sol.tau,
        step,
        breakpoints=m.breakpoints,
    )
    return float(ys[-1])


def strategy_at(fs: FeedbackStrategy, t: float, wealth):
    """Optimal dollar allocation at time ``t`` and the given wealth."""
    return fs.at(t, wealth)


@dataclass(frozen=True)
class EfficientPayoff:
    """Terminal payoff replicating a frontier point in a one-asset market.

    The payoff is ``a - b_coef / S*`` for the numeraire-like process
    ``S*_tau = exp((r + phi/2) tau + sharpe W_tau)``; evaluated on a terminal
    Brownian value ``w`` it reads
    ``x e^{r tau} + (e^{phi tau} - e^{-sharpe w - phi tau / 2}) * scale``.
    """

    x: float
    tau: float
    variance: float
    rate: float
    sharpe: float
    a: float
    b_coef: float

    @property
    def mean(self) -> float:
        """Analytic mean, ``x e^{r tau} + sqrt(variance (e^{phi tau} - 1))``."""
        phi = self.sharpe**2
        return self.x * exp(self.rate * self.tau) + sqrt(
            self.variance * expm1(phi * self.tau)
        )

    def __call__(self, w):
        """Payoff at terminal Brownian value(s) ``w``."""
        phi = self.sharpe**2
        disc = np.exp(
            -self.sharpe * np.asarray(w, dtype=float) - 0.5 * phi * self.tau
        )
        scale = self.b_coef * exp(-self.rate * self.tau)
        out = self.x * exp(self.rate * self.tau) + (exp(phi * self.tau) - disc) * scale
        return float(out) if np.ndim(w) == 0 else out


def efficient_payoff(
    m: MarketModel, x: float, tau: float, variance: float
) -> EfficientPayoff:
    """Closed-form efficient terminal payoff for a constant one-asset market.

    Args:
        m: market with ``n == 1`` and constant coefficients.
        x: initial capital.
        tau: terminal time.
        variance: targeted terminal variance (>= 0); 0 gives the bond payoff.

    Raises:
        UnsupportedModelError: more than one asset or time-varying coefficients.
        DomainError: tau <= 0 or variance < 0.
    """
    if m.n != 1:
        raise UnsupportedModelError("efficient payoff requires a one-asset market")
    if not (m.r.is_constant and m.b.is_constant and m.sigma.is_constant):
        raise UnsupportedModelError("efficient payoff requires constant coefficients")
    tau = _check_tau(tau)
    if variance < 0:
        raise DomainError(f"variance must be nonnegative, got {variance}")
    rate = m.r.value_at(0.0)
    phi = m.phi.value_at(0.0)
    scale = sqrt(variance / expm1(phi * tau))
    return EfficientPayoff(
        x=float(x),
        tau=tau,
        variance=float(variance),
        rate=rate,
        sharpe=sqrt(phi),
        a=x * exp(rate * tau) + exp(phi * tau) * scale,
        b_coef=exp(rate * tau) * scale,
    )
