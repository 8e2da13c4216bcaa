"""Moving wealth target.

The investor starts with capital ``x`` and tracks the target ``x h(t)``,
where the normalized curve ``h`` is stored through the decomposition

    h(t) = alpha * exp(integral_0^t theta/2) + exp(integral_0^t r),

i.e. the target's excess over the pure bond account grows at the
configurable rate ``theta(t)/2``. ``alpha = h(0) - 1`` is the initial excess.
A raw curve given as a function is converted through
:func:`theta_from_h`, which inverts the decomposition at a point.

Hypotheses checked by :func:`validate_target`: ``x > 0``, ``alpha > 0``
(the target starts above the capital and stays above the bond account), and
``theta > 0`` on every segment (the target grows faster than the bond).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp

import numpy as np

from .errors import AssumptionError, DomainError
from .schedule import CoefficientSchedule, as_schedule
from .validation import ValidationReport, Violation

__all__ = [
    "TargetCurve",
    "h_at",
    "theta_from_h",
    "validate_target",
]


@dataclass(frozen=True)
class TargetCurve:
    """Target specification tied to a market's short rate.

    Args:
        x: initial capital.
        alpha: initial excess of the normalized target over 1.
        theta: excess growth-rate schedule (the excess compounds at theta/2).
        market_r: the short-rate schedule of the market the target lives in.
    """

    x: float
    alpha: float
    theta: CoefficientSchedule
    market_r: CoefficientSchedule

    def __init__(self, x: float, alpha: float, theta, market_r):
        object.__setattr__(self, "x", float(x))
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "theta", as_schedule(theta))
        object.__setattr__(self, "market_r", as_schedule(market_r))

    @classmethod
    def for_market(cls, market, x: float, alpha: float, theta) -> "TargetCurve":
        return cls(x=x, alpha=alpha, theta=theta, market_r=market.r)

    def excess_at(self, t: float) -> float:
        """Normalized excess over the bond, ``alpha * exp(int theta/2)``."""
        return self.alpha * exp(0.5 * self.theta.antiderivative(t))

    def h_at(self, t: float) -> float:
        if t < 0:
            raise DomainError(f"time must be nonnegative, got {t}")
        return self.excess_at(t) + exp(self.market_r.antiderivative(t))

    def h_values(self, ts) -> np.ndarray:
        """Vectorized :meth:`h_at` over an array of times."""
        arr = np.asarray(ts, dtype=float)
        return self.alpha * np.exp(0.5 * self.theta.antiderivative(arr)) + np.exp(
            self.market_r.antiderivative(arr)
        )

    def log_growth_rate(self, t: float) -> float:
        """Diagnostic h'(t)/h(t) of the normalized target."""
        excess = self.excess_at(t)
        bond = exp(self.market_r.antiderivative(t))
        numer = 0.5 * self.theta.value_at(t) * excess + self.market_r.value_at(t) * bond
        return numer / (excess + bond)


def h_at(tc: TargetCurve, t: float) -> float:
    """Normalized target level at time ``t`` (the wealth target is ``x h``)."""
    return tc.h_at(t)


def theta_from_h(h, r, s: float, h_prime=None) -> float:
    """Excess growth rate implied by a raw target curve at time ``s``.

    Inverts the stored decomposition pointwise:

        theta(s) = (2 h'(s) - 2 r(s) B(s)) / (h(s) - B(s)),   B = exp(int r).

    Args:
        h: normalized target curve, a callable of time.
        r: short-rate schedule (or a constant rate).
        s: evaluation time.
        h_prime: optional derivative of ``h``; when omitted it is
            approximated by central differences with step ``1e-6 * max(1, s)``.

    Raises:
        DomainError: s < 0.
        AssumptionError: the curve does not exceed the bond account at ``s``.
    """
    if s < 0:
        raise DomainError(f"time must be nonnegative, got {s}")
    r_sched = as_schedule(r)
    bond = exp(r_sched.antiderivative(s))
    gap = h(s) - bond
    if not gap > 0:
        raise AssumptionError(f"target curve does not exceed the bond at t={s}")
    if h_prime is not None:
        dh = h_prime(s)
    else:
        step = 1e-6 * max(1.0, s)
        lo = max(s - step, 0.0)
        dh = (h(s + step) - h(lo)) / (s + step - lo)
    return (2.0 * dh - 2.0 * r_sched.value_at(s) * bond) / gap


def validate_target(tc: TargetCurve) -> ValidationReport:
    """Check the target hypotheses; empty report means admissible."""
    violations: list[Violation] = []
    if not tc.x > 0:
        violations.append(Violation("capital-nonpositive", "x <= 0"))
    if not tc.alpha > 0:
        violations.append(Violation("target-initial-excess", "h(0) <= 1"))
    for k, t in enumerate(tc.theta.breakpoints):
        if not tc.theta.value_at(t) > 0:
            violations.append(
                Violation("target-growth-nonpositive", f"theta <= 0 on segment {k}", k)
            )
    return ValidationReport(tuple(violations))
