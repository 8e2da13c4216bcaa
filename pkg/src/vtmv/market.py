"""Frictionless market model with deterministic piecewise-constant coefficients.

The market has one riskless bond with short rate ``r(t)`` and ``n`` risky
assets driven by a ``d``-dimensional Brownian motion, with drift vector
``b(t)`` and volatility matrix ``sigma(t)``. Every coefficient is a
:class:`~vtmv.schedule.CoefficientSchedule`, so integrals of the rate and of
the squared market price of risk

    phi(t) = beta(t) [sigma(t) sigma(t)^T]^{-1} beta(t)^T,
    beta(t) = b(t) - r(t) 1,

are exact segment sums. ``phi`` is the single market ingredient every closed
form downstream consumes.

Hypotheses checked by :func:`validate_market` (per coefficient segment):
positive short rate, strictly positive excess returns, and a diffusion Gram
matrix ``sigma sigma^T`` bounded below by ``epsilon`` times the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AssumptionError
from .schedule import CoefficientSchedule, as_schedule
from .validation import ValidationReport, Violation

__all__ = [
    "MarketModel",
    "validate_market",
    "phi_at",
    "integral_r",
    "integral_phi",
]


def _phi_value(beta: np.ndarray, sigma: np.ndarray) -> float:
    """phi = ||L^{-1} beta||^2 with L the Cholesky factor of sigma sigma^T.

    The symmetric factorization keeps phi exactly nonnegative; it also
    reproduces ratio cancellations bit-for-bit in the one-asset case, which
    plain LU does not.
    """
    gram = sigma @ sigma.T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise AssumptionError(
            "sigma sigma^T is not positive definite; validate the market first"
        ) from exc
    y = np.linalg.solve(chol, beta)
    return float(y @ y)


@dataclass(frozen=True)
class MarketModel:
    """Bond plus ``n`` risky assets on a ``d``-dimensional Brownian basis.

    Args:
        n: number of risky assets.
        d: number of independent Brownian drivers.
        r: short-rate schedule (scalar segments).
        b: drift schedule (segments of shape ``(n,)``).
        sigma: volatility schedule (segments of shape ``(n, d)``).
        epsilon: uniform ellipticity floor for ``sigma sigma^T``.
    """

    n: int
    d: int
    r: CoefficientSchedule
    b: CoefficientSchedule
    sigma: CoefficientSchedule
    epsilon: float = 1e-8

    def __init__(self, n: int, d: int, r, b, sigma, epsilon: float = 1e-8):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "r", as_schedule(r))
        object.__setattr__(self, "b", as_schedule(b, shape=(self.n,)))
        object.__setattr__(self, "sigma", as_schedule(sigma, shape=(self.n, self.d)))
        object.__setattr__(self, "epsilon", float(epsilon))

    @classmethod
    def constant(cls, r: float, b, sigma, epsilon: float = 1e-8) -> "MarketModel":
        """Market with time-independent coefficients; shapes infer n and d."""
        b_arr = np.atleast_1d(np.asarray(b, dtype=float))
        s_arr = np.atleast_2d(np.asarray(sigma, dtype=float))
        n, d = s_arr.shape
        return cls(n=n, d=d, r=r, b=b_arr, sigma=s_arr, epsilon=epsilon)

    @classmethod
    def diagonal(cls, r: float, b, sigma_diag, epsilon: float = 1e-8) -> "MarketModel":
        """Constant market with independent noises, one per asset."""
        b_arr = np.atleast_1d(np.asarray(b, dtype=float))
        return cls.constant(r, b_arr, np.diag(np.atleast_1d(sigma_diag)), epsilon)

    # -- derived coefficients --------------------------------------------------

    @cached_property
    def breakpoints(self) -> tuple[float, ...]:
        """Union grid on which all coefficients are simultaneously constant."""
        merged = np.unique(
            np.concatenate(
                [self.r.breakpoints, self.b.breakpoints, self.sigma.breakpoints]
            )
        )
        return tuple(float(t) for t in merged)

    def beta_at(self, t: float) -> np.ndarray:
        """Excess-return vector ``b(t) - r(t)``."""
        return np.asarray(self.b.value_at(t), dtype=float) - self.r.value_at(t)

    @cached_property
    def phi(self) -> CoefficientSchedule:
        """Squared market price of risk as a scalar schedule."""
        values = [
            _phi_value(self.beta_at(t), np.asarray(self.sigma.value_at(t)))
            for t in self.breakpoints
        ]
        return CoefficientSchedule(self.breakpoints, values)

    def gram_at(self, t: float) -> np.ndarray:
        """Diffusion Gram matrix ``sigma(t) sigma(t)^T``."""
        s = np.asarray(self.sigma.value_at(t))
        return s @ s.T


def phi_at(m: MarketModel, t: float) -> float:
    """Squared market price of risk at time ``t``.

    For a diagonal constant market this reduces to the sum of squared
    per-asset Sharpe ratios.
    """
    return m.phi.value_at(t)


def integral_r(m: MarketModel, t0: float, t1: float) -> float:
    """Exact integral of the short rate over ``[t0, t1]``."""
    return m.r.integral(t0, t1)


def integral_phi(m: MarketModel, t0: float, t1: float) -> float:
    """Exact integral of ``phi`` over ``[t0, t1]``."""
    return m.phi.integral(t0, t1)


def validate_market(m: MarketModel) -> ValidationReport:
    """Check the standing hypotheses segment by segment.

    Returns a report with one entry per violation; an empty report means the
    market is admissible. A Gram matrix that fails to factorize is reported
    as an ellipticity violation, the same as a small eigenvalue.
    """
    violations: list[Violation] = []
    for k, t in enumerate(m.breakpoints):
        rate = m.r.value_at(t)
        if not rate > 0:
            violations.append(
                Violation("rate-nonpositive", f"r <= 0 on segment {k}", k)
            )
        beta = m.beta_at(t)
        if not np.all(beta > 0):
            violations.append(
                Violation("excess-return-nonpositive", f"beta <= 0 on segment {k}", k)
            )
        gram = m.gram_at(t)
        try:
            min_eig = float(np.linalg.eigvalsh(gram).min())
            elliptic = min_eig > m.epsilon
        except np.linalg.LinAlgError:
            elliptic = False
        if not elliptic:
            violations.append(
                Violation(
                    "diffusion-not-elliptic",
                    f"sigma sigma^T not >= epsilon I on segment {k}",
                    k,
                )
            )
    return ValidationReport(tuple(violations))
