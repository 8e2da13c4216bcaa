"""Piecewise-constant coefficient schedules on the half-line.

Every time-varying model coefficient (short rate, drift vector, volatility
matrix, target growth rate) is represented by the same structure: a sorted
list of breakpoints starting at 0 and one value per segment. Segments are
right-open, ``[t_k, t_{k+1})``, and the last segment extends to infinity.
Scalar schedules support exact integration, so downstream quantities built
from integrals of the coefficients are closed-form per segment rather than
quadrature approximations.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainError, ScheduleError

__all__ = ["CoefficientSchedule", "as_schedule"]


@dataclass(frozen=True)
class CoefficientSchedule:
    """Right-continuous step function of time.

    Args:
        breakpoints: strictly increasing segment start times, first one 0.
        values: one value per segment; scalars for rate-like coefficients,
            arrays for drift vectors and volatility matrices. All segments
            must share one shape.
    """

    breakpoints: tuple[float, ...]
    values: tuple = field(repr=False)

    def __init__(self, breakpoints: Sequence[float], values: Sequence) -> None:
        bps = tuple(float(t) for t in breakpoints)
        if not bps or bps[0] != 0.0:
            raise ScheduleError("first breakpoint must be 0")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ScheduleError("breakpoints must be strictly increasing")
        if len(values) != len(bps):
            raise ScheduleError(
                f"need one value per segment: {len(values)} values "
                f"for {len(bps)} breakpoints"
            )
        vals = []
        for v in values:
            arr = np.asarray(v, dtype=float)
            vals.append(float(arr) if arr.ndim == 0 else arr)
        shapes = {np.shape(v) for v in vals}
        if len(shapes) > 1:
            raise ScheduleError(f"segment values disagree in shape: {shapes}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", tuple(vals))

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints)

    @property
    def is_constant(self) -> bool:
        return len(self.breakpoints) == 1

    @property
    def is_scalar(self) -> bool:
        return np.shape(self.values[0]) == ()

    def segment_index(self, t: float) -> int:
        """Index of the segment containing time ``t`` (t >= 0)."""
        if t < 0:
            raise DomainError(f"time must be nonnegative, got {t}")
        return bisect_right(self.breakpoints, t) - 1

    def value_at(self, t: float):
        """Coefficient value in force at time ``t``."""
        return self.values[self.segment_index(t)]

    def values_at(self, ts) -> np.ndarray:
        """Vectorized :meth:`value_at` for scalar schedules."""
        if not self.is_scalar:
            raise ScheduleError("vectorized lookup requires a scalar schedule")
        arr = np.asarray(ts, dtype=float)
        if np.any(arr < 0):
            raise DomainError("times must be nonnegative")
        idx = np.searchsorted(np.asarray(self.breakpoints), arr, side="right") - 1
        return np.asarray(self.values, dtype=float)[idx]

    # -- exact integration of scalar schedules --------------------------------

    @cached_property
    def _cumulative(self) -> np.ndarray:
        """F(b_k) = integral over [0, b_k], one entry per breakpoint."""
        if not self.is_scalar:
            raise ScheduleError("integration requires a scalar schedule")
        widths = np.diff(np.asarray(self.breakpoints))
        vals = np.asarray(self.values[:-1]) if widths.size else np.empty(0)
        return np.concatenate(([0.0], np.cumsum(vals * widths)))

    def antiderivative(self, t) -> np.ndarray | float:
        """Integral over [0, t]; accepts a scalar or an array of times."""
        ts = np.asarray(t, dtype=float)
        if np.any(ts < 0):
            raise DomainError("antiderivative requires t >= 0")
        bps = np.asarray(self.breakpoints)
        idx = np.searchsorted(bps, ts, side="right") - 1
        vals = np.asarray(self.values, dtype=float)
        out = self._cumulative[idx] + vals[idx] * (ts - bps[idx])
        return float(out) if np.ndim(t) == 0 else out

    def integral(self, t0: float, t1: float) -> float:
        """Exact integral over [t0, t1]; requires 0 <= t0 <= t1."""
        if t0 > t1:
            raise DomainError(f"empty interval: [{t0}, {t1}]")
        return float(self.antiderivative(t1) - self.antiderivative(t0))


def as_schedule(value, *, shape: tuple[int, ...] = ()) -> CoefficientSchedule:
    """Coerce a constant or an existing schedule into a CoefficientSchedule.

    A bare number (or array of the requested shape) becomes a single-segment
    schedule. ``shape`` is enforced on every segment value.
    """
    if isinstance(value, CoefficientSchedule):
        sched = value
    else:
        sched = CoefficientSchedule([0.0], [value])
    for v in sched.values:
        if np.shape(v) != shape:
            raise ScheduleError(
                f"coefficient has shape {np.shape(v)}, expected {shape}"
            )
    return sched
