"""Fixed-step RK4 integration on a breakpoint-aware grid.

The model ODEs have piecewise-smooth right-hand sides: coefficients jump at
schedule breakpoints and are analytic in between. The integrator forces grid
nodes at every breakpoint and uses a uniform step no larger than the
requested one inside each stretch, so no step straddles a jump. Because the
stage at a stretch's right endpoint must see the left-limit coefficients,
the right-hand side is built per stretch: ``make_f`` receives a time
strictly inside the stretch and returns the RHS valid throughout it.
"""

from __future__ import annotations

from math import ceil
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError

__all__ = ["rk4_path"]

RHS = Callable[[float, float], float]


def rk4_path(
    make_f: Callable[[float], RHS],
    y0: float,
    t0: float,
    t1: float,
    step: float,
    breakpoints: Iterable[float] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t1``.

    Args:
        make_f: factory mapping a stretch-interior time to the RHS used on
            that whole stretch (freeze piecewise-constant coefficients there;
            smooth time dependence stays inside the returned callable).
        y0: initial value at ``t0``.
        step: maximum step width; stretches are subdivided uniformly.
        breakpoints: forced grid nodes (coefficient jump times).

    Returns:
        The full grid and the solution on it, both endpoints included.
    """
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    if t1 < t0:
        raise DomainError(f"empty interval: [{t0}, {t1}]")
    if t1 == t0:
        return np.array([t0]), np.array([float(y0)])

    edges = [t0] + sorted(t for t in set(breakpoints) if t0 < t < t1) + [t1]
    ts: list[float] = [t0]
    ys: list[float] = [float(y0)]
    y = float(y0)
    for left, right in zip(edges, edges[1:]):
        f = make_f(0.5 * (left + right))
        n_sub = max(1, ceil((right - left) / step - 1e-12))
        h = (right - left) / n_sub
        t = left
        for k in range(n_sub):
            k1 = f(t, y)
            k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = f(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t = left + (k + 1) * h
            ts.append(t)
            ys.append(y)
    return np.asarray(ts), np.asarray(ys)
