"""Run-specification documents.

A run spec is a single JSON object holding the market, the target, and
optional run parameters:

    {
      "market": {"n": 1, "d": 1, "r": 0.05, "b": 0.10, "sigma": 0.20},
      "target": {"x": 1.0, "alpha": 0.5, "theta": 0.40},
      "tau": 1.0, "horizon": 100.0, "grid": 0.001, "tol": 1e-10,
      "paths": 100000, "step": 0.001, "seed": 1, "antithetic": false
    }

Every coefficient (``r``, ``b``, ``sigma``, ``theta``) is either a constant
or ``{"breakpoints": [...], "values": [...]}`` with one value per segment.
``b`` values are numbers for one asset or length-``n`` lists; ``sigma``
values are numbers for ``n = d = 1`` or ``n x d`` nested lists. Unknown keys
anywhere are rejected, so typos fail loudly instead of being ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ScheduleError, SpecError
from .market import MarketModel
from .schedule import CoefficientSchedule
from .target import TargetCurve

__all__ = ["RunSpec", "parse_spec", "load_spec"]

_MARKET_KEYS = {"n", "d", "r", "b", "sigma", "epsilon"}
_TARGET_KEYS = {"x", "alpha", "theta"}
_RUN_KEYS = {
    "market",
    "target",
    "tau",
    "horizon",
    "grid",
    "tol",
    "paths",
    "step",
    "seed",
    "antithetic",
}


@dataclass(frozen=True)
class RunSpec:
    """Parsed run specification with defaults filled in."""

    market: MarketModel
    target: TargetCurve
    tau: float | None = None
    horizon: float = 100.0
    grid: float = 1e-3
    tol: float = 1e-10
    paths: int = 100_000
    step: float = 1e-3
    seed: int = 1
    antithetic: bool = False

    def override(self, **kwargs) -> "RunSpec":
        """Copy with non-None keyword overrides applied (CLI flags)."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **updates)


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SpecError(f"unknown {where} keys: {sorted(unknown)}")


def _number(obj, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SpecError(f"{where} must be a number, got {obj!r}")
    return float(obj)


def _schedule_parts(obj, where: str) -> tuple[list, list]:
    """Split a constant or {breakpoints, values} object into its parts."""
    if isinstance(obj, dict):
        _require_keys(obj, {"breakpoints", "values"}, where)
        if "breakpoints" not in obj or "values" not in obj:
            raise SpecError(f"{where} needs both 'breakpoints' and 'values'")
        breakpoints, values = obj["breakpoints"], obj["values"]
        if not isinstance(breakpoints, list) or not isinstance(values, list):
            raise SpecError(f"{where} breakpoints and values must be lists")
        return breakpoints, values
    return [0.0], [obj]


def _coefficient(obj, where: str, shape: tuple[int, ...]) -> CoefficientSchedule:
    """Parse one coefficient into a schedule of the given segment shape.

    A bare number is accepted for shape () and, as a convenience, for the
    one-element shapes of the single-asset case.
    """
    breakpoints, values = _schedule_parts(obj, where)
    segs = []
    for v in values:
        if isinstance(v, bool):
            raise SpecError(f"{where} must be a number, got {v!r}")
        scalar = isinstance(v, (int, float))
        if scalar and shape != () and np.prod(shape) == 1:
            segs.append(np.full(shape, float(v)))
            continue
        try:
            arr = np.asarray(v, dtype=float)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"malformed {where} value {v!r}") from exc
        if arr.shape != shape:
            raise SpecError(f"{where} segment has shape {arr.shape}, expected {shape}")
        segs.append(arr)
    try:
        return CoefficientSchedule(breakpoints, segs)
    except (ScheduleError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed {where}: {exc}") from exc


def _parse_market(obj) -> MarketModel:
    if not isinstance(obj, dict):
        raise SpecError("'market' must be an object")
    _require_keys(obj, _MARKET_KEYS, "market")
    for key in ("n", "d", "r", "b", "sigma"):
        if key not in obj:
            raise SpecError(f"market is missing '{key}'")
    n, d = obj["n"], obj["d"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecError(f"market n must be a positive integer, got {n!r}")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise SpecError(f"market d must be a positive integer, got {d!r}")
    r = _coefficient(obj["r"], "market r", ())
    b = _coefficient(obj["b"], "market b", (n,))
    sigma = _coefficient(obj["sigma"], "market sigma", (n, d))
    epsilon = _number(obj.get("epsilon", 1e-8), "market epsilon")
    try:
        return MarketModel(n=n, d=d, r=r, b=b, sigma=sigma, epsilon=epsilon)
    except ScheduleError as exc:
        raise SpecError(str(exc)) from exc


def _parse_target(obj, market: MarketModel) -> TargetCurve:
    if not isinstance(obj, dict):
        raise SpecError("'target' must be an object")
    _require_keys(obj, _TARGET_KEYS, "target")
    for key in _TARGET_KEYS:
        if key not in obj:
            raise SpecError(f"target is missing '{key}'")
    theta = _coefficient(obj["theta"], "target theta", ())
    return TargetCurve(
        x=_number(obj["x"], "target x"),
        alpha=_number(obj["alpha"], "target alpha"),
        theta=theta,
        market_r=market.r,
    )


def parse_spec(doc: dict) -> RunSpec:
    """Build a RunSpec from a decoded JSON object; unknown keys are errors."""
    if not isinstance(doc, dict):
        raise SpecError("run spec must be a JSON object")
    _require_keys(doc, _RUN_KEYS, "run spec")
    for key in ("market", "target"):
        if key not in doc:
            raise SpecError(f"run spec is missing '{key}'")
    market = _parse_market(doc["market"])
    target = _parse_target(doc["target"], market)

    out = RunSpec(market=market, target=target)
    if "tau" in doc:
        tau = _number(doc["tau"], "tau")
        if not tau > 0:
            raise SpecError(f"tau must be positive, got {tau}")
        out = out.override(tau=tau)
    for key in ("horizon", "grid", "tol", "step"):
        if key in doc:
            val = _number(doc[key], key)
            if not val > 0:
                raise SpecError(f"{key} must be positive, got {val}")
            out = out.override(**{key: val})
    if "paths" in doc:
        paths = doc["paths"]
        if not isinstance(paths, int) or isinstance(paths, bool) or paths < 2:
            raise SpecError(f"paths must be an integer >= 2, got {paths!r}")
        out = out.override(paths=paths)
    if "seed" in doc:
        seed = doc["seed"]
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise SpecError(f"seed must be an integer, got {seed!r}")
        out = out.override(seed=seed)
    if "antithetic" in doc:
        anti = doc["antithetic"]
        if not isinstance(anti, bool):
            raise SpecError(f"antithetic must be a boolean, got {anti!r}")
        out = out.override(antithetic=anti)
    return out


def load_spec(path: str | Path) -> RunSpec:
    """Read and parse a run-spec JSON file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid JSON: {exc}") from exc
    return parse_spec(doc)
