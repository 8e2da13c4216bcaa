"""Exception types shared across the package.

The hierarchy separates structural problems (malformed inputs), domain
problems (arguments outside their valid range), and model-assumption
problems (inputs that are well formed but violate the hypotheses the
closed forms rely on). The CLI maps these onto its exit codes.
"""

from __future__ import annotations

__all__ = [
    "VtmvError",
    "ScheduleError",
    "DomainError",
    "AssumptionError",
    "NoFiniteOptimumError",
    "HorizonExceededError",
    "UnsupportedModelError",
    "ConfigError",
    "SimulationError",
    "SpecError",
]


class VtmvError(Exception):
    """Base class for all package errors."""


class ScheduleError(VtmvError, ValueError):
    """Malformed coefficient schedule (structure, not values)."""


class DomainError(VtmvError, ValueError):
    """Argument outside its valid range (negative time, empty interval)."""


class AssumptionError(VtmvError, ValueError):
    """A model hypothesis is violated at the point of use.

    Examples: the diffusion Gram matrix fails to factorize, or the wealth
    target does not exceed the bond account at the requested horizon.
    """


class NoFiniteOptimumError(VtmvError, ValueError):
    """Requested a finite optimal horizon outside the regime that has one."""


class HorizonExceededError(VtmvError, RuntimeError):
    """Root scan reached the horizon without the required sign change."""


class UnsupportedModelError(VtmvError, ValueError):
    """Operation restricted to a simpler market class than the one given."""


class ConfigError(VtmvError, ValueError):
    """Invalid simulation configuration (path count, step size)."""


class SimulationError(VtmvError, RuntimeError):
    """Simulation produced too many non-finite paths to report statistics."""


class SpecError(VtmvError, ValueError):
    """Run specification document is malformed or has unknown fields."""
