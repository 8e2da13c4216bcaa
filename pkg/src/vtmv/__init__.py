"""Mean-variance portfolio selection with a varying terminal time.

The library solves the continuous-time mean-variance problem when the
terminal time itself is a decision variable: the investor tracks a moving
wealth target and picks the deterministic horizon whose efficient frontier
point has minimal variance. Closed forms cover the fixed-horizon optimal
strategy and frontier; the horizon search reduces to the first root of a
scalar slope indicator; ODE and Monte Carlo oracles verify every formula.
"""

from .classical import (
    ClassicalSolution,
    EfficientPayoff,
    FeedbackStrategy,
    efficient_payoff,
    frontier_curve,
    mean_path,
    mu_of_tau,
    second_moment_at_tau,
    solve_classical,
    strategy_at,
)
from .errors import (
    AssumptionError,
    ConfigError,
    DomainError,
    HorizonExceededError,
    NoFiniteOptimumError,
    ScheduleError,
    SimulationError,
    SpecError,
    UnsupportedModelError,
    VtmvError,
)
from .figures import (
    FIGURES,
    emit_figures,
    figure_dataset,
    render_figure,
    write_csv,
)
from .market import MarketModel, integral_phi, integral_r, phi_at, validate_market
from .montecarlo import (
    SimulationConfig,
    SimulationResult,
    estimate_stopping_time,
    simulate_payoff,
    simulate_wealth,
)
from .schedule import CoefficientSchedule, as_schedule
from .specio import RunSpec, load_spec, parse_spec
from .target import TargetCurve, h_at, theta_from_h, validate_target
from .terminal_time import (
    Case,
    TerminalTimeSolution,
    classify_case,
    constant_target_time,
    objective_I,
    smallest_root,
    solve_terminal_time,
    tau_star_constant,
    tau_star_vs_assets,
    var_star_constant,
)
from .validation import ValidationReport, Violation

__version__ = "0.1.0"

__all__ = [
    "AssumptionError",
    "Case",
    "ClassicalSolution",
    "CoefficientSchedule",
    "ConfigError",
    "DomainError",
    "EfficientPayoff",
    "FIGURES",
    "FeedbackStrategy",
    "HorizonExceededError",
    "MarketModel",
    "NoFiniteOptimumError",
    "RunSpec",
    "ScheduleError",
    "SimulationConfig",
    "SimulationError",
    "SimulationResult",
    "SpecError",
    "TargetCurve",
    "TerminalTimeSolution",
    "UnsupportedModelError",
    "ValidationReport",
    "Violation",
    "VtmvError",
    "as_schedule",
    "classify_case",
    "constant_target_time",
    "efficient_payoff",
    "emit_figures",
    "estimate_stopping_time",
    "figure_dataset",
    "frontier_curve",
    "h_at",
    "integral_phi",
    "integral_r",
    "load_spec",
    "mean_path",
    "mu_of_tau",
    "objective_I",
    "parse_spec",
    "phi_at",
    "render_figure",
    "second_moment_at_tau",
    "simulate_payoff",
    "simulate_wealth",
    "smallest_root",
    "solve_classical",
    "solve_terminal_time",
    "strategy_at",
    "tau_star_constant",
    "tau_star_vs_assets",
    "theta_from_h",
    "validate_market",
    "validate_target",
    "var_star_constant",
    "write_csv",
    "__version__",
]
