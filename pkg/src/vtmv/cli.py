"""Command-line interface.

Five subcommands over a shared JSON run spec:

* ``validate``: report violated model hypotheses.
* ``frontier``: CSV of minimal variance and mean target over a horizon grid.
* ``solve``: the optimal terminal time analysis as JSON.
* ``simulate``: Monte Carlo of the controlled wealth against the closed forms.
* ``figures``: the four report datasets as CSV plus rendered PNGs.

Exit codes: 0 success, 1 violated model hypotheses, 2 malformed spec or
parameters, 3 numeric failure (no root within the horizon, simulation
overflow). Output files are deterministic for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .classical import solve_classical
from .errors import (
    AssumptionError,
    ConfigError,
    DomainError,
    HorizonExceededError,
    NoFiniteOptimumError,
    SimulationError,
    SpecError,
    UnsupportedModelError,
)
from .figures import FIGURES, emit_figures, render_figure, write_csv
from .market import validate_market
from .montecarlo import SimulationConfig, estimate_stopping_time, simulate_wealth
from .specio import RunSpec, load_spec
from .target import validate_target
from .terminal_time import Case, solve_terminal_time
from .validation import ValidationReport

__all__ = ["main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vtmv",
        description="mean-variance portfolio selection with a varying terminal time",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="run spec JSON file")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=None, help="override RNG seed")
    common.add_argument("--paths", type=int, default=None, help="override path count")
    common.add_argument("--step", type=float, default=None, help="override time step")

    sub.add_parser("validate", parents=[common], help="check model hypotheses")

    p_frontier = sub.add_parser(
        "frontier", parents=[common], help="variance frontier over a horizon grid"
    )
    p_frontier.add_argument("--tau-min", type=float, default=0.1)
    p_frontier.add_argument("--tau-max", type=float, default=8.0)
    p_frontier.add_argument("--points", type=int, default=200)
    p_frontier.add_argument(
        "--no-plot", action="store_true", help="skip the PNG next to the CSV"
    )

    p_solve = sub.add_parser(
        "solve", parents=[common], help="optimal terminal time analysis"
    )
    p_solve.add_argument("--horizon", type=float, default=None)
    p_solve.add_argument("--grid", type=float, default=None)
    p_solve.add_argument("--tol", type=float, default=None)

    p_sim = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo against the closed forms"
    )
    p_sim.add_argument("--tau", type=float, default=None, help="simulation horizon")
    p_sim.add_argument(
        "--strategy",
        choices=("optimal", "riskless"),
        default="optimal",
        help="allocation rule to simulate",
    )
    p_sim.add_argument(
        "--dump-paths", type=int, default=0, metavar="K", help="dump first K paths"
    )
    p_sim.add_argument(
        "--dump-out", default="paths.csv", help="CSV file for the path dump"
    )

    p_fig = sub.add_parser(
        "figures", parents=[common], help="report datasets and rendered figures"
    )
    p_fig.add_argument(
        "--which",
        nargs="+",
        default=["all"],
        help="figure numbers to emit (default all)",
    )
    p_fig.add_argument(
        "--no-plot", action="store_true", help="emit CSVs only, no PNGs"
    )
    return parser


def _load(args) -> RunSpec:
    spec = load_spec(args.spec)
    return spec.override(
        seed=getattr(args, "seed", None),
        paths=getattr(args, "paths", None),
        step=getattr(args, "step", None),
        horizon=getattr(args, "horizon", None),
        grid=getattr(args, "grid", None),
        tol=getattr(args, "tol", None),
        tau=getattr(args, "tau", None),
    )


def _validation(spec: RunSpec) -> ValidationReport:
    return ValidationReport.combine(
        validate_market(spec.market), validate_target(spec.target)
    )


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
    else:
        Path(out).write_text(text + "\n")


def cmd_validate(args) -> int:
    spec = _load(args)
    report = _validation(spec)
    lines = [f"violation: {v}" for v in report.violations]
    lines.append("spec: valid" if report.ok else f"spec: {len(report.violations)} violation(s)")
    _emit("\n".join(lines), args.out)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _require_valid(spec: RunSpec) -> None:
    report = _validation(spec)
    if not report.ok:
        raise AssumptionError(str(report))


def cmd_frontier(args) -> int:
    spec = _load(args)
    _require_valid(spec)
    if not 0 < args.tau_min <= args.tau_max:
        raise DomainError("need 0 < --tau-min <= --tau-max")
    if args.points < 1:
        raise DomainError("--points must be at least 1")
    taus = np.linspace(args.tau_min, args.tau_max, args.points)
    variances = np.array(
        [solve_classical(spec.market, spec.target, t).frontier_variance for t in taus]
    )
    means = spec.target.x * spec.target.h_values(taus)
    header = ["tau", "variance", "mean_target"]
    rows = list(zip(taus, variances, means))
    if args.out is None:
        print(",".join(header))
        for row in rows:
            print(",".join(format(v, ".10g") for v in row))
        return EXIT_OK
    out = Path(args.out)
    write_csv(out, header, rows)
    if not args.no_plot:
        render_figure(1, ["tau", "variance"], [(t, v) for t, v, _ in rows],
                      out.with_suffix(".png"))
    return EXIT_OK


def _solution_json(sol) -> str:
    payload = {
        "case": sol.case.value,
        "tau_star": sol.tau_star,
        "var_star": sol.var_star,
        "kappa": sol.kappa,
        "delta_margin": sol.delta_margin,
        "bracket": list(sol.bracket) if sol.bracket else None,
        "note": sol.note,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def cmd_solve(args) -> int:
    spec = _load(args)
    _require_valid(spec)
    sol = solve_terminal_time(
        spec.market, spec.target, spec.horizon, spec.grid, spec.tol
    )
    _emit(_solution_json(sol), args.out)
    return EXIT_OK


def _simulation_horizon(spec: RunSpec) -> float:
    if spec.tau is not None:
        return spec.tau
    sol = solve_terminal_time(spec.market, spec.target, spec.horizon, spec.grid, spec.tol)
    if sol.case is not Case.FINITE_OPTIMUM:
        raise AssumptionError(
            "no finite optimal horizon exists; pass an explicit tau"
        )
    return sol.tau_star


def cmd_simulate(args) -> int:
    spec = _load(args)
    _require_valid(spec)
    tau = _simulation_horizon(spec)
    cfg = SimulationConfig(
        paths=spec.paths, step=spec.step, seed=spec.seed, antithetic=spec.antithetic
    )
    sol = solve_classical(spec.market, spec.target, tau)
    if args.strategy == "optimal":
        strategy = sol.strategy
        closed_mean, closed_var = sol.target_mean, sol.frontier_variance
    else:
        strategy = lambda t, wealth: np.zeros(spec.market.n)  # noqa: E731
        closed_mean = spec.target.x * float(
            np.exp(spec.market.r.antiderivative(tau))
        )
        closed_var = 0.0
    result = simulate_wealth(
        spec.market, strategy, spec.target.x, tau, cfg, record_first=args.dump_paths
    )
    stopping = estimate_stopping_time(
        spec.market, spec.target, strategy, spec.target.x, tau, step=spec.step
    )
    payload = {
        "tau": tau,
        "strategy": args.strategy,
        "paths": result.paths,
        "flagged": result.flagged,
        "seed": spec.seed,
        "step": spec.step,
        "antithetic": spec.antithetic,
        "mean": result.mean,
        "variance": result.variance,
        "se_mean": result.se_mean,
        "se_variance": result.se_variance,
        "closed_form_mean": closed_mean,
        "closed_form_variance": closed_var,
        "stopping_time": stopping,
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    if args.dump_paths > 0:
        rows = [
            (float(p), float(t), float(w))
            for p, path in enumerate(result.trajectories)
            for t, w in zip(result.times, path)
        ]
        write_csv(Path(args.dump_out), ["path", "t", "wealth"], rows)
    return EXIT_OK


def cmd_figures(args) -> int:
    spec = _load(args)
    _require_valid(spec)
    tokens = [t for token in args.which for t in str(token).split(",") if t]
    if any(t == "all" for t in tokens):
        which = list(FIGURES)
    else:
        try:
            which = sorted({int(t) for t in tokens})
        except ValueError:
            raise SpecError(f"--which takes figure numbers or 'all', got {args.which}")
        unknown = [k for k in which if k not in FIGURES]
        if unknown:
            raise SpecError(f"no such figures: {unknown}")
    out_dir = Path(args.out) if args.out is not None else Path(".")
    written = emit_figures(spec, which, out_dir, plots=not args.no_plot)
    for path in written:
        print(path)
    return EXIT_OK


_COMMANDS = {
    "validate": cmd_validate,
    "frontier": cmd_frontier,
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "figures": cmd_figures,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SpecError, DomainError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (AssumptionError, NoFiniteOptimumError, UnsupportedModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (HorizonExceededError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
