"""Report datasets and their rendered figures.

Each dataset mirrors one panel of the standard report: the variance-versus-
horizon frontier for two initial target excesses, the frontier against the
optimal-horizon envelope across target growth rates, the optimal horizon as
a function of the growth rate, and the optimal horizon as identical assets
are added. Datasets are plain ``(header, rows)`` pairs written as CSV with
10 significant digits; a missing optimum is an empty cell. Rendering draws
each dataset to a PNG next to its CSV.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import numpy as np

from .classical import frontier_curve
from .errors import NoFiniteOptimumError, UnsupportedModelError
from .market import MarketModel
from .specio import RunSpec
from .target import TargetCurve
from .terminal_time import smallest_root, tau_star_constant, tau_star_vs_assets

__all__ = [
    "FIGURES",
    "figure_dataset",
    "write_csv",
    "render_figure",
    "emit_figures",
]

FIGURES = (1, 2, 3, 4)

_TAU_GRID = np.linspace(0.1, 8.0, 200)
_THETA_HALF_GRID = np.linspace(0.05, 0.55, 101)
_FIG1_ALPHAS = (0.5, 0.3)
_FIG2_TAUS = (1.2, 2.4)
_FIG4_MAX_ASSETS = 7

Rows = list[tuple]


def _with_alpha(tc: TargetCurve, alpha: float) -> TargetCurve:
    return TargetCurve(x=tc.x, alpha=alpha, theta=tc.theta, market_r=tc.market_r)


def _with_theta(tc: TargetCurve, theta: float) -> TargetCurve:
    return TargetCurve(x=tc.x, alpha=tc.alpha, theta=theta, market_r=tc.market_r)


def _tau_star(m: MarketModel, tc: TargetCurve, theta: float) -> float | None:
    """Optimal horizon for a constant growth rate, None when none exists."""
    if m.phi.is_constant:
        phi = m.phi.value_at(0.0)
        return tau_star_constant(theta, phi) if theta > phi else None
    try:
        return smallest_root(m, _with_theta(tc, theta)).tau_star
    except NoFiniteOptimumError:
        return None


def _figure1(spec: RunSpec) -> tuple[list[str], Rows]:
    header = ["tau", "var_alpha05", "var_alpha03"]
    curves = [
        frontier_curve(spec.market, _with_alpha(spec.target, a), _TAU_GRID)
        for a in _FIG1_ALPHAS
    ]
    rows = [(t, c0, c1) for t, c0, c1 in zip(_TAU_GRID, *curves)]
    return header, rows


def _figure2(spec: RunSpec) -> tuple[list[str], Rows]:
    header = ["theta_half", "var_tau12", "var_tau24", "var_taustar"]
    rows: Rows = []
    for th_half in _THETA_HALF_GRID:
        theta = 2.0 * th_half
        sweep = _with_theta(spec.target, theta)
        fixed = [
            float(frontier_curve(spec.market, sweep, np.array([tau]))[0])
            for tau in _FIG2_TAUS
        ]
        tau_opt = _tau_star(spec.market, spec.target, theta)
        best = (
            None
            if tau_opt is None
            else float(frontier_curve(spec.market, sweep, np.array([tau_opt]))[0])
        )
        rows.append((th_half, *fixed, best))
    return header, rows


def _figure3(spec: RunSpec) -> tuple[list[str], Rows]:
    header = ["theta_half", "tau_star"]
    rows: Rows = [
        (th_half, _tau_star(spec.market, spec.target, 2.0 * th_half))
        for th_half in _THETA_HALF_GRID
    ]
    return header, rows


def _figure4(spec: RunSpec) -> tuple[list[str], Rows]:
    m = spec.market
    if m.n != 1 or not (m.r.is_constant and m.b.is_constant and m.sigma.is_constant):
        raise UnsupportedModelError(
            "the asset-count sweep needs a constant one-asset base market"
        )
    if m.d != 1:
        raise UnsupportedModelError("the asset-count sweep needs a single noise")
    if not spec.target.theta.is_constant:
        raise UnsupportedModelError("the asset-count sweep needs a constant theta")
    r = m.r.value_at(0.0)
    b = float(np.asarray(m.b.value_at(0.0))[0])
    sigma = float(np.asarray(m.sigma.value_at(0.0))[0, 0])
    theta = spec.target.theta.value_at(0.0)
    pairs = tau_star_vs_assets(r, b, sigma, theta, _FIG4_MAX_ASSETS)
    return ["n", "tau_star"], [(float(n), t) for n, t in pairs]


_BUILDERS = {1: _figure1, 2: _figure2, 3: _figure3, 4: _figure4}


def figure_dataset(spec: RunSpec, which: int) -> tuple[list[str], Rows]:
    """Dataset (header, rows) for one figure; rows may hold None cells."""
    if which not in _BUILDERS:
        raise ValueError(f"no figure {which}; choose from {sorted(_BUILDERS)}")
    return _BUILDERS[which](spec)


def _fmt(value) -> str:
    return "" if value is None else format(float(value), ".10g")


def write_csv(path: Path, header: Sequence[str], rows: Rows) -> None:
    """Write a dataset with 10 significant digits; None becomes empty."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def render_figure(which: int, header: Sequence[str], rows: Rows, path: Path) -> None:
    """Draw one dataset to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cols = list(zip(*rows))
    xs = np.asarray(cols[0], dtype=float)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if which == 4:
        ys = np.array([np.nan if v is None else v for v in cols[1]])
        ax.plot(xs, ys, "o-", label=header[1])
        missing = xs[np.isnan(ys)]
        for n in missing:
            ax.axvline(n, color="crimson", linestyle=":", linewidth=1)
        if missing.size:
            ax.plot([], [], color="crimson", linestyle=":", label="no finite optimum")
        ax.set_xticks(xs)
    else:
        for name, col in zip(header[1:], cols[1:]):
            ys = np.array([np.nan if v is None else v for v in col])
            ax.plot(xs, ys, label=name)
    ax.set_xlabel(header[0])
    ax.set_ylabel("tau_star" if which in (3, 4) else "terminal variance")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def emit_figures(
    spec: RunSpec,
    which: Sequence[int],
    out_dir: Path,
    plots: bool = True,
) -> list[Path]:
    """Write CSV (and optionally PNG) files for the requested figures."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for k in which:
        header, rows = figure_dataset(spec, k)
        csv_path = out_dir / f"figure{k}.csv"
        write_csv(csv_path, header, rows)
        written.append(csv_path)
        if plots:
            png_path = out_dir / f"figure{k}.png"
            render_figure(k, header, rows, png_path)
            written.append(png_path)
    return written
