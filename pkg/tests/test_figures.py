"""Report datasets: exact headers, grids, and cross-checks against the solvers."""

import csv
import math

import numpy as np
import pytest

from vtmv import (
    MarketModel,
    RunSpec,
    TargetCurve,
    UnsupportedModelError,
    emit_figures,
    figure_dataset,
    render_figure,
    tau_star_constant,
    write_csv,
)


@pytest.fixture
def spec(market, target) -> RunSpec:
    return RunSpec(market=market, target=target)


def test_variance_vs_horizon_dataset(spec):
    header, rows = figure_dataset(spec, 1)
    assert header == ["tau", "var_alpha05", "var_alpha03"]
    assert len(rows) == 200
    assert rows[0][0] == pytest.approx(0.1) and rows[-1][0] == pytest.approx(8.0)
    # variance scales with alpha^2, so the columns sit in a fixed ratio
    for _, v05, v03 in rows:
        assert v03 / v05 == pytest.approx((0.3 / 0.5) ** 2, rel=1e-12)


def test_frontier_vs_envelope_dataset(spec):
    header, rows = figure_dataset(spec, 2)
    assert header == ["theta_half", "var_tau12", "var_tau24", "var_taustar"]
    assert len(rows) == 101
    assert rows[0][0] == pytest.approx(0.05) and rows[-1][0] == pytest.approx(0.55)
    # the envelope can never beat itself: var_taustar <= both fixed horizons
    for _, v12, v24, vstar in rows:
        assert vstar is not None
        assert vstar <= v12 + 1e-12 and vstar <= v24 + 1e-12


def test_envelope_none_when_no_finite_optimum(market_factory_unused=None):
    # phi = (0.10 - 0.05)^2 / 0.1^2 = 0.25, so theta <= 0.25 has no optimum
    m = MarketModel.constant(r=0.05, b=0.10, sigma=0.10)
    tc = TargetCurve(x=1.0, alpha=0.5, theta=0.40, market_r=m.r)
    spec = RunSpec(market=m, target=tc)
    _, rows2 = figure_dataset(spec, 2)
    _, rows3 = figure_dataset(spec, 3)
    for rows, col in ((rows2, 3), (rows3, 1)):
        missing = [row for row in rows if row[col] is None]
        assert len(missing) == 16  # theta_half in [0.05, 0.125]
        assert all(row[0] <= 0.125 + 1e-12 for row in missing)


def test_optimal_horizon_dataset_matches_closed_form(spec):
    header, rows = figure_dataset(spec, 3)
    assert header == ["theta_half", "tau_star"]
    assert len(rows) == 101
    for th_half, tau in rows:
        expect = tau_star_constant(2.0 * th_half, 0.0625)
        assert tau == pytest.approx(expect, rel=1e-12)
    at_020 = next(tau for th, tau in rows if abs(th - 0.20) < 1e-9)
    assert at_020 == pytest.approx(math.log(0.40 / 0.3375) / 0.0625, rel=1e-12)


def test_asset_count_dataset(spec):
    header, rows = figure_dataset(spec, 4)
    assert header == ["n", "tau_star"]
    assert [row[0] for row in rows] == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
    taus = [row[1] for row in rows]
    assert taus[6] is None  # 7 identical assets push phi past theta
    finite = taus[:6]
    assert all(b > a for a, b in zip(finite, finite[1:]))
    assert finite[0] == pytest.approx(tau_star_constant(0.40, 0.0625), rel=1e-12)


def test_asset_count_needs_constant_single_asset(two_segment_market, target, spec):
    bad = RunSpec(market=two_segment_market, target=target)
    with pytest.raises(UnsupportedModelError):
        figure_dataset(bad, 4)
    two = MarketModel.diagonal(r=0.05, b=[0.10, 0.10], sigma_diag=[0.2, 0.2])
    with pytest.raises(UnsupportedModelError):
        figure_dataset(RunSpec(market=two, target=spec.target), 4)


def test_unknown_figure_number(spec):
    with pytest.raises(ValueError, match="no figure 9"):
        figure_dataset(spec, 9)


def test_csv_formatting(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(path, ["a", "b"], [(1.0, None), (0.123456789012345, 2.0)])
    lines = path.read_text().splitlines()
    assert lines[0] == "a,b"
    assert lines[1] == "1,"
    assert lines[2] == "0.123456789,2"


def test_render_writes_png(tmp_path, spec):
    header, rows = figure_dataset(spec, 4)
    path = tmp_path / "fig.png"
    render_figure(4, header, rows, path)
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_emit_selected_figures(tmp_path, spec):
    written = emit_figures(spec, (1, 3), tmp_path, plots=False)
    assert [p.name for p in written] == ["figure1.csv", "figure3.csv"]
    with open(written[0]) as fh:
        got = list(csv.reader(fh))
    assert got[0] == ["tau", "var_alpha05", "var_alpha03"]
    assert len(got) == 201
    assert not (tmp_path / "figure1.png").exists()

    with_plots = emit_figures(spec, (4,), tmp_path)
    assert [p.name for p in with_plots] == ["figure4.csv", "figure4.png"]
