"""Terminal-time search: slope indicator, regimes, closed forms, bisection."""

import math

import numpy as np
import pytest

import vtmv
from vtmv import (
    AssumptionError,
    Case,
    CoefficientSchedule,
    DomainError,
    HorizonExceededError,
    MarketModel,
    NoFiniteOptimumError,
    TargetCurve,
    classify_case,
    constant_target_time,
    objective_I,
    smallest_root,
    solve_terminal_time,
    tau_star_constant,
    tau_star_vs_assets,
    var_star_constant,
)

# Closed-form reference values for the one-asset market with phi = 1/16.
TAU_STAR = {
    0.10: 15.693268048187619,
    0.40: 2.7183845887263587,
    0.80: 1.3015302312632384,
    1.10: 0.935939306905738,
}
VAR_STAR = {
    0.10: 0.7205120205443273,
    0.40: 4.004658978438978,
    1.10: 11.618998636373258,
}


def _with_theta(market, theta):
    return TargetCurve.for_market(market, x=1.0, alpha=0.5, theta=theta)


def test_slope_indicator_at_zero(market, target):
    # I(0) = -phi(0), exactly
    assert objective_I(market, target, 0.0) == -0.0625


def test_slope_indicator_near_root(market, target):
    assert objective_I(market, target, 2.7184) == pytest.approx(
        3.8528202656040733e-07, rel=1e-8
    )
    with pytest.raises(DomainError):
        objective_I(market, target, -1.0)


def test_closed_form_horizons(market):
    for theta, expected in TAU_STAR.items():
        assert tau_star_constant(theta, 0.0625) == pytest.approx(expected, rel=1e-14)


def test_closed_form_variances():
    for theta, expected in VAR_STAR.items():
        assert var_star_constant(1.0, 0.5, theta, 0.0625) == pytest.approx(
            expected, rel=1e-14
        )


def test_closed_forms_reject_bad_regimes():
    with pytest.raises(DomainError):
        tau_star_constant(0.4, 0.0)
    with pytest.raises(NoFiniteOptimumError):
        tau_star_constant(0.0625, 0.0625)
    with pytest.raises(DomainError):
        var_star_constant(1.0, 0.5, 0.4, -0.1)
    with pytest.raises(NoFiniteOptimumError):
        var_star_constant(1.0, 0.5, 0.05, 0.0625)


def test_classify_regimes(market):
    assert classify_case(market, _with_theta(market, 0.40)) is Case.FINITE_OPTIMUM
    assert classify_case(market, _with_theta(market, 0.05)) is Case.INFIMUM_AT_INFINITY
    mixed = _with_theta(market, CoefficientSchedule([0.0, 1.0], [0.40, 0.03]))
    assert classify_case(market, mixed) is Case.UNCLASSIFIED


def test_classify_seven_identical_assets():
    m = vtmv.MarketModel.diagonal(0.05, [0.10] * 7, [0.20] * 7)
    tc = TargetCurve.for_market(m, x=1.0, alpha=0.5, theta=0.40)
    # phi = 7/16 exceeds theta: adding the seventh asset kills the optimum
    assert classify_case(m, tc) is Case.INFIMUM_AT_INFINITY


def test_case_values_are_strings():
    assert Case.FINITE_OPTIMUM == "FiniteOptimum"
    assert Case.INFIMUM_AT_INFINITY == "InfimumAtInfinity"
    assert Case.CONSTANT_TARGET_RISKLESS == "ConstantTargetRiskless"
    assert Case.UNCLASSIFIED == "Unclassified"


def test_smallest_root_matches_closed_form(market, target):
    root = smallest_root(market, target)
    assert root.case is Case.FINITE_OPTIMUM
    assert root.tau_star == pytest.approx(TAU_STAR[0.40], abs=1e-9)
    assert root.var_star == pytest.approx(VAR_STAR[0.40], rel=1e-10)
    assert root.kappa == 6.4
    assert root.delta_margin == pytest.approx(0.3375, rel=1e-14)
    lo, hi = root.bracket
    assert lo <= root.tau_star <= hi and hi - lo <= 1e-10


def test_smallest_root_random_constant_specs(market):
    rng = np.random.default_rng(20260817)
    for _ in range(25):
        phi = rng.uniform(0.05, 0.6)
        kappa = rng.uniform(1.15, 30.0)
        theta = kappa * phi
        sigma = rng.uniform(0.1, 0.5)
        beta = math.sqrt(phi) * sigma
        r = rng.uniform(0.01, 0.08)
        m = MarketModel.constant(r, r + beta, sigma)
        tc = TargetCurve.for_market(m, x=rng.uniform(0.5, 2.0), alpha=rng.uniform(0.2, 0.8), theta=theta)
        assert vtmv.phi_at(m, 0.0) == pytest.approx(phi, rel=1e-12)
        root = smallest_root(m, tc)
        assert root.tau_star == pytest.approx(tau_star_constant(theta, vtmv.phi_at(m, 0.0)), abs=2e-9)
        assert root.var_star == pytest.approx(
            var_star_constant(tc.x, tc.alpha, theta, vtmv.phi_at(m, 0.0)), rel=1e-8
        )


def test_smallest_root_piecewise(two_segment_market, two_segment_target):
    root = smallest_root(two_segment_market, two_segment_target)
    assert root.case is Case.FINITE_OPTIMUM
    assert root.kappa is None  # not constant, no single ratio
    eps = 1e-6
    assert objective_I(two_segment_market, two_segment_target, root.tau_star - eps) < 0
    assert objective_I(two_segment_market, two_segment_target, root.tau_star + eps) > 0


def test_smallest_root_requires_uniform_margin(market):
    with pytest.raises(NoFiniteOptimumError):
        smallest_root(market, _with_theta(market, 0.05))


def test_smallest_root_respects_horizon(market, target):
    with pytest.raises(HorizonExceededError):
        smallest_root(market, target, horizon=1.0)


def test_solve_dispatches_finite_optimum(market, target):
    sol = solve_terminal_time(market, target)
    assert sol.case is Case.FINITE_OPTIMUM
    assert sol.tau_star == pytest.approx(TAU_STAR[0.40], abs=1e-9)
    assert sol.note is None


def test_solve_dispatches_infimum_at_infinity(market):
    tc = _with_theta(market, 0.05)
    sol = solve_terminal_time(market, tc)
    assert sol.case is Case.INFIMUM_AT_INFINITY
    assert sol.tau_star is None
    assert sol.var_star == pytest.approx(
        float(vtmv.frontier_curve(market, tc, [100.0])[0]), rel=1e-12
    )
    assert sol.kappa == pytest.approx(0.8, rel=1e-14)
    assert "horizon" in sol.note
    # spot check the monotone decrease the case is named after
    var = vtmv.frontier_curve(market, tc, [1.0, 10.0, 50.0])
    assert var[0] > var[1] > var[2]


def test_solve_dispatches_unclassified(market):
    mixed = _with_theta(market, CoefficientSchedule([0.0, 1.0], [0.40, 0.03]))
    sol = solve_terminal_time(market, mixed)
    assert sol.case is Case.UNCLASSIFIED
    assert sol.tau_star is not None and sol.var_star is not None
    assert sol.delta_margin < 0
    assert "sign" in sol.note


def test_constant_target_single_rate(market):
    sol = constant_target_time(1.0, 1.1, market)
    assert sol.case is Case.CONSTANT_TARGET_RISKLESS
    assert sol.tau_star == pytest.approx(1.9062035960864987, rel=1e-14)
    assert sol.var_star == 0.0
    assert "bond" in sol.note


def test_constant_target_reached_immediately(market):
    assert constant_target_time(1.0, 0.9, market).tau_star == 0.0
    assert constant_target_time(1.0, 1.0, market).tau_star == 0.0


def test_constant_target_two_segment_rate():
    r = CoefficientSchedule([0.0, 1.0], [0.05, 0.10])
    m = MarketModel(n=1, d=1, r=r, b=np.array([0.15]), sigma=np.eye(1) * 0.2)
    sol = constant_target_time(1.0, 1.2, m)
    assert sol.tau_star == pytest.approx(2.3232155679395454, rel=1e-13)


def test_constant_target_rides_through_a_rate_dip():
    r = CoefficientSchedule([0.0, 1.0, 2.0], [0.05, -0.01, 0.03])
    m = MarketModel(n=1, d=1, r=r, b=np.array([0.15]), sigma=np.eye(1) * 0.2)
    sol = constant_target_time(1.0, math.exp(0.052), m)
    # growth resumes at t=2 from log-wealth 0.04
    assert sol.tau_star == pytest.approx(2.0 + (0.052 - 0.04) / 0.03, rel=1e-12)


def test_constant_target_unreachable_level():
    r = CoefficientSchedule([0.0, 1.0], [0.05, -0.01])
    m = MarketModel(n=1, d=1, r=r, b=np.array([0.15]), sigma=np.eye(1) * 0.2)
    with pytest.raises(AssumptionError):
        constant_target_time(1.0, math.exp(0.06), m)


def test_constant_target_domain_errors(market):
    with pytest.raises(DomainError):
        constant_target_time(0.0, 1.1, market)
    with pytest.raises(DomainError):
        constant_target_time(1.0, -1.0, market)


def test_horizon_vs_asset_count():
    rows = tau_star_vs_assets(0.05, 0.10, 0.20, 0.40, 7)
    assert [n for n, _ in rows] == list(range(1, 8))
    assert rows[0][1] == pytest.approx(TAU_STAR[0.40], rel=1e-14)
    assert rows[5][1] == pytest.approx(7.393569925972748, rel=1e-13)
    assert rows[6][1] is None
    finite = [t for _, t in rows if t is not None]
    assert all(a < b for a, b in zip(finite, finite[1:]))
    with pytest.raises(DomainError):
        tau_star_vs_assets(0.05, 0.10, 0.20, 0.40, 0)
