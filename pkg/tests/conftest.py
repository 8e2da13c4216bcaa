"""Shared fixtures: the reference single-asset market and friends."""

import numpy as np
import pytest

import vtmv


@pytest.fixture
def market():
    """One asset, one driver: r=5%, b=10%, sigma=20%, so phi = 1/16."""
    return vtmv.MarketModel.constant(0.05, 0.10, 0.20)


@pytest.fixture
def target(market):
    """Reference moving target: x=1, alpha=0.5, theta=0.40."""
    return vtmv.TargetCurve.for_market(market, x=1.0, alpha=0.5, theta=0.40)


@pytest.fixture
def six_asset_market():
    """Six independent copies of the reference asset: phi = 6/16."""
    return vtmv.MarketModel.diagonal(0.05, [0.10] * 6, [0.20] * 6)


@pytest.fixture
def two_segment_market():
    """Rate and drift both jump at t=1; exercises breakpoint handling."""
    r = vtmv.CoefficientSchedule([0.0, 1.0], [0.05, 0.03])
    b = vtmv.CoefficientSchedule([0.0, 1.0], [np.array([0.10]), np.array([0.12])])
    sigma = vtmv.CoefficientSchedule([0.0], [np.array([[0.20]])])
    return vtmv.MarketModel(n=1, d=1, r=r, b=b, sigma=sigma)


@pytest.fixture
def two_segment_target(two_segment_market):
    theta = vtmv.CoefficientSchedule([0.0, 1.5], [0.40, 0.30])
    return vtmv.TargetCurve.for_market(two_segment_market, x=1.0, alpha=0.5, theta=theta)
