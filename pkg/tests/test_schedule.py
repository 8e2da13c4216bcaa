"""Piecewise-constant schedule: lookup semantics and exact integration."""

import math

import numpy as np
import pytest

from vtmv import CoefficientSchedule, DomainError, ScheduleError, as_schedule


def test_first_breakpoint_must_be_zero():
    with pytest.raises(ScheduleError):
        CoefficientSchedule([0.5, 1.0], [1.0, 2.0])
    with pytest.raises(ScheduleError):
        CoefficientSchedule([], [])


def test_breakpoints_strictly_increasing():
    with pytest.raises(ScheduleError):
        CoefficientSchedule([0.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ScheduleError):
        CoefficientSchedule([0.0, 2.0, 1.0], [1.0, 2.0, 3.0])


def test_one_value_per_segment():
    with pytest.raises(ScheduleError):
        CoefficientSchedule([0.0, 1.0], [1.0])


def test_segment_values_share_a_shape():
    with pytest.raises(ScheduleError):
        CoefficientSchedule([0.0, 1.0], [np.ones(2), np.ones(3)])


def test_lookup_is_right_continuous():
    s = CoefficientSchedule([0.0, 1.0, 2.0], [10.0, 20.0, 30.0])
    assert s.value_at(0.0) == 10.0
    assert s.value_at(0.999) == 10.0
    # at a breakpoint the new segment is already in force
    assert s.value_at(1.0) == 20.0
    assert s.value_at(1.5) == 20.0
    assert s.value_at(2.0) == 30.0
    # last segment extends to infinity
    assert s.value_at(1e9) == 30.0


def test_lookup_rejects_negative_times():
    s = CoefficientSchedule([0.0], [1.0])
    with pytest.raises(DomainError):
        s.value_at(-0.1)
    with pytest.raises(DomainError):
        s.values_at([0.0, -1.0])
    with pytest.raises(DomainError):
        s.antiderivative(-1e-9)


def test_vectorized_lookup_matches_scalar():
    s = CoefficientSchedule([0.0, 0.5, 2.0], [1.0, -2.0, 3.0])
    ts = np.array([0.0, 0.25, 0.5, 1.9, 2.0, 7.0])
    assert np.array_equal(s.values_at(ts), [s.value_at(t) for t in ts])


def test_vectorized_lookup_requires_scalar_schedule():
    s = CoefficientSchedule([0.0], [np.ones(2)])
    with pytest.raises(ScheduleError):
        s.values_at([0.0, 1.0])


def test_structure_properties():
    const = CoefficientSchedule([0.0], [2.0])
    assert const.is_constant and const.is_scalar and const.n_segments == 1
    vec = CoefficientSchedule([0.0, 1.0], [np.ones(3), np.zeros(3)])
    assert not vec.is_constant and not vec.is_scalar and vec.n_segments == 2


def test_antiderivative_exact_across_segments():
    # r = 5% for a year then 10%: reaching log(1.2) of growth takes
    # 1 + (log 1.2 - 0.05) / 0.10 years, a closed form checked elsewhere.
    s = CoefficientSchedule([0.0, 1.0], [0.05, 0.10])
    assert s.antiderivative(0.0) == 0.0
    assert s.antiderivative(0.5) == pytest.approx(0.025, rel=1e-15)
    assert s.antiderivative(1.0) == pytest.approx(0.05, rel=1e-15)
    t = 1 + (math.log(1.2) - 0.05) / 0.10
    assert s.antiderivative(t) == pytest.approx(math.log(1.2), rel=1e-14)


def test_antiderivative_accepts_arrays():
    s = CoefficientSchedule([0.0, 2.0], [1.0, 3.0])
    ts = np.array([0.0, 1.0, 2.0, 3.0])
    out = s.antiderivative(ts)
    assert isinstance(out, np.ndarray)
    assert np.allclose(out, [0.0, 1.0, 2.0, 5.0], rtol=1e-15)
    assert isinstance(s.antiderivative(1.0), float)


def test_integral_additivity():
    s = CoefficientSchedule([0.0, 0.3, 1.7], [0.2, -0.4, 1.1])
    whole = s.integral(0.0, 5.0)
    split = s.integral(0.0, 0.77) + s.integral(0.77, 5.0)
    assert split == pytest.approx(whole, abs=1e-13)


def test_integral_rejects_reversed_interval():
    s = CoefficientSchedule([0.0], [1.0])
    with pytest.raises(DomainError):
        s.integral(2.0, 1.0)


def test_as_schedule_coerces_constants():
    s = as_schedule(0.05)
    assert s.is_constant and s.value_at(3.0) == 0.05
    v = as_schedule(np.array([1.0, 2.0]), shape=(2,))
    assert np.array_equal(v.value_at(0.0), [1.0, 2.0])


def test_as_schedule_passes_through_and_checks_shape():
    s = CoefficientSchedule([0.0], [0.05])
    assert as_schedule(s) is s
    with pytest.raises(ScheduleError):
        as_schedule(s, shape=(2,))
    with pytest.raises(ScheduleError):
        as_schedule(np.ones(3), shape=(2,))
