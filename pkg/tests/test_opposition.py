import math

import numpy as np
import pytest

from opplearn import (
    Bounds,
    DegenerateRangeError,
    DomainError,
    OppositionScheme,
    RunningRange,
    scheme_opposite,
    type1_opposite,
    update_range,
)


def test_bounds_reject_degenerate_and_reversed():
    with pytest.raises(DomainError):
        Bounds(1.0, 1.0)
    with pytest.raises(DomainError):
        Bounds(2.0, 1.0)
    with pytest.raises(DomainError):
        Bounds(0.0, math.inf)


def test_type1_direct_evaluation():
    assert type1_opposite(0.3, Bounds(0.0, 1.0)) == 0.7


def test_type1_boundary_maps_to_boundary():
    b = Bounds(2.5, 7.5)
    assert type1_opposite(2.5, b) == 7.5
    assert type1_opposite(7.5, b) == 2.5
    # awkward bounds where the naive sum overshoots by an ulp
    b2 = Bounds(0.1, 0.3)
    assert type1_opposite(0.1, b2) == 0.3
    assert type1_opposite(0.3, b2) == 0.1


def test_type1_midpoint_is_fixed_point():
    b = Bounds(-4.0, 10.0)
    mid = (b.lo + b.hi) / 2.0
    assert type1_opposite(mid, b) == mid


def test_type1_outside_bounds_raises():
    with pytest.raises(DomainError, match="1.5"):
        type1_opposite(1.5, Bounds(0.0, 1.0))


def test_type1_involution_and_monotone_reversal():
    rng = np.random.default_rng(3)
    for _ in range(500):
        lo, width = rng.uniform(-50, 50), rng.uniform(1e-3, 100)
        b = Bounds(lo, lo + width)
        x1, x2 = np.sort(rng.uniform(b.lo, b.hi, size=2))
        o1, o2 = type1_opposite(float(x1), b), type1_opposite(float(x2), b)
        assert abs(type1_opposite(o1, b) - x1) <= np.spacing(abs(x1)) + np.spacing(b.hi)
        if x1 < x2:
            assert o1 >= o2


def _range(lo, hi, mean, count=10):
    return RunningRange(lo, hi, mean, count)


def test_scheme_t1_reflection():
    r = _range(0.0, 10.0, 5.0)
    assert scheme_opposite(2.0, OppositionScheme.T1, r) == 8.0


def test_scheme_t2_modular_shift():
    r = _range(0.0, 10.0, 5.0)
    assert scheme_opposite(3.0, OppositionScheme.T2, r) == 8.0


def test_scheme_t2_wraps_into_nonnegative():
    r = _range(0.0, 10.0, 5.0)
    v = scheme_opposite(9.0, OppositionScheme.T2, r)
    assert v == (9.0 + 5.0) % 10.0 == 4.0


def test_scheme_t3_fallback_to_reflection():
    r = _range(0.0, 10.0, 1.0)
    # 2*1 - 9 = -7 is out of range, so the reflection result 0 + 10 - 9 = 1 is used
    assert scheme_opposite(9.0, OppositionScheme.T3, r) == 1.0


def test_scheme_t3_mean_is_fixed_point():
    r = _range(0.0, 10.0, 4.0)
    assert scheme_opposite(4.0, OppositionScheme.T3, r) == 4.0


def test_scheme_t3_closure():
    rng = np.random.default_rng(11)
    for _ in range(500):
        lo = rng.uniform(-20, 20)
        hi = lo + rng.uniform(1e-6, 40)
        vals = rng.uniform(lo, hi, size=5)
        r = RunningRange.from_values(np.append(vals, [lo, hi]))
        v = float(rng.uniform(lo, hi))
        out = scheme_opposite(v, OppositionScheme.T3, r)
        assert r.min_seen <= out <= r.max_seen


def test_scheme_t1_double_application_returns_value():
    rng = np.random.default_rng(7)
    for _ in range(200):
        lo = rng.uniform(-100, 100)
        hi = lo + rng.uniform(1e-3, 200)
        r = _range(lo, hi, (lo + hi) / 2)
        v = float(rng.uniform(lo, hi))
        once = scheme_opposite(v, OppositionScheme.T1, r)
        twice = scheme_opposite(once, OppositionScheme.T1, r)
        assert twice == pytest.approx(v, abs=1e-12)


def test_scheme_errors():
    flat = _range(5.0, 5.0, 5.0)
    with pytest.raises(DegenerateRangeError):
        scheme_opposite(5.0, OppositionScheme.T1, flat)
    with pytest.raises(DegenerateRangeError):
        scheme_opposite(5.0, OppositionScheme.T2, flat)
    neg = _range(-10.0, -1.0, -5.0)
    with pytest.raises(DomainError):
        scheme_opposite(-5.0, OppositionScheme.T2, neg)
    with pytest.raises(DomainError):
        scheme_opposite(1.0, OppositionScheme.T1, RunningRange.empty())


def test_scheme_t3_degenerate_range_fixed_point():
    flat = _range(5.0, 5.0, 5.0)
    assert scheme_opposite(5.0, OppositionScheme.T3, flat) == 5.0


def test_update_range_first_observation():
    r = update_range(RunningRange.empty(), 5.0)
    assert (r.min_seen, r.max_seen, r.mean_seen, r.count) == (5.0, 5.0, 5.0, 1)


def test_update_range_arithmetic():
    r = RunningRange(0.0, 10.0, 5.0, 2)
    r2 = update_range(r, 20.0)
    assert (r2.min_seen, r2.max_seen, r2.mean_seen, r2.count) == (0.0, 20.0, 10.0, 3)


def test_update_range_interior_value_only_bumps_count():
    r = RunningRange(0.0, 10.0, 5.0, 2)
    r2 = update_range(r, 5.0)
    assert (r2.min_seen, r2.max_seen, r2.mean_seen, r2.count) == (0.0, 10.0, 5.0, 3)


def test_update_range_rejects_non_finite():
    with pytest.raises(DomainError):
        update_range(RunningRange.empty(), math.nan)
    with pytest.raises(DomainError):
        update_range(RunningRange.empty(), math.inf)


def test_running_range_mean_accumulation_accuracy():
    rng = np.random.default_rng(5)
    vals = rng.uniform(-1e6, 1e6, size=2000)
    r = RunningRange.empty()
    for v in vals:
        r = update_range(r, float(v))
    assert r.count == 2000
    assert r.mean_seen == pytest.approx(vals.mean(), rel=1e-9)
    assert r.min_seen <= r.mean_seen <= r.max_seen


def test_from_values_matches_updates():
    vals = [3.0, -1.0, 7.0, 3.0]
    r = RunningRange.from_values(vals)
    assert (r.min_seen, r.max_seen, r.count) == (-1.0, 7.0, 4)
    assert r.mean_seen == pytest.approx(3.0)
