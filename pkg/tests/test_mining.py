import numpy as np
import pytest

from opplearn import (
    Bounds,
    DegenerateRangeError,
    InsufficientDataError,
    OppositionScheme,
    RunningRange,
    SampleSet,
    mine_opposites,
    mining_dataset,
    scheme_opposite,
    get_test_function,
)


def _square_set():
    # y = x^2 sampled at 0..3
    xs = np.array([[0.0], [1.0], [2.0], [3.0]])
    ys = np.array([0.0, 1.0, 4.0, 9.0])
    return SampleSet.from_arrays(xs, ys, (Bounds(0.0, 3.0),))


def reference_miner(samples, scheme):
    """Naive re-derivation of the mining loop, kept independent of the library."""
    out = []
    for i in range(samples.n_rows):
        opp = scheme_opposite(float(samples.outputs[i]), scheme, samples.output_range)
        best_j, best_diff = 0, float("inf")
        for j in range(samples.n_rows):
            diff = abs(opp - float(samples.outputs[j]))
            if diff < best_diff:
                best_j, best_diff = j, diff
        out.append((opp, best_j, best_diff))
    return out


def test_square_example_row_x0():
    pairs = mine_opposites(_square_set(), OppositionScheme.T1)
    p = pairs[0]
    assert p.opposite_output_target == 9.0
    assert p.opposite_inputs[0] == 3.0
    assert p.match_error == 0.0


def test_square_example_row_x2_self_match():
    pairs = mine_opposites(_square_set(), OppositionScheme.T1)
    p = pairs[2]
    assert p.opposite_output_target == 5.0
    assert p.opposite_inputs[0] == 2.0  # its own output 4 is the nearest to 5
    assert p.match_error == 1.0


def test_square_example_all_rows_match_reference():
    samples = _square_set()
    pairs = mine_opposites(samples, OppositionScheme.T1)
    for p, (opp, j, diff) in zip(pairs, reference_miner(samples, OppositionScheme.T1)):
        assert p.opposite_output_target == opp
        assert np.array_equal(p.opposite_inputs, samples.inputs[j])
        assert p.match_error == pytest.approx(diff)


def test_constant_outputs_under_t3_all_self_targets():
    xs = np.arange(5.0)[:, None]
    ys = np.full(5, 2.0)
    samples = SampleSet.from_arrays(xs, ys, (Bounds(-1.0, 6.0),))
    pairs = mine_opposites(samples, OppositionScheme.T3)
    for p in pairs:
        assert p.opposite_output_target == 2.0
        assert p.opposite_inputs[0] == 0.0  # smallest index wins the all-way tie
        assert p.match_error == 0.0


def test_random_sets_match_reference_miner():
    rng = np.random.default_rng(9)
    for _ in range(25):
        n = int(rng.integers(2, 40))
        d = int(rng.integers(1, 4))
        xs = rng.uniform(-5, 5, size=(n, d))
        ys = rng.uniform(-3, 7, size=n)
        bounds = tuple(Bounds(-5.0, 5.0) for _ in range(d))
        samples = SampleSet.from_arrays(xs, ys, bounds)
        scheme = OppositionScheme(["t1", "t2", "t3"][int(rng.integers(3))])
        if scheme is OppositionScheme.T2 and samples.output_range.max_seen <= 0:
            continue
        pairs = mine_opposites(samples, scheme)
        ref = reference_miner(samples, scheme)
        assert len(pairs) == n
        for p, (opp, j, diff) in zip(pairs, ref):
            assert p.opposite_output_target == opp
            assert np.array_equal(p.opposite_inputs, samples.inputs[j])


def test_count_and_closure_invariants():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = int(rng.integers(2, 60))
        xs = rng.uniform(0, 1, size=(n, 2))
        ys = rng.uniform(0, 1, size=n)
        samples = SampleSet.from_arrays(xs, ys, (Bounds(0.0, 1.0), Bounds(0.0, 1.0)))
        pairs = mine_opposites(samples, OppositionScheme.T1)
        assert len(pairs) == n
        rows = {tuple(r) for r in samples.inputs}
        for p in pairs:
            assert tuple(p.opposite_inputs) in rows


def test_determinism():
    rng = np.random.default_rng(2)
    xs = rng.uniform(0, 10, size=(30, 1))
    ys = rng.uniform(0, 5, size=30)
    samples = SampleSet.from_arrays(xs, ys, (Bounds(0.0, 10.0),))
    a = mine_opposites(samples, OppositionScheme.T1)
    b = mine_opposites(samples, OppositionScheme.T1)
    for p, q in zip(a, b):
        assert np.array_equal(p.opposite_inputs, q.opposite_inputs)
        assert p.match_error == q.match_error


def test_errors():
    one = SampleSet.from_arrays([[1.0]], [2.0], (Bounds(0.0, 2.0),))
    with pytest.raises(InsufficientDataError):
        mine_opposites(one, OppositionScheme.T1)
    flat = SampleSet.from_arrays([[0.0], [1.0]], [3.0, 3.0], (Bounds(0.0, 1.0),))
    with pytest.raises(DegenerateRangeError):
        mine_opposites(flat, OppositionScheme.T1)
    with pytest.raises(InsufficientDataError):
        mining_dataset([])


def test_mining_dataset_layout():
    pairs = mine_opposites(_square_set(), OppositionScheme.T1)
    inputs, targets = mining_dataset(pairs)
    assert inputs.shape == (4, 2)
    assert targets.shape == (4, 1)
    assert np.array_equal(inputs[:, 0], [0.0, 1.0, 2.0, 3.0])
    assert np.array_equal(inputs[:, 1], [0.0, 1.0, 4.0, 9.0])
    assert targets[0, 0] == 3.0


def test_mining_dataset_single_pair_relayout():
    pairs = mine_opposites(_square_set(), OppositionScheme.T1)
    inputs, targets = mining_dataset(pairs[2:3])
    assert inputs.tolist() == [[2.0, 4.0]]
    assert targets.tolist() == [[2.0]]


def test_mining_dataset_two_dims_gives_three_columns():
    xs = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]])
    ys = np.array([1.0, 2.0, 3.0])
    samples = SampleSet.from_arrays(xs, ys, (Bounds(0.0, 2.0), Bounds(0.0, 2.0)))
    inputs, targets = mining_dataset(mine_opposites(samples, OppositionScheme.T1))
    assert inputs.shape == (3, 3)
    assert targets.shape == (3, 2)


def test_sample_set_validation():
    with pytest.raises(Exception):
        SampleSet.from_arrays([[0.0], [5.0]], [1.0, 2.0], (Bounds(0.0, 1.0),))
    samples = SampleSet.from_arrays([[0.1], [0.9]], [1.0, 2.0], (Bounds(0.0, 1.0),))
    assert samples.output_range.min_seen == 1.0
    assert samples.output_range.max_seen == 2.0
    assert samples.output_range.count == 2


@pytest.mark.parametrize("fid", ["f3", "f5"])
def test_grid_mining_tracks_analytic_opposites(fid):
    # strictly monotone function on a uniform grid: the mined opposite must sit
    # within one local output gap (times the inverse's local slope) of the
    # analytic value
    f = get_test_function(fid)
    n = 10_001
    xs = np.linspace(f.domain.lo, f.domain.hi, n)
    ys = np.asarray(f.forward(xs), dtype=float)
    samples = SampleSet.from_arrays(xs[:, None], ys, (f.domain,))
    pairs = mine_opposites(samples, OppositionScheme.T1)
    y_lo, y_hi = samples.output_range.min_seen, samples.output_range.max_seen
    order = np.argsort(ys)
    ys_sorted = ys[order]
    gaps = np.diff(ys_sorted)
    for i in range(0, n, 37):
        p = pairs[i]
        opp_y = y_lo + y_hi - ys[i]
        truth = f.inverse(opp_y)
        k = np.searchsorted(ys_sorted, opp_y)
        local = gaps[max(0, k - 2) : min(len(gaps), k + 2)]
        gap = float(local.max()) if local.size else float(gaps.max())
        span = (
            abs(float(f.inverse(min(opp_y + gap, y_hi))) - float(f.inverse(max(opp_y - gap, y_lo))))
        )
        assert abs(p.opposite_inputs[0] - truth) <= span + 1e-9
