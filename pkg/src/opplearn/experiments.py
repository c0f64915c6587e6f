"""Reproducible experiment runners for the three benchmark series.

Series 1 measures, on the invertible 1-D test functions, how far type-I
(reflection) opposites and learned type-II opposites land from the ground
truth that the analytic inverses provide. Series 2 streams samples into an
evolving model one at a time and records the held-out error curve. Series 3
trains a two-input opposite model on a 2-D optimization surface and compares
random guesses, their learned opposites, and their reflection opposites.

Runs are independent given derived seeds (base seed + run index), so the
harness may execute them in parallel; the worker count is capped by the
``OPPLEARN_THREADS`` environment variable (default: logical processors).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import stats

from .benchmarks import (
    OPT_FUNCTION_IDS,
    TEST_FUNCTION_IDS,
    OptFunction,
    TestFunction,
    get_opt_function,
    get_test_function,
    true_opposite,
)
from .errors import ConfigError, SchemeMismatchError
from .fuzzy import TrainConfig, TrainingHistory, build_fis, evolve_update, predict_batch
from .mining import SampleSet, mine_opposites, mining_dataset
from .opposition import (
    Bounds,
    OppositionScheme,
    RunningRange,
    scheme_opposite,
    type1_opposite,
)

__all__ = [
    "ErrorStats",
    "ExperimentConfig",
    "Series1Run",
    "Series1Result",
    "run_series1",
    "EvolutionPoint",
    "run_series2",
    "Series3Run",
    "Series3Result",
    "run_series3",
    "obl_select",
    "type1_vs_random_ks",
]


@dataclass(frozen=True)
class ErrorStats:
    """Mean and sample standard deviation of an error population."""

    mean: float
    std: float
    count: int

    @classmethod
    def from_values(cls, values) -> "ErrorStats":
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise ConfigError("cannot aggregate zero error values")
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        return cls(float(arr.mean()), std, int(arr.size))


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by the experiment runners."""

    function_id: str
    scheme: OppositionScheme = OppositionScheme.T1
    n_samples: int = 100
    n_runs: int = 30
    seed: int = 0
    train_config: TrainConfig = field(default_factory=TrainConfig)
    test_fraction: float = 0.1

    def __post_init__(self):
        if self.n_samples < self.train_config.n_clusters:
            raise ConfigError(
                f"n_samples={self.n_samples} below n_clusters={self.train_config.n_clusters}"
            )
        if self.n_runs < 1:
            raise ConfigError(f"n_runs must be >= 1, got {self.n_runs}")
        if not 0.0 < self.test_fraction <= 1.0:
            raise ConfigError(f"test_fraction must be in (0, 1], got {self.test_fraction}")


def _max_workers() -> int:
    raw = os.environ.get("OPPLEARN_THREADS", "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"OPPLEARN_THREADS must be an integer, got {raw!r}") from None
    return max(1, os.cpu_count() or 1)


def _run_indexed(worker: Callable[[int], object], n_runs: int) -> list:
    workers = min(_max_workers(), n_runs)
    if workers <= 1 or n_runs <= 1:
        return [worker(r) for r in range(n_runs)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(n_runs)))


def _anchored_uniform(rng: np.random.Generator, bounds: Bounds, n: int) -> np.ndarray:
    # endpoints are pinned so the observed output range spans the full image
    if n < 2:
        raise ConfigError(f"need at least 2 samples to anchor a range, got {n}")
    body = rng.uniform(bounds.lo, bounds.hi, size=n - 2)
    return np.concatenate([body, [bounds.lo, bounds.hi]])


def _truth_range(f: TestFunction, sample_outputs: np.ndarray) -> RunningRange:
    # exact image endpoints; the mean (used by the mean-reflection scheme)
    # is the best available estimate, taken from the sampled outputs
    lo, hi = f.image()
    return RunningRange(lo, hi, float(np.mean(sample_outputs)), int(sample_outputs.size))


def _true_opposites(
    f: TestFunction,
    xs: np.ndarray,
    scheme: OppositionScheme,
    y_range: RunningRange,
) -> tuple[np.ndarray, np.ndarray]:
    """Ground-truth opposites and a clamped-flag per point."""
    values = np.empty(xs.size)
    flagged = np.zeros(xs.size, dtype=bool)
    for i, x in enumerate(xs):
        res = true_opposite(f, float(x), scheme, y_range)
        values[i] = res.value
        flagged[i] = res.clamped
    return values, flagged


def _check_flagged(flagged: np.ndarray, scheme: OppositionScheme, fid: str) -> None:
    if flagged.sum() > 0.5 * flagged.size:
        raise SchemeMismatchError(
            f"{scheme.name} sent {int(flagged.sum())} of {flagged.size} opposite outputs "
            f"outside the image of {fid}"
        )


@dataclass(frozen=True)
class Series1Run:
    run: int
    type1_mean: float
    type1_std: float
    type2_mean: float
    type2_std: float
    n_flagged: int


class Series1Result(NamedTuple):
    type1: ErrorStats
    type2: ErrorStats
    runs: tuple[Series1Run, ...]


def run_series1(
    cfg: ExperimentConfig,
    function: Optional[TestFunction] = None,
    n_eval: Optional[int] = None,
) -> Series1Result:
    """Inverse-validated opposite errors on a 1-D test function.

    Each run draws ``n_samples`` training points (uniform, endpoints
    anchored), mines opposites, trains a model mapping ``(x, y)`` to the
    opposite input, and then scores type-I and learned type-II opposites
    against the ground truth on a fresh uniform evaluation set. Points whose
    opposite output must be clamped into the image are excluded. Run-level
    means are aggregated into mean +/- std across runs.
    """
    if function is None and cfg.function_id not in TEST_FUNCTION_IDS:
        raise ConfigError(
            f"series 1 needs one of {', '.join(TEST_FUNCTION_IDS)}, got {cfg.function_id!r}"
        )
    f = function if function is not None else get_test_function(cfg.function_id)
    n_eval = cfg.n_samples if n_eval is None else int(n_eval)

    def one_run(r: int) -> Series1Run:
        rng = np.random.default_rng(cfg.seed + r)
        xs = _anchored_uniform(rng, f.domain, cfg.n_samples)
        ys = np.asarray(f.forward(xs), dtype=float)
        samples = SampleSet.from_arrays(xs[:, None], ys, (f.domain,))
        pairs = mine_opposites(samples, cfg.scheme)
        train_in, train_out = mining_dataset(pairs)
        tc = replace(cfg.train_config, seed=cfg.train_config.seed + r)
        model = build_fis(train_in, train_out, tc)

        xe = rng.uniform(f.domain.lo, f.domain.hi, size=n_eval)
        ye = np.asarray(f.forward(xe), dtype=float)
        y_range = _truth_range(f, ys)
        truth, flagged = _true_opposites(f, xe, cfg.scheme, y_range)
        _check_flagged(flagged, cfg.scheme, f.id)
        keep = ~flagged

        opp1 = np.array([type1_opposite(float(x), f.domain) for x in xe])
        opp2 = predict_batch(model, np.column_stack([xe, ye]))[:, 0]
        err1 = np.abs(truth[keep] - opp1[keep])
        err2 = np.abs(truth[keep] - opp2[keep])
        return Series1Run(
            run=r,
            type1_mean=float(err1.mean()),
            type1_std=float(err1.std(ddof=1)) if err1.size > 1 else 0.0,
            type2_mean=float(err2.mean()),
            type2_std=float(err2.std(ddof=1)) if err2.size > 1 else 0.0,
            n_flagged=int(flagged.sum()),
        )

    runs = tuple(_run_indexed(one_run, cfg.n_runs))
    return Series1Result(
        type1=ErrorStats.from_values([r.type1_mean for r in runs]),
        type2=ErrorStats.from_values([r.type2_mean for r in runs]),
        runs=runs,
    )


class EvolutionPoint(NamedTuple):
    n_seen: int
    stats: ErrorStats


def run_series2(
    cfg: ExperimentConfig,
    initial_n: int,
    final_n: int,
    function: Optional[TestFunction] = None,
    n_eval: int = 100,
) -> list[EvolutionPoint]:
    """One evolving pass: train offline, then absorb samples one at a time.

    The model is trained on ``initial_n`` samples, then each new sample is
    mined against the full accumulated pool (output statistics recomputed
    over everything seen so far) and folded in with a warm-started retrain.
    After every update the held-out type-II error is recorded, giving the
    error curve from ``initial_n + 1`` to ``final_n`` samples.
    """
    if function is None and cfg.function_id not in TEST_FUNCTION_IDS:
        raise ConfigError(
            f"series 2 needs one of {', '.join(TEST_FUNCTION_IDS)}, got {cfg.function_id!r}"
        )
    if initial_n < cfg.train_config.n_clusters:
        raise ConfigError(
            f"initial_n={initial_n} below n_clusters={cfg.train_config.n_clusters}"
        )
    if final_n <= initial_n:
        raise ConfigError(f"final_n={final_n} must exceed initial_n={initial_n}")
    f = function if function is not None else get_test_function(cfg.function_id)
    rng = np.random.default_rng(cfg.seed)

    pool_x = _anchored_uniform(rng, f.domain, initial_n)
    pool_y = np.asarray(f.forward(pool_x), dtype=float)
    samples = SampleSet.from_arrays(pool_x[:, None], pool_y, (f.domain,))
    pairs = mine_opposites(samples, cfg.scheme)
    train_in, train_out = mining_dataset(pairs)
    model = build_fis(train_in, train_out, cfg.train_config)
    history = TrainingHistory(train_in, train_out)

    held_x = rng.uniform(f.domain.lo, f.domain.hi, size=n_eval)
    held_y = np.asarray(f.forward(held_x), dtype=float)

    records: list[EvolutionPoint] = []
    for n_seen in range(initial_n + 1, final_n + 1):
        x_new = float(rng.uniform(f.domain.lo, f.domain.hi))
        y_new = float(f.forward(x_new))
        pool_x = np.append(pool_x, x_new)
        pool_y = np.append(pool_y, y_new)
        pool_range = RunningRange.from_values(pool_y)
        target_y = scheme_opposite(y_new, cfg.scheme, pool_range)
        j = int(np.argmin(np.abs(target_y - pool_y)))
        model = evolve_update(
            model, [[x_new, y_new]], [[float(pool_x[j])]], history
        )

        y_range = _truth_range(f, pool_y)
        truth, flagged = _true_opposites(f, held_x, cfg.scheme, y_range)
        _check_flagged(flagged, cfg.scheme, f.id)
        keep = ~flagged
        pred = predict_batch(model, np.column_stack([held_x, held_y]))[:, 0]
        errs = np.abs(truth[keep] - pred[keep])
        records.append(EvolutionPoint(n_seen, ErrorStats.from_values(errs)))
    return records


def obl_select(
    g: OptFunction, x: tuple[float, float], x_opp: tuple[float, float]
) -> tuple[tuple[float, float], float, float]:
    """Pick the better of a guess and its opposite on ``g``.

    Errors are the function values themselves (all three surfaces have
    minimum 0). The opposite is clipped into the domain before evaluation;
    ties go to the original guess.
    """
    x = (float(x[0]), float(x[1]))
    clipped = (float(g.domain[0].clip(x_opp[0])), float(g.domain[1].clip(x_opp[1])))
    err_x = float(g.evaluate(*x))
    err_opp = float(g.evaluate(*clipped))
    chosen = x if err_x <= err_opp else clipped
    return chosen, err_x, err_opp


@dataclass(frozen=True)
class Series3Run:
    run: int
    random_mean: float
    random_std: float
    type2_mean: float
    type2_std: float
    type1_mean: float
    type1_std: float


class Series3Result(NamedTuple):
    random: ErrorStats
    type2: ErrorStats
    type1: ErrorStats
    runs: tuple[Series3Run, ...]


def run_series3(cfg: ExperimentConfig) -> Series3Result:
    """Guess versus opposite-guess errors on a 2-D optimization surface.

    Each run learns an opposite model ``(x1, x2, y) -> (ox1, ox2)`` from
    mined samples, then scores ``test_fraction * n_samples`` fresh random
    guesses, their learned type-II opposites (clipped into the domain), and
    their type-I reflection opposites. Errors are raw function values.
    """
    if cfg.function_id not in OPT_FUNCTION_IDS:
        raise ConfigError(
            f"series 3 needs one of {', '.join(OPT_FUNCTION_IDS)}, got {cfg.function_id!r}"
        )
    g = get_opt_function(cfg.function_id)
    b1, b2 = g.domain
    n_test = max(1, round(cfg.test_fraction * cfg.n_samples))

    def one_run(r: int) -> Series3Run:
        rng = np.random.default_rng(cfg.seed + r)
        x1 = rng.uniform(b1.lo, b1.hi, size=cfg.n_samples)
        x2 = rng.uniform(b2.lo, b2.hi, size=cfg.n_samples)
        y = np.asarray(g.evaluate(x1, x2), dtype=float)
        samples = SampleSet.from_arrays(np.column_stack([x1, x2]), y, g.domain)
        pairs = mine_opposites(samples, cfg.scheme)
        train_in, train_out = mining_dataset(pairs)
        tc = replace(cfg.train_config, seed=cfg.train_config.seed + r)
        model = build_fis(train_in, train_out, tc)

        e1 = rng.uniform(b1.lo, b1.hi, size=n_test)
        e2 = rng.uniform(b2.lo, b2.hi, size=n_test)
        ye = np.asarray(g.evaluate(e1, e2), dtype=float)
        err_random = ye.copy()

        opp = predict_batch(model, np.column_stack([e1, e2, ye]))
        o1 = b1.clip(opp[:, 0])
        o2 = b2.clip(opp[:, 1])
        err_type2 = np.asarray(g.evaluate(o1, o2), dtype=float)

        r1 = np.array([type1_opposite(float(v), b1) for v in e1])
        r2 = np.array([type1_opposite(float(v), b2) for v in e2])
        err_type1 = np.asarray(g.evaluate(r1, r2), dtype=float)

        def _std(a):
            return float(a.std(ddof=1)) if a.size > 1 else 0.0

        return Series3Run(
            run=r,
            random_mean=float(err_random.mean()),
            random_std=_std(err_random),
            type2_mean=float(err_type2.mean()),
            type2_std=_std(err_type2),
            type1_mean=float(err_type1.mean()),
            type1_std=_std(err_type1),
        )

    runs = tuple(_run_indexed(one_run, cfg.n_runs))
    return Series3Result(
        random=ErrorStats.from_values([r.random_mean for r in runs]),
        type2=ErrorStats.from_values([r.type2_mean for r in runs]),
        type1=ErrorStats.from_values([r.type1_mean for r in runs]),
        runs=runs,
    )


def type1_vs_random_ks(g: OptFunction, n: int, seed: int) -> float:
    """Two-sample KS p-value: type-I opposite errors versus fresh random errors.

    The opposites come from one uniform sample, the comparison errors from an
    independent uniform sample, so the two arms are independent.
    """
    rng = np.random.default_rng(seed)
    b1, b2 = g.domain
    a1 = rng.uniform(b1.lo, b1.hi, size=n)
    a2 = rng.uniform(b2.lo, b2.hi, size=n)
    o1 = np.array([type1_opposite(float(v), b1) for v in a1])
    o2 = np.array([type1_opposite(float(v), b2) for v in a2])
    err_opp = np.asarray(g.evaluate(o1, o2), dtype=float)
    c1 = rng.uniform(b1.lo, b1.hi, size=n)
    c2 = rng.uniform(b2.lo, b2.hi, size=n)
    err_rand = np.asarray(g.evaluate(c1, c2), dtype=float)
    return float(stats.ks_2samp(err_opp, err_rand).pvalue)
