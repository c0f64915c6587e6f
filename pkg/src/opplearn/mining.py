"""Opposition mining: pair every sample with its nearest-output quasi-opposite.

Given samples ``<x_1..x_n, y>``, the miner computes the opposite of each
output under a chosen scheme and records the input vector of the sample whose
output lies closest to that target. The resulting pairs are the training rows
for the fuzzy opposite approximator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateRangeError, DomainError, InsufficientDataError
from .opposition import Bounds, OppositionScheme, RunningRange, scheme_opposite

__all__ = ["SampleSet", "MinedPair", "mine_opposites", "mining_dataset"]


@dataclass(frozen=True)
class SampleSet:
    """Observed points with per-dimension input bounds and the output range."""

    inputs: np.ndarray  # (n_rows, n_dims)
    outputs: np.ndarray  # (n_rows,)
    input_bounds: tuple[Bounds, ...]
    output_range: RunningRange

    @classmethod
    def from_arrays(cls, inputs, outputs, input_bounds: Sequence[Bounds]) -> "SampleSet":
        inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
        outputs = np.asarray(outputs, dtype=float).ravel()
        bounds = tuple(input_bounds)
        if inputs.shape[0] != outputs.shape[0]:
            raise DomainError(
                f"{inputs.shape[0]} input rows but {outputs.shape[0]} outputs"
            )
        if inputs.shape[0] < 1 or inputs.shape[1] < 1:
            raise InsufficientDataError("sample set needs at least one row and one dimension")
        if inputs.shape[1] != len(bounds):
            raise DomainError(
                f"{inputs.shape[1]}-dimensional inputs but {len(bounds)} bounds given"
            )
        if not np.all(np.isfinite(inputs)) or not np.all(np.isfinite(outputs)):
            raise DomainError("sample values must be finite")
        for d, b in enumerate(bounds):
            col = inputs[:, d]
            if col.min() < b.lo or col.max() > b.hi:
                bad = int(np.argmax((col < b.lo) | (col > b.hi)))
                raise DomainError(
                    f"input {col[bad]!r} in row {bad} outside bounds [{b.lo}, {b.hi}] "
                    f"for dimension {d}"
                )
        return cls(inputs, outputs, bounds, RunningRange.from_values(outputs))

    @property
    def n_rows(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_dims(self) -> int:
        return self.inputs.shape[1]


@dataclass(frozen=True)
class MinedPair:
    """One training row: a sample, its opposite-output target, and the matched input."""

    inputs: np.ndarray
    output: float
    opposite_inputs: np.ndarray
    opposite_output_target: float
    match_error: float


def mine_opposites(samples: SampleSet, scheme: OppositionScheme) -> list[MinedPair]:
    """Mine a quasi-opposite for every sample row.

    For row ``i`` the target is ``scheme_opposite(y_i)`` over the sample set's
    output range; the matched row ``j`` minimizes ``|target - y_j|`` over all
    rows (including ``j == i``), ties broken by smallest index. Returns one
    pair per row, in row order.
    """
    if samples.n_rows < 2:
        raise InsufficientDataError(
            f"opposition mining needs at least 2 rows, got {samples.n_rows}"
        )
    if scheme in (OppositionScheme.T1, OppositionScheme.T2) and samples.output_range.degenerate:
        raise DegenerateRangeError(
            f"all outputs equal {samples.output_range.min_seen}; "
            f"{scheme.name} cannot form opposites on a degenerate range"
        )
    outputs = samples.outputs
    pairs = []
    for i in range(samples.n_rows):
        target = scheme_opposite(float(outputs[i]), scheme, samples.output_range)
        diffs = np.abs(target - outputs)
        j = int(np.argmin(diffs))  # argmin keeps the first minimum: smallest index wins ties
        pairs.append(
            MinedPair(
                inputs=samples.inputs[i].copy(),
                output=float(outputs[i]),
                opposite_inputs=samples.inputs[j].copy(),
                opposite_output_target=float(target),
                match_error=float(diffs[j]),
            )
        )
    return pairs


def mining_dataset(pairs: Sequence[MinedPair]) -> tuple[np.ndarray, np.ndarray]:
    """Lay mined pairs out as training matrices.

    Row ``i`` of the returned inputs is ``<x_1..x_n, y>`` of pair ``i``; row
    ``i`` of the targets is the mined opposite input vector.
    """
    if len(pairs) == 0:
        raise InsufficientDataError("cannot build a training set from zero mined pairs")
    n_dims = pairs[0].inputs.shape[0]
    for k, p in enumerate(pairs):
        if p.inputs.shape[0] != n_dims or p.opposite_inputs.shape[0] != n_dims:
            raise DomainError(f"pair {k} has inconsistent dimensionality")
    inputs = np.column_stack(
        [np.vstack([p.inputs for p in pairs]), np.array([p.output for p in pairs])]
    )
    targets = np.vstack([p.opposite_inputs for p in pairs])
    return inputs, targets
