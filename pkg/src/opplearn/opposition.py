"""Opposite values of inputs and outputs, plus running-range bookkeeping.

Three oppositeness schemes are supported for a value ``v`` observed inside a
range ``[min_seen, max_seen]`` with running average ``mean_seen``:

* ``T1`` reflection: ``min + max - v``
* ``T2`` modular shift: ``(v + (min + max) / 2) mod max`` (``max > 0``)
* ``T3`` mean reflection: ``2 * mean - v``, falling back to ``T1`` whenever
  the reflected value leaves ``[min, max]``

All operations are pure; ``RunningRange`` values are immutable and updates
return new instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateRangeError, DomainError

__all__ = [
    "Bounds",
    "OppositionScheme",
    "RunningRange",
    "type1_opposite",
    "scheme_opposite",
    "update_range",
]


class OppositionScheme(Enum):
    """How the opposite of an observed value is computed."""

    T1 = "t1"
    T2 = "t2"
    T3 = "t3"

    @classmethod
    def parse(cls, name: str) -> "OppositionScheme":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = "|".join(s.value for s in cls)
            raise DomainError(f"unknown oppositeness scheme {name!r}; expected {valid}") from None


@dataclass(frozen=True)
class Bounds:
    """Closed interval ``[lo, hi]`` with ``lo < hi`` (strict)."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"bounds must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise DomainError(f"bounds need lo < hi, got [{lo}, {hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def clip(self, x):
        return np.clip(x, self.lo, self.hi)


@dataclass(frozen=True)
class RunningRange:
    """Streaming min/max/mean of the values observed so far."""

    min_seen: float
    max_seen: float
    mean_seen: float
    count: int

    @classmethod
    def empty(cls) -> "RunningRange":
        return cls(math.inf, -math.inf, math.nan, 0)

    @classmethod
    def from_values(cls, values) -> "RunningRange":
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            return cls.empty()
        if not np.all(np.isfinite(arr)):
            raise DomainError("cannot build a range from non-finite values")
        return cls(float(arr.min()), float(arr.max()), float(arr.mean()), int(arr.size))

    @property
    def degenerate(self) -> bool:
        return self.count >= 1 and self.min_seen == self.max_seen


def update_range(rng: RunningRange, v: float) -> RunningRange:
    """Return a new range with ``v`` absorbed into min/max/mean/count."""
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"cannot absorb non-finite value {v!r} into a range")
    if rng.count == 0:
        return RunningRange(v, v, v, 1)
    n = rng.count + 1
    return RunningRange(
        min(rng.min_seen, v),
        max(rng.max_seen, v),
        rng.mean_seen + (v - rng.mean_seen) / n,
        n,
    )


def type1_opposite(x: float, b: Bounds) -> float:
    """Reflect ``x`` across the midpoint of ``b``: ``lo + hi - x``.

    ``x`` must lie within ``b``; the result is clipped into ``b`` so that
    boundary points map exactly onto the opposite boundary even when the
    floating-point sum overshoots by an ulp.
    """
    x = float(x)
    if not b.contains(x):
        raise DomainError(f"x={x!r} outside bounds [{b.lo}, {b.hi}]")
    if x == b.lo:
        return b.hi
    if x == b.hi:
        return b.lo
    return float(min(max((b.lo + b.hi) - x, b.lo), b.hi))


def _require_spread(rng: RunningRange, scheme: OppositionScheme) -> None:
    if rng.degenerate:
        raise DegenerateRangeError(
            f"{scheme.name} needs min_seen < max_seen, got both equal to {rng.min_seen}"
        )


def scheme_opposite(v: float, scheme: OppositionScheme, rng: RunningRange) -> float:
    """Opposite of an observed value ``v`` under the given scheme and range."""
    v = float(v)
    if rng.count < 1:
        raise DomainError("range has no observations yet")
    if scheme is OppositionScheme.T1:
        _require_spread(rng, scheme)
        return (rng.min_seen + rng.max_seen) - v
    if scheme is OppositionScheme.T2:
        _require_spread(rng, scheme)
        if rng.max_seen <= 0:
            raise DomainError(
                f"T2 is undefined for max_seen={rng.max_seen} (modulo needs a positive divisor)"
            )
        return (v + (rng.min_seen + rng.max_seen) / 2.0) % rng.max_seen
    reflected = 2.0 * rng.mean_seen - v
    if rng.min_seen <= reflected <= rng.max_seen:
        return reflected
    # fallback keeps the result inside the observed range
    fallback = (rng.min_seen + rng.max_seen) - v
    return float(min(max(fallback, rng.min_seen), rng.max_seen))
