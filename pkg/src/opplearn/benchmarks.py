"""Benchmark functions: nine invertible 1-D test functions and three 2-D optimization surfaces.

The 1-D functions are monotone on their default domains, so each one carries
an analytic inverse and a ground-truth ("true") opposite can be computed for
any input by inverting the opposite of its output. The 2-D surfaces (ackley,
booth, bukin4) are nonnegative with minimum 0 and are used for guess versus
opposite-guess selection experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DomainError, InversionError
from .opposition import Bounds, OppositionScheme, RunningRange, scheme_opposite

__all__ = [
    "TestFunction",
    "OptFunction",
    "TEST_FUNCTION_IDS",
    "OPT_FUNCTION_IDS",
    "get_test_function",
    "get_opt_function",
    "eval_test_function",
    "eval_inverse",
    "TrueOpposite",
    "true_opposite",
    "eval_opt_function",
]


@dataclass(frozen=True)
class TestFunction:
    """Monotone scalar function with an analytic inverse on its domain."""

    id: str
    domain: Bounds
    forward: Callable
    inverse: Callable

    def image(self) -> tuple[float, float]:
        ends = sorted((float(self.forward(self.domain.lo)), float(self.forward(self.domain.hi))))
        return ends[0], ends[1]


@dataclass(frozen=True)
class OptFunction:
    """2-D optimization surface, nonnegative on its domain with minimum 0."""

    id: str
    domain: tuple[Bounds, Bounds]
    evaluate: Callable


def _cbrt(v):
    return np.cbrt(v)


def _f2_forward(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= -3.0):
        raise DomainError("log(x + 3) needs x > -3")
    out = np.log(x + 3.0)
    return float(out) if out.ndim == 0 else out


def _f8_forward(x):
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise DomainError("1/x has a pole at x = 0")
    out = 1.0 / x
    return float(out) if out.ndim == 0 else out


def _scalar_or_array(fn):
    def wrapped(x):
        out = fn(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    return wrapped


def _f7_inverse_factory(domain: Bounds) -> Callable:
    # Cubic inverse of x^3 + x^2 + 1. Near the lower image boundary the
    # radicand turns negative (three real roots); the principal complex
    # cube-root branch keeps the result on the domain branch there, so both
    # branch values are tried and the in-domain root that survives the
    # round-trip check wins.
    def inverse(y: float) -> float:
        y = float(y)
        a = 0.5 * y - 29.0 / 54.0
        disc = a * a - 1.0 / 729.0
        candidates = []
        if disc > 0.0:
            r = float(_cbrt(a + math.sqrt(disc)))
            if r != 0.0:
                candidates.append(r + 1.0 / (9.0 * r) - 1.0 / 3.0)
        z = complex(a, math.sqrt(abs(disc))) ** (1.0 / 3.0)
        candidates.append(2.0 * z.real - 1.0 / 3.0)

        tol = 1e-6 * max(1.0, abs(y))
        slack = 1e-9 * max(1.0, abs(domain.lo), abs(domain.hi))
        valid = [x for x in candidates if abs((x**3 + x**2 + 1.0) - y) < tol]
        for x in valid:
            if domain.lo - slack <= x <= domain.hi + slack:
                return float(min(max(x, domain.lo), domain.hi))
        if valid:
            return float(valid[0])
        raise InversionError(f"no cube-root branch inverts y={y!r} within tolerance")

    return inverse


_TEST_SPECS: dict[str, dict] = {
    "f1": {
        "domain": (0.0, 100.0),
        "forward": lambda x: (2.0 * x + 8.0) ** 3,
        "inverse": lambda y: (_cbrt(y) - 8.0) / 2.0,
    },
    "f2": {
        "domain": (-2.9, 100.0),
        "forward": _f2_forward,
        "inverse": lambda y: np.exp(y) - 3.0,
    },
    "f3": {
        "domain": (0.0, 500.0),
        "forward": lambda x: 2.0 * x,
        "inverse": lambda y: y / 2.0,
    },
    "f4": {
        "domain": (0.0, 100.0),  # nonnegative branch matches the sqrt inverse
        "forward": lambda x: x**2,
        "inverse": lambda y: np.sqrt(y),
    },
    "f5": {
        "domain": (0.0, 1000.0),
        "forward": lambda x: np.sqrt(x),
        "inverse": lambda y: y**2,
    },
    "f6": {
        "domain": (0.0, 100.0),
        "forward": lambda x: x**1.5,
        "inverse": lambda y: y ** (2.0 / 3.0),
    },
    "f7": {
        "domain": (0.0, 10.0),  # monotone increasing for x >= 0
        "forward": lambda x: x**3 + x**2 + 1.0,
        "inverse": None,  # built per-domain, see _f7_inverse_factory
    },
    "f8": {
        "domain": (0.01, 100.0),
        "forward": _f8_forward,
        "inverse": lambda y: 1.0 / y,
    },
    "f9": {
        "domain": (-1.0, 1000.0),
        "forward": lambda x: np.sqrt(x + 1.0) / 3.0,
        "inverse": lambda y: 9.0 * y**2 - 1.0,
    },
}

TEST_FUNCTION_IDS = tuple(sorted(_TEST_SPECS))


def get_test_function(fid: str, domain: Optional[Bounds] = None) -> TestFunction:
    """Look up a 1-D test function, optionally overriding its default domain."""
    if fid not in _TEST_SPECS:
        raise DomainError(
            f"unknown test function {fid!r}; expected one of {', '.join(TEST_FUNCTION_IDS)}"
        )
    spec = _TEST_SPECS[fid]
    dom = domain if domain is not None else Bounds(*spec["domain"])
    forward = spec["forward"] if fid in ("f2", "f8") else _scalar_or_array(spec["forward"])
    if fid == "f7":
        inverse = _f7_inverse_factory(dom)
    else:
        inverse = _scalar_or_array(spec["inverse"])
    return TestFunction(id=fid, domain=dom, forward=forward, inverse=inverse)


def eval_test_function(f: TestFunction, x: float) -> float:
    """Evaluate ``f`` at ``x`` after checking the domain."""
    x = float(x)
    if not f.domain.contains(x):
        raise DomainError(f"x={x!r} outside the domain [{f.domain.lo}, {f.domain.hi}] of {f.id}")
    return float(f.forward(x))


def eval_inverse(f: TestFunction, y: float) -> float:
    """Evaluate the analytic inverse after checking ``y`` against the forward image."""
    y = float(y)
    lo, hi = f.image()
    slack = 1e-9 * max(1.0, abs(lo), abs(hi))
    if y < lo - slack or y > hi + slack:
        raise DomainError(f"y={y!r} outside the forward image [{lo}, {hi}] of {f.id}")
    return float(f.inverse(min(max(y, lo), hi)))


class TrueOpposite(NamedTuple):
    value: float
    clamped: bool


def true_opposite(
    f: TestFunction, x: float, scheme: OppositionScheme, y_range: RunningRange
) -> TrueOpposite:
    """Ground-truth opposite of ``x``: invert the opposite of its output.

    When the opposite output falls outside the forward image it is clamped to
    the nearest image endpoint and the result is flagged so callers can
    exclude it from error statistics.
    """
    y = eval_test_function(f, x)
    opp_y = scheme_opposite(y, scheme, y_range)
    lo, hi = f.image()
    clamped = False
    if opp_y < lo:
        opp_y, clamped = lo, True
    elif opp_y > hi:
        opp_y, clamped = hi, True
    return TrueOpposite(eval_inverse(f, opp_y), clamped)


def _ackley(x1, x2):
    radial = np.exp(-0.2 * np.sqrt(0.5 * (x1**2 + x2**2)))
    cosine = np.exp(0.5 * (np.cos(2.0 * np.pi * x1) + np.cos(2.0 * np.pi * x2)))
    return 20.0 * (1.0 - radial) - cosine + math.e


def _booth(x1, x2):
    return (x1 + 2.0 * x2 - 7.0) ** 2 + (2.0 * x1 + x2 - 5.0) ** 2


def _bukin4(x1, x2):
    # double bars read as absolute value for scalar arguments
    return 100.0 * np.sqrt(np.abs(x2 - 0.01 * x1**2)) + 0.01 * np.abs(x1 + 10.0)


_OPT_SPECS = {
    "ackley": {"domain": ((-35.0, 35.0), (-35.0, 35.0)), "evaluate": _ackley},
    "booth": {"domain": ((-10.0, 10.0), (-10.0, 10.0)), "evaluate": _booth},
    "bukin4": {"domain": ((-15.0, -5.0), (-3.0, 3.0)), "evaluate": _bukin4},
}

OPT_FUNCTION_IDS = tuple(sorted(_OPT_SPECS))


def get_opt_function(fid: str) -> OptFunction:
    """Look up a 2-D optimization function by id."""
    if fid not in _OPT_SPECS:
        raise DomainError(
            f"unknown optimization function {fid!r}; expected one of {', '.join(OPT_FUNCTION_IDS)}"
        )
    spec = _OPT_SPECS[fid]
    return OptFunction(
        id=fid,
        domain=(Bounds(*spec["domain"][0]), Bounds(*spec["domain"][1])),
        evaluate=spec["evaluate"],
    )


def eval_opt_function(g: OptFunction, x1: float, x2: float) -> float:
    """Evaluate ``g`` at ``(x1, x2)`` after checking the domain."""
    x1, x2 = float(x1), float(x2)
    for name, v, b in (("x1", x1, g.domain[0]), ("x2", x2, g.domain[1])):
        if not b.contains(v):
            raise DomainError(f"{name}={v!r} outside [{b.lo}, {b.hi}] for {g.id}")
    return float(g.evaluate(x1, x2))
