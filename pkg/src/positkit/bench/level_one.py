"""Constant-estimation series run on an abstract scalar backend.

Every literal enters through ``backend.const`` or ``backend.from_int`` and
values carried from one iteration to the next pass through
``backend.checkpoint`` at the end of each iteration.
"""
from __future__ import annotations

import time
from typing import Callable

from .backends import Binary64Backend, ScalarBackend, TrackingBackend
from .report import BenchReport, REFERENCES, exact_fraction_digits, render_value

__all__ = [
    "pi_leibniz",
    "pi_nilakantha",
    "euler_e",
    "sin_one",
    "LEVEL_ONE",
    "run_level_one",
    "track_ranges",
]


def pi_leibniz(backend: ScalarBackend, n: int = 2_000_000):
    """4/1 - 4/3 + 4/5 - ... over ``n`` terms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    four = backend.const("4")
    pi = backend.from_int(0)
    for i in range(n):
        term = backend.div(four, backend.from_int(2 * i + 1))
        pi = backend.add(pi, term) if i % 2 == 0 else backend.sub(pi, term)
        (pi,) = backend.checkpoint(pi)
    return pi


def pi_nilakantha(backend: ScalarBackend, n: int = 200):
    """3 + 4/(2*3*4) - 4/(4*5*6) + ... over ``n`` terms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    four = backend.const("4")
    pi = backend.from_int(3)
    for j in range(n):
        m = 2 * j + 2
        prod = backend.mul(backend.mul(backend.from_int(m), backend.from_int(m + 1)), backend.from_int(m + 2))
        term = backend.div(four, prod)
        pi = backend.add(pi, term) if j % 2 == 0 else backend.sub(pi, term)
        (pi,) = backend.checkpoint(pi)
    return pi


def euler_e(backend: ScalarBackend, n: int = 20):
    """e = 2 + 1/2! + 1/3! + ...; ``fact`` is divided by a running ``k``."""
    if n < 3:
        raise ValueError("n must be >= 3")
    one = backend.const("1")
    e = backend.const("2")
    k = backend.const("2")
    fact = backend.const("1")
    for _ in range(2, n):
        fact = backend.div(fact, k)
        k = backend.add(k, one)
        e = backend.add(e, fact)
        fact, k, e = backend.checkpoint(fact, k, e)
    return e


def sin_one(backend: ScalarBackend, n: int = 10, x: str = "1"):
    """Taylor series of sin(x): the x term plus ``n`` further terms.

    The factorial is kept as its own scalar and grown by (2j)(2j+1) per step.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    xv = backend.const(x)
    x2 = backend.mul(xv, xv)
    power = xv
    fact = backend.const("1")
    s = xv
    for j in range(1, n + 1):
        power = backend.mul(power, x2)
        fact = backend.mul(fact, backend.from_int(2 * j))
        fact = backend.mul(fact, backend.from_int(2 * j + 1))
        term = backend.div(power, fact)
        s = backend.sub(s, term) if j % 2 else backend.add(s, term)
        s, fact, power = backend.checkpoint(s, fact, power)
    return s


# name -> (kernel, default iterations, reference key)
LEVEL_ONE: dict[str, tuple[Callable, int, str]] = {
    "pi_leibniz": (pi_leibniz, 2_000_000, "pi"),
    "pi_nilakantha": (pi_nilakantha, 200, "pi"),
    "euler_e": (euler_e, 20, "e"),
    "sin_one": (sin_one, 10, "sin1"),
}


def run_level_one(name: str, backend: ScalarBackend, n: int | None = None, track: bool = False) -> BenchReport:
    """Run one series and score it against the high-precision reference."""
    kernel, default_n, ref_key = LEVEL_ONE[name]
    n = default_n if n is None else n
    runner = TrackingBackend(backend) if track else backend
    t0 = time.perf_counter()
    result = kernel(runner, n)
    elapsed = time.perf_counter() - t0
    value = render_value(backend.to_binary64(result))
    reference = REFERENCES[ref_key]
    return BenchReport(
        benchmark=name,
        backend=backend.name,
        iterations=n,
        value=value,
        reference=reference[:22],
        exact_fraction_digits=exact_fraction_digits(value, reference),
        ranges=runner.stats if track else None,
        wall_time=elapsed,
    )


def track_ranges(name: str, backend: ScalarBackend | None = None, n: int | None = None):
    """Dynamic range of one series; binary64 instrumentation by default."""
    return run_level_one(name, backend or Binary64Backend(), n, track=True).ranges
