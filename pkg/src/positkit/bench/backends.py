"""Scalar arithmetic backends shared by every benchmark kernel.

Kernels only see opaque handles and the methods below, so the same kernel
code runs unchanged on IEEE binary32/binary64 and on any posit format.
Constants enter through :meth:`ScalarBackend.const` (decimal text) or
:meth:`ScalarBackend.from_int`; kernels never mix in host floats.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from ..convert import binary64_to_posit, parse_decimal, resize_posit
from ..core import P8, P16, P32, PositConfig
from ..kernel import get_kernel

__all__ = [
    "ScalarBackend",
    "Binary32Backend",
    "Binary64Backend",
    "PositBackend",
    "ConvertingPositBackend",
    "HybridBackend",
    "RangeStats",
    "TrackingBackend",
    "TracingBackend",
    "make_backend",
    "BACKEND_NAMES",
]

Scalar = Any


def binary32_from_text(text: str) -> np.float32:
    """Nearest binary32 to a decimal string, ties to even.

    Going through binary64 first can round twice, so the two binary32
    neighbours of that guess are compared against the exact value.
    """
    t = text.strip()
    try:
        exact = Fraction(t)
    except ValueError:
        return np.float32(float(t))  # nan / inf spellings
    with np.errstate(over="ignore"):
        guess = np.float32(float(exact))
    if not np.isfinite(guess) or exact == 0:
        return guess
    best = guess
    best_err = abs(Fraction(float(guess)) - exact)
    for cand in (np.nextafter(guess, np.float32(-np.inf)), np.nextafter(guess, np.float32(np.inf))):
        if not np.isfinite(cand):
            continue
        err = abs(Fraction(float(cand)) - exact)
        if err < best_err or (err == best_err and int(cand.view(np.uint32)) % 2 == 0):
            best, best_err = cand, err
    return np.float32(best)


class ScalarBackend:
    """Abstract scalar arithmetic.  Subclasses fill in the primitive ops."""

    name = "abstract"

    def const(self, text: str) -> Scalar:
        raise NotImplementedError

    def from_int(self, n: int) -> Scalar:
        raise NotImplementedError

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def sqrt(self, a: Scalar) -> Scalar:
        raise NotImplementedError

    def compare(self, a: Scalar, b: Scalar) -> int | None:
        """-1, 0 or 1; ``None`` when unordered (NaN / NaR)."""
        raise NotImplementedError

    def to_binary64(self, a: Scalar) -> float:
        raise NotImplementedError

    def checkpoint(self, *values: Scalar) -> tuple[Scalar, ...]:
        """Loop-iteration boundary for loop-carried values.  Identity unless the
        backend models values living in a different format between iterations."""
        return values

    def store(self, a: Scalar) -> Scalar:
        """Value written to memory (datasets, parameters).  Identity by default."""
        return a

    # Derived helpers; written in terms of the primitives above.
    def lt(self, a: Scalar, b: Scalar) -> bool:
        return self.compare(a, b) == -1

    def le(self, a: Scalar, b: Scalar) -> bool:
        return self.compare(a, b) in (-1, 0)

    def eq(self, a: Scalar, b: Scalar) -> bool:
        return self.compare(a, b) == 0

    def neg(self, a: Scalar) -> Scalar:
        return self.sub(self.from_int(0), a)

    def dot(self, xs, ys, acc: Scalar | None = None) -> Scalar:
        """``acc + xs[0]*ys[0] + xs[1]*ys[1] + ...`` left to right, each
        product and sum rounded."""
        if acc is None:
            acc = self.from_int(0)
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class Binary32Backend(ScalarBackend):
    """IEEE 754 binary32 with round-to-nearest-even (numpy float32 scalars)."""

    name = "f32"

    def const(self, text: str) -> Scalar:
        return binary32_from_text(text)

    def from_int(self, n: int) -> Scalar:
        return np.float32(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return a / b

    def sqrt(self, a):
        with np.errstate(invalid="ignore"):
            return np.sqrt(a)

    def compare(self, a, b):
        if a != a or b != b:
            return None
        return -1 if a < b else (1 if a > b else 0)

    def to_binary64(self, a) -> float:
        return float(a)


class Binary64Backend(ScalarBackend):
    """IEEE 754 binary64 (Python floats); the exact-enough range reference."""

    name = "f64"

    def const(self, text: str) -> Scalar:
        return float(text)

    def from_int(self, n: int) -> Scalar:
        return float(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0.0:
            return math.nan if a == 0.0 or a != a else math.copysign(math.inf, a) * math.copysign(1.0, b)
        return a / b

    def sqrt(self, a):
        return math.sqrt(a) if a >= 0 else math.nan

    def compare(self, a, b):
        if a != a or b != b:
            return None
        return -1 if a < b else (1 if a > b else 0)

    def to_binary64(self, a) -> float:
        return a


class PositBackend(ScalarBackend):
    """Posit arithmetic on raw bit patterns for one format."""

    def __init__(self, cfg: PositConfig, name: str | None = None) -> None:
        self.cfg = cfg
        self.name = name or f"p{cfg.ps}"
        kern = get_kernel(cfg)
        self.kernel = kern
        self.add = kern.add
        self.sub = kern.sub
        self.mul = kern.mul
        self.div = kern.div
        self.sqrt = kern.sqrt
        self.from_int = kern.from_int
        self.to_binary64 = kern.to_double
        self._nar = cfg.nar
        self._sign = 1 << (cfg.ps - 1)
        self._wrap = 1 << cfg.ps

    def const(self, text: str) -> Scalar:
        return parse_decimal(self.cfg, text)

    def dot(self, xs, ys, acc: Scalar | None = None) -> Scalar:
        if len(xs) != len(ys):
            raise ValueError("length mismatch")
        return self.kernel.dot(xs, ys, 0 if acc is None else acc)

    def compare(self, a, b):
        if a == self._nar or b == self._nar:
            return None
        sa = a - self._wrap if a & self._sign else a
        sb = b - self._wrap if b & self._sign else b
        return -1 if sa < sb else (1 if sa > sb else 0)


class ConvertingPositBackend(PositBackend):
    """Posit arithmetic whose loop-carried values live in binary32 memory.

    At every iteration boundary each carried value is converted posit ->
    binary32 (nearest even) and back, as a core with posit registers and
    IEEE memory would do on every store/load.
    """

    def __init__(self, cfg: PositConfig, name: str | None = None) -> None:
        super().__init__(cfg, name or f"p{cfg.ps}-converting")

    def _roundtrip(self, a: Scalar) -> Scalar:
        x = self.to_binary64(a)
        with np.errstate(over="ignore"):
            x32 = float(np.float32(x))
        return binary64_to_posit(self.cfg, x32)

    def checkpoint(self, *values: Scalar) -> tuple[Scalar, ...]:
        return tuple(self._roundtrip(v) for v in values)

    def const(self, text: str) -> Scalar:
        return self._roundtrip(super().const(text))

    def from_int(self, n: int) -> Scalar:
        return self._roundtrip(self.kernel.from_int(n))


class HybridBackend(PositBackend):
    """Narrow posit storage, wide posit compute.

    Constants and stored data are rounded to ``store_cfg`` (the memory
    format) and widened exactly into ``compute_cfg``; arithmetic runs in
    ``compute_cfg``.  Integer conversions happen in registers, so
    ``from_int`` rounds straight to ``compute_cfg``.
    """

    def __init__(self, store_cfg: PositConfig, compute_cfg: PositConfig, name: str | None = None):
        super().__init__(compute_cfg, name or f"p{store_cfg.ps}/p{compute_cfg.ps}-hybrid")
        self.store_cfg = store_cfg

    def store(self, a: Scalar) -> Scalar:
        narrow = resize_posit(self.cfg, self.store_cfg, a)
        return resize_posit(self.store_cfg, self.cfg, narrow)

    def const(self, text: str) -> Scalar:
        return resize_posit(self.store_cfg, self.cfg, parse_decimal(self.store_cfg, text))



@dataclass
class RangeStats:
    """Smallest |x| seen in (0, 1] and largest |x| seen in [1, inf)."""

    min_01: float | None = None
    max_1inf: float | None = None

    def observe(self, x: float) -> None:
        x = abs(x)
        if x == 0.0 or x != x or x == math.inf:
            return
        if x <= 1.0:
            if self.min_01 is None or x < self.min_01:
                self.min_01 = x
        if x >= 1.0:
            if self.max_1inf is None or x > self.max_1inf:
                self.max_1inf = x

    def to_dict(self) -> dict:
        return {"min_01": self.min_01, "max_1inf": self.max_1inf}


class _Wrapper(ScalarBackend):
    def __init__(self, inner: ScalarBackend) -> None:
        self.inner = inner
        self.name = inner.name

    def checkpoint(self, *values):
        return self.inner.checkpoint(*values)

    def store(self, a):
        return self.inner.store(a)

    def to_binary64(self, a) -> float:
        return self.inner.to_binary64(a)


class TrackingBackend(_Wrapper):
    """Records every operand and result of every scalar op in a RangeStats."""

    def __init__(self, inner: ScalarBackend) -> None:
        super().__init__(inner)
        self.stats = RangeStats()
        self._seen = self.stats.observe
        self._val = inner.to_binary64

    def _r(self, *xs):
        for x in xs:
            self._seen(self._val(x))

    def const(self, text):
        r = self.inner.const(text)
        self._r(r)
        return r

    def from_int(self, n):
        r = self.inner.from_int(n)
        self._r(r)
        return r

    def add(self, a, b):
        r = self.inner.add(a, b)
        self._r(a, b, r)
        return r

    def sub(self, a, b):
        r = self.inner.sub(a, b)
        self._r(a, b, r)
        return r

    def mul(self, a, b):
        r = self.inner.mul(a, b)
        self._r(a, b, r)
        return r

    def div(self, a, b):
        r = self.inner.div(a, b)
        self._r(a, b, r)
        return r

    def sqrt(self, a):
        r = self.inner.sqrt(a)
        self._r(a, r)
        return r

    def compare(self, a, b):
        self._r(a, b)
        return self.inner.compare(a, b)


class TracingBackend(_Wrapper):
    """Logs the sequence of abstract op names (for op-sequence comparisons)."""

    def __init__(self, inner: ScalarBackend) -> None:
        super().__init__(inner)
        self.trace: list[str] = []

    def _log(self, name: str, fn: Callable, *args):
        self.trace.append(name)
        return fn(*args)

    def const(self, text):
        return self._log("const", self.inner.const, text)

    def from_int(self, n):
        return self._log("from_int", self.inner.from_int, n)

    def add(self, a, b):
        return self._log("add", self.inner.add, a, b)

    def sub(self, a, b):
        return self._log("sub", self.inner.sub, a, b)

    def mul(self, a, b):
        return self._log("mul", self.inner.mul, a, b)

    def div(self, a, b):
        return self._log("div", self.inner.div, a, b)

    def sqrt(self, a):
        return self._log("sqrt", self.inner.sqrt, a)

    def compare(self, a, b):
        return self._log("compare", self.inner.compare, a, b)


_NAMED = {"p8": P8, "p16": P16, "p32": P32}

BACKEND_NAMES = (
    "f32",
    "f64",
    "p8",
    "p16",
    "p32",
    "p8-converting",
    "p16-converting",
    "p32-converting",
    "p8/p16-hybrid",
    "p8/p32-hybrid",
    "p16/p32-hybrid",
)


def make_backend(name: str) -> ScalarBackend:
    """Build a backend from its short name (see ``BACKEND_NAMES``)."""
    key = name.strip().lower()
    if key == "f32":
        return Binary32Backend()
    if key == "f64":
        return Binary64Backend()
    if key in _NAMED:
        return PositBackend(_NAMED[key])
    if key.endswith("-converting") and key[: -len("-converting")] in _NAMED:
        return ConvertingPositBackend(_NAMED[key[: -len("-converting")]])
    if key.endswith("-hybrid"):
        store, _, compute = key[: -len("-hybrid")].partition("/")
        if store in _NAMED and compute in _NAMED:
            return HybridBackend(_NAMED[store], _NAMED[compute])
    raise ValueError(f"unknown backend {name!r}; choose from {', '.join(BACKEND_NAMES)}")
