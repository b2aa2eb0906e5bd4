"""Pattern-in/pattern-out arithmetic with a compiled fast path.

:func:`get_kernel` returns an object exposing ``add sub mul div sqrt fma apply``
on raw bit patterns.  For ``ps <= 32`` it is the compiled extension when that
imported; otherwise (or with ``POSITKIT_PURE_PYTHON=1``) the pure-Python
implementation built from :mod:`positkit.core` and :mod:`positkit.arith`.
Both produce identical patterns.
"""
from __future__ import annotations

import math
import os
from functools import lru_cache

from . import arith
from .convert import exact_fraction, int_to_posit, posit_to_binary64
from .core import PositConfig, decode, encode

__all__ = ["PyPositKernel", "get_kernel", "compiled_available", "COMPILED_MAX_PS"]

COMPILED_MAX_PS = 32

try:
    if os.environ.get("POSITKIT_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from ._kernel import PositKernel as _CompiledKernel
except ImportError:
    _CompiledKernel = None


def compiled_available() -> bool:
    return _CompiledKernel is not None


class PyPositKernel:
    """Pure-Python kernel for any valid format."""

    compiled = False

    def __init__(self, ps: int, es: int):
        self.cfg = PositConfig(ps, es)
        self.ps = ps
        self.es = es

    def __repr__(self) -> str:
        return f"PyPositKernel({self.ps}, {self.es})"

    def add(self, a: int, b: int) -> int:
        cfg = self.cfg
        return encode(cfg, arith.add(cfg, decode(cfg, a), decode(cfg, b)))

    def sub(self, a: int, b: int) -> int:
        cfg = self.cfg
        return encode(cfg, arith.sub(cfg, decode(cfg, a), decode(cfg, b)))

    def mul(self, a: int, b: int) -> int:
        cfg = self.cfg
        return encode(cfg, arith.mul(cfg, decode(cfg, a), decode(cfg, b)))

    def div(self, a: int, b: int) -> int:
        cfg = self.cfg
        return encode(cfg, arith.div(cfg, decode(cfg, a), decode(cfg, b)))

    def sqrt(self, a: int) -> int:
        cfg = self.cfg
        return encode(cfg, arith.sqrt(cfg, decode(cfg, a)))

    def from_int(self, n: int) -> int:
        return int_to_posit(self.cfg, n)

    def to_double(self, a: int) -> float:
        if self.ps <= 32:
            return posit_to_binary64(self.cfg, a)
        x = exact_fraction(self.cfg, a)
        return math.nan if x is None else float(x)

    def fma(self, a: int, b: int, c: int) -> int:
        return self.add(self.mul(a, b), c)

    def dot(self, a, b, acc: int = 0) -> int:
        if len(a) != len(b):
            raise ValueError("length mismatch")
        for x, y in zip(a, b):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def apply(self, op: str, a: int, b: int = 0) -> int:
        if op == "sqrt":
            return self.sqrt(a)
        return getattr(self, op)(a, b)


@lru_cache(maxsize=None)
def get_kernel(cfg: PositConfig, compiled: bool | None = None):
    """Kernel for ``cfg``.  ``compiled=False`` forces the Python path;
    ``compiled=True`` raises if the extension cannot serve ``cfg``."""
    usable = _CompiledKernel is not None and cfg.ps <= COMPILED_MAX_PS
    if compiled is True and not usable:
        raise RuntimeError(f"compiled kernel unavailable for {cfg.name}")
    if usable and compiled is not False:
        return _CompiledKernel(cfg.ps, cfg.es)
    return PyPositKernel(cfg.ps, cfg.es)
