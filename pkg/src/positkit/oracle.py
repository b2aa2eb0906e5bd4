"""Exact rational reference for posit values and correctly rounded arithmetic.

Nothing here touches the codec or the arithmetic module: values are read by
scanning the bit string, and rounding searches the ordered pattern space.
Rounding boundaries between neighbouring posits ``lo`` and ``lo+1`` are the
value of the pattern ``2*lo + 1`` in the one-bit-wider format with the same
``es``.  Where the exponent field is complete that is the arithmetic midpoint;
where the regime has pushed exponent bits out it is the midpoint of the
untruncated bit string, which is what round-to-nearest-even on the encoding
means for posits.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Union

from .arith import ArithOp
from .core import PositConfig

__all__ = [
    "NaRType",
    "NaR",
    "ExactNumber",
    "Mismatch",
    "MismatchReport",
    "exact_value",
    "round_to_posit",
    "round_sqrt_to_posit",
    "ref_op",
    "exhaustive_check",
    "sampled_check",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20200901


class NaRType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NaR"


NaR = NaRType()
ExactNumber = Union[Fraction, NaRType]


def _scan(ps: int, es: int, bits: int) -> tuple[int, int, int] | None:
    """Read a nonzero, non-NaR pattern as ``(sign, significand, exp2)``.

    Value is ``(-1)^sign * significand * 2^exp2``.  Works on the binary string,
    one field at a time.
    """
    text = format(bits, f"0{ps}b")
    sign = 0
    if text[0] == "1":
        sign = 1
        text = format((1 << ps) - bits, f"0{ps}b")
    rest = text[1:]
    lead = rest[0]
    run = len(rest) - len(rest.lstrip(lead))
    regime = run - 1 if lead == "1" else -run
    rest = rest[run + 1 :]
    exp_bits = rest[:es].ljust(es, "0")
    frac_bits = rest[es:]
    exponent = int(exp_bits, 2) if es else 0
    significand = int("1" + frac_bits, 2)
    exp2 = regime * (1 << es) + exponent - len(frac_bits)
    return sign, significand, exp2


def exact_value(cfg: PositConfig, bits: int) -> ExactNumber:
    ps = cfg.ps
    bits &= (1 << ps) - 1
    if bits == 0:
        return Fraction(0)
    if bits == 1 << (ps - 1):
        return NaR
    sign, sig, exp2 = _scan(ps, cfg.es, bits)
    value = Fraction(sig << exp2) if exp2 >= 0 else Fraction(sig, 1 << -exp2)
    return -value if sign else value


Dyadic = tuple[int, int]  # (significand, exp2) of a positive value


def _dyadic(ps: int, es: int, bits: int) -> Dyadic:
    _, sig, exp2 = _scan(ps, es, bits)
    return sig, exp2


@lru_cache(maxsize=8)
def _table(ps: int, es: int) -> tuple[list[Dyadic], list[Dyadic]]:
    """Positive values and rounding boundaries for small formats."""
    top = (1 << (ps - 1)) - 1
    values = [_dyadic(ps, es, p) for p in range(1, top + 1)]
    bounds = [_dyadic(ps + 1, es, 2 * p + 1) for p in range(1, top)]
    return values, bounds


_TABLE_LIMIT = 16


def _round_positive(cfg: PositConfig, cmp: Callable[[Dyadic], int]) -> int:
    """Round a positive target to a positive pattern.

    ``cmp(v)`` returns the sign of ``v - target`` for a positive dyadic
    ``v = sig * 2**exp2`` given as ``(sig, exp2)``.
    """
    ps, es = cfg.ps, cfg.es
    top = (1 << (ps - 1)) - 1
    if ps <= _TABLE_LIMIT:
        values, bounds = _table(ps, es)
        value_of = lambda p: values[p - 1]
        bound_of = lambda p: bounds[p - 1]
    else:
        value_of = lambda p: _dyadic(ps, es, p)
        bound_of = lambda p: _dyadic(ps + 1, es, 2 * p + 1)

    # Largest pattern whose value does not exceed the target.
    lo, hi = 0, top
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cmp(value_of(mid)) <= 0:
            lo = mid
        else:
            hi = mid - 1
    if lo == 0:
        return 1
    if lo == top or cmp(value_of(lo)) == 0:
        return lo
    c = cmp(bound_of(lo))
    if c > 0:
        return lo
    if c < 0:
        return lo + 1
    return lo if lo % 2 == 0 else lo + 1


def _negate(cfg: PositConfig, bits: int) -> int:
    return (-bits) & cfg.mask


def _cmp_scaled(lhs: int, exp2: int, rhs: int) -> int:
    """Sign of ``lhs * 2**exp2 - rhs`` for nonnegative integers."""
    if exp2 >= 0:
        lhs <<= exp2
    else:
        rhs <<= -exp2
    return (lhs > rhs) - (lhs < rhs)


def round_to_posit(cfg: PositConfig, x: ExactNumber) -> int:
    if x is NaR:
        return cfg.nar
    x = Fraction(x)
    if x == 0:
        return 0
    num, den = abs(x.numerator), x.denominator
    bits = _round_positive(cfg, lambda v: _cmp_scaled(v[0] * den, v[1], num))
    return _negate(cfg, bits) if x < 0 else bits


def round_sqrt_to_posit(cfg: PositConfig, x: ExactNumber) -> int:
    """Correctly rounded square root, decided by comparing squares exactly."""
    if x is NaR or x < 0:
        return cfg.nar
    if x == 0:
        return 0

    num, den = x.numerator, x.denominator

    def cmp(v: Dyadic) -> int:
        return _cmp_scaled(v[0] * v[0] * den, 2 * v[1], num)

    return _round_positive(cfg, cmp)


def ref_op(cfg: PositConfig, op: ArithOp, a: int, b: int = 0) -> int:
    va = exact_value(cfg, a)
    if op is ArithOp.SQRT:
        return round_sqrt_to_posit(cfg, va)
    vb = exact_value(cfg, b)
    if va is NaR or vb is NaR:
        return cfg.nar
    if op is ArithOp.ADD:
        return round_to_posit(cfg, va + vb)
    if op is ArithOp.SUB:
        return round_to_posit(cfg, va - vb)
    if op is ArithOp.MUL:
        return round_to_posit(cfg, va * vb)
    if op is ArithOp.DIV:
        if vb == 0:
            return cfg.nar
        return round_to_posit(cfg, va / vb)
    raise ValueError(f"unsupported op {op}")


@dataclass(frozen=True, order=True)
class Mismatch:
    a: int
    b: int
    got: int
    want: int


@dataclass
class MismatchReport:
    cfg: PositConfig
    op: ArithOp
    checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def merge(self, other: "MismatchReport") -> "MismatchReport":
        merged = MismatchReport(self.cfg, self.op, self.checked + other.checked)
        merged.mismatches = sorted(self.mismatches + other.mismatches)
        return merged

    def lines(self) -> Iterator[str]:
        """``op cfg a b got want`` per mismatch, patterns in hex."""
        w = self.cfg.hex_digits
        name = f"p{self.cfg.ps}e{self.cfg.es}"
        for m in sorted(self.mismatches):
            yield (
                f"{self.op.value} {name} 0x{m.a:0{w}x} 0x{m.b:0{w}x} "
                f"0x{m.got:0{w}x} 0x{m.want:0{w}x}"
            )

    def to_text(self) -> str:
        return "".join(line + "\n" for line in self.lines())


Implementation = Callable[[PositConfig, ArithOp, int, int], int]


def _default_impl() -> Implementation:
    from .kernel import get_kernel

    def run(cfg: PositConfig, op: ArithOp, a: int, b: int) -> int:
        return get_kernel(cfg).apply(op.value, a, b)

    return run


def _check_pairs(
    cfg: PositConfig, op: ArithOp, pairs: Iterable[tuple[int, int]], impl: Implementation | None
) -> MismatchReport:
    impl = impl or _default_impl()
    report = MismatchReport(cfg, op)
    n = 0
    for a, b in pairs:
        got = impl(cfg, op, a, b)
        want = ref_op(cfg, op, a, b)
        if got != want:
            report.mismatches.append(Mismatch(a, b, got, want))
        n += 1
    report.checked = n
    report.mismatches.sort()
    return report


def exhaustive_check(
    cfg: PositConfig, op: ArithOp, impl: Implementation | None = None
) -> MismatchReport:
    """Compare the implementation with :func:`ref_op` on every operand."""
    if cfg.ps > 16:
        raise ValueError(f"exhaustive mode needs ps <= 16, got {cfg.ps}; use sampled_check")
    n = 1 << cfg.ps
    if op.arity == 1:
        pairs = ((a, 0) for a in range(n))
    else:
        pairs = ((a, b) for a in range(n) for b in range(n))
    return _check_pairs(cfg, op, pairs, impl)


def sampled_check(
    cfg: PositConfig,
    op: ArithOp,
    samples: int,
    seed: int = DEFAULT_SEED,
    impl: Implementation | None = None,
) -> MismatchReport:
    """Compare on ``samples`` uniformly drawn operands from a seeded generator."""
    rng = random.Random(f"{seed}:{cfg.ps}:{cfg.es}:{op.value}")
    n = cfg.ps

    def pairs():
        for _ in range(samples):
            a = rng.getrandbits(n)
            b = rng.getrandbits(n) if op.arity == 2 else 0
            yield a, b

    return _check_pairs(cfg, op, pairs(), impl)
