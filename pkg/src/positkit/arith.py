"""Posit arithmetic on the unpacked representation.

Every operation returns a *raw* result: the fraction may carry or cancel and
``bm`` records dropped bits.  :func:`positkit.core.encode` normalizes and rounds.
The ``*_bits`` helpers wrap decode -> op -> encode for pattern-level use.
"""
from __future__ import annotations

import enum
from dataclasses import replace

from .core import NAR, ZERO, PositConfig, UnpackedPosit, decode, encode

__all__ = [
    "ArithOp",
    "Ordering",
    "add_sub_select",
    "add",
    "sub",
    "mul",
    "div",
    "sqrt",
    "uint_sqrt",
    "add_bits",
    "sub_bits",
    "mul_bits",
    "div_bits",
    "sqrt_bits",
    "apply_bits",
    "compare",
    "eq",
    "lt",
    "le",
    "neg",
    "abs_",
    "min_",
    "max_",
    "fused_mul_add",
]


class ArithOp(enum.Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    SQRT = "sqrt"

    @property
    def arity(self) -> int:
        return 1 if self is ArithOp.SQRT else 2


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    UNORDERED = 2


def _magnitude_lt(cfg: PositConfig, p1: UnpackedPosit, p2: UnpackedPosit) -> bool:
    """|p1| < |p2|, comparing total exponent first and then the fraction."""
    if p1.sn:
        return not p2.sn
    if p2.sn:
        return False
    t1 = (p1.k << cfg.es) + p1.e
    t2 = (p2.k << cfg.es) + p2.e
    if t1 != t2:
        return t1 < t2
    fs = max(p1.fs, p2.fs)
    return (p1.f << (fs - p1.fs)) < (p2.f << (fs - p2.fs))


def add_sub_select(
    cfg: PositConfig, p1: UnpackedPosit, p2: UnpackedPosit, op: int
) -> tuple[UnpackedPosit, UnpackedPosit, int, int]:
    """Reduce ``p1 op p2`` (op 0 = add, 1 = sub) to a magnitude operation.

    Returns ``(p1', p2', op', sign)`` with ``|p1'| >= |p2'|``; the result is
    ``sign`` applied to ``|p1'| op' |p2'|``.
    """
    if p1.s == p2.s:
        sign = p1.s
    else:
        op = 1 - op
        sign = p1.s
    if _magnitude_lt(cfg, p1, p2):
        p1, p2 = p2, p1
        if op == 1:
            sign = 1 - sign
    return p1, p2, op, sign


def _add_sub(cfg: PositConfig, a: UnpackedPosit, b: UnpackedPosit, op: int) -> UnpackedPosit:
    p1, p2, op, sign = add_sub_select(cfg, a, b, op)
    if p1.is_nar or p2.is_nar:
        return NAR
    if p2.sn:
        # Zero second operand: the result is the first operand, carrying the
        # selector's sign (0 - x must come out as -x).
        if p1.sn:
            return ZERO
        return replace(p1, s=sign)

    es = cfg.es
    fs3 = 2 * cfg.ps - 4
    t = ((p1.k << es) + p1.e) - ((p2.k << es) + p2.e)
    f1 = p1.f << (fs3 - p1.fs)
    f2 = p2.f << (fs3 - p2.fs)
    aligned = f2 >> t
    bm = 1 if f2 & ((1 << t) - 1) else 0
    f3 = f1 + aligned if op == 0 else f1 - aligned
    if f3 == 0:
        return ZERO
    return UnpackedPosit(sn=0, s=sign, k=p1.k, rs=p1.rs, e=p1.e, ers=p1.ers, f=f3, fs=fs3, bm=bm)


def add(cfg: PositConfig, a: UnpackedPosit, b: UnpackedPosit) -> UnpackedPosit:
    return _add_sub(cfg, a, b, 0)


def sub(cfg: PositConfig, a: UnpackedPosit, b: UnpackedPosit) -> UnpackedPosit:
    return _add_sub(cfg, a, b, 1)


def mul(cfg: PositConfig, a: UnpackedPosit, b: UnpackedPosit) -> UnpackedPosit:
    if a.is_nar or b.is_nar:
        return NAR
    if a.sn or b.sn:
        return ZERO
    return UnpackedPosit(
        sn=0,
        s=a.s ^ b.s,
        k=a.k + b.k,
        e=a.e + b.e,
        f=a.f * b.f,
        fs=a.fs + b.fs,
        bm=0,
    )


def div(cfg: PositConfig, a: UnpackedPosit, b: UnpackedPosit) -> UnpackedPosit:
    if a.is_nar or b.is_nar or b.sn:
        return NAR
    if a.sn:
        return ZERO
    k = a.k - b.k
    if b.e > a.e:
        e = a.e + (1 << cfg.es) - b.e
        k -= 1
    else:
        e = a.e - b.e
    ps = cfg.ps
    q, r = divmod(a.f << ps, b.f)
    return UnpackedPosit(
        sn=0,
        s=a.s ^ b.s,
        k=k,
        e=e,
        f=q,
        fs=a.fs + ps - b.fs,
        bm=1 if r else 0,
    )


def uint_sqrt(d: int) -> tuple[int, int]:
    """Non-restoring integer square root, two radicand bits per step.

    Returns ``(q, r)`` with ``d == q*q + r`` and ``0 <= r <= 2*q``.
    """
    if d < 0:
        raise ValueError("radicand must be non-negative")
    size = d.bit_length()
    size += size & 1
    q = 0
    r = 0
    for i in range(size // 2 - 1, -1, -1):
        t_r = (r << 2) | ((d >> (2 * i)) & 3)
        if r >= 0:
            r = t_r - ((q << 2) | 1)
        else:
            r = t_r + ((q << 2) | 3)
        if r >= 0:
            q = (q << 1) | 1
        else:
            q <<= 1
    if r < 0:
        # last bit of q is 0: restore the 4*(q>>1)+1 just subtracted
        r += (q << 1) | 1
    return q, r


def sqrt(cfg: PositConfig, a: UnpackedPosit) -> UnpackedPosit:
    if a.sn:
        return NAR if a.s else ZERO
    if a.s:
        return NAR

    k, e, f, fs = a.k, a.e, a.f, a.fs
    # An odd regime cannot be halved by a shift without losing 2^(es-1) of
    # exponent, so move one regime step into e (e may then exceed 2^es - 1).
    if k & 1:
        k -= 1
        e += 1 << cfg.es
    # Widen the fraction (exactly) so the root keeps ps+4 bits and the
    # parity shifts below only ever drop zero bits.
    shift = max(2 * (cfg.ps + 4) - fs, 2)
    if (fs + shift) & 1:
        shift += 1
    f <<= shift
    fs += shift
    q, r = uint_sqrt(f >> ((e & 1) + (fs & 1)))
    return UnpackedPosit(
        sn=0,
        s=0,
        k=k >> 1,
        e=(e + (e & 1)) >> 1,
        f=q,
        fs=(fs - (fs & 1)) >> 1,
        bm=1 if r else 0,
    )


def add_bits(cfg: PositConfig, a: int, b: int) -> int:
    return encode(cfg, add(cfg, decode(cfg, a), decode(cfg, b)))


def sub_bits(cfg: PositConfig, a: int, b: int) -> int:
    return encode(cfg, sub(cfg, decode(cfg, a), decode(cfg, b)))


def mul_bits(cfg: PositConfig, a: int, b: int) -> int:
    return encode(cfg, mul(cfg, decode(cfg, a), decode(cfg, b)))


def div_bits(cfg: PositConfig, a: int, b: int) -> int:
    return encode(cfg, div(cfg, decode(cfg, a), decode(cfg, b)))


def sqrt_bits(cfg: PositConfig, a: int) -> int:
    return encode(cfg, sqrt(cfg, decode(cfg, a)))


_BINARY = {
    ArithOp.ADD: add_bits,
    ArithOp.SUB: sub_bits,
    ArithOp.MUL: mul_bits,
    ArithOp.DIV: div_bits,
}


def apply_bits(cfg: PositConfig, op: ArithOp, a: int, b: int = 0) -> int:
    if op is ArithOp.SQRT:
        return sqrt_bits(cfg, a)
    return _BINARY[op](cfg, a, b)


def _signed(cfg: PositConfig, bp: int) -> int:
    return bp - (1 << cfg.ps) if bp >> (cfg.ps - 1) else bp


def compare(cfg: PositConfig, a: int, b: int) -> Ordering:
    nar = cfg.nar
    if a == nar or b == nar:
        return Ordering.UNORDERED
    sa, sb = _signed(cfg, a), _signed(cfg, b)
    if sa < sb:
        return Ordering.LESS
    if sa > sb:
        return Ordering.GREATER
    return Ordering.EQUAL


def eq(cfg: PositConfig, a: int, b: int) -> bool:
    return compare(cfg, a, b) is Ordering.EQUAL


def lt(cfg: PositConfig, a: int, b: int) -> bool:
    return compare(cfg, a, b) is Ordering.LESS


def le(cfg: PositConfig, a: int, b: int) -> bool:
    return compare(cfg, a, b) in (Ordering.LESS, Ordering.EQUAL)


def neg(cfg: PositConfig, a: int) -> int:
    return (-a) & cfg.mask


def abs_(cfg: PositConfig, a: int) -> int:
    return neg(cfg, a) if a >> (cfg.ps - 1) else a


def min_(cfg: PositConfig, a: int, b: int) -> int:
    nar = cfg.nar
    if a == nar:
        return b
    if b == nar:
        return a
    return a if _signed(cfg, a) <= _signed(cfg, b) else b


def max_(cfg: PositConfig, a: int, b: int) -> int:
    nar = cfg.nar
    if a == nar:
        return b
    if b == nar:
        return a
    return a if _signed(cfg, a) >= _signed(cfg, b) else b


def fused_mul_add(cfg: PositConfig, a: int, b: int, c: int) -> int:
    """``a*b + c`` with a rounding after the product and after the sum."""
    return add_bits(cfg, mul_bits(cfg, a, b), c)
