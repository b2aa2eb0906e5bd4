"""Posit formats, the unpacked working representation, and the bit-level codec.

A posit of size ``ps`` with exponent size ``es`` is a ``ps``-bit two's-complement
word laid out as sign, regime run, up to ``es`` exponent bits and whatever is
left as fraction.  Its value is ``(-1)^s * f/2^fs * 2^(k*2^es + e)``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

__all__ = [
    "PositConfig",
    "UnpackedPosit",
    "P8",
    "P16",
    "P32",
    "P64",
    "ZERO",
    "NAR",
    "decode",
    "canonicalize",
    "encode",
    "constants",
    "Constants",
    "to_hex",
    "from_hex",
    "regime_size",
]


@dataclass(frozen=True)
class PositConfig:
    """Format parameters of one posit instantiation."""

    ps: int
    es: int

    def __post_init__(self) -> None:
        if not 3 <= self.ps <= 64:
            raise ValueError(f"posit size must be in [3, 64], got {self.ps}")
        if not 0 <= self.es <= self.ps - 3:
            raise ValueError(
                f"exponent size must be in [0, {self.ps - 3}] for ps={self.ps}, got {self.es}"
            )

    @property
    def mask(self) -> int:
        return (1 << self.ps) - 1

    @property
    def nar(self) -> int:
        return 1 << (self.ps - 1)

    @property
    def hex_digits(self) -> int:
        return (self.ps + 3) // 4

    @property
    def name(self) -> str:
        return f"posit({self.ps},{self.es})"

    def __str__(self) -> str:
        return self.name


P8 = PositConfig(8, 1)
P16 = PositConfig(16, 2)
P32 = PositConfig(32, 3)
P64 = PositConfig(64, 4)


@dataclass(frozen=True, slots=True)
class UnpackedPosit:
    """Internal representation shared by the codec and the arithmetic.

    ``f`` carries the hidden bit, so a canonical value satisfies
    ``2^fs <= f < 2^(fs+1)`` and ``0 <= e < 2^es``.  Arithmetic results may
    violate both bounds until :func:`canonicalize` runs.  ``bm`` is the sticky
    bit: set when a nonzero bit was dropped below the retained fraction.
    """

    sn: int
    s: int
    k: int = 0
    rs: int = 0
    e: int = 0
    ers: int = 0
    f: int = 0
    fs: int = 0
    bm: int = 0

    @property
    def is_zero(self) -> bool:
        return self.sn == 1 and self.s == 0

    @property
    def is_nar(self) -> bool:
        return self.sn == 1 and self.s == 1


ZERO = UnpackedPosit(sn=1, s=0)
NAR = UnpackedPosit(sn=1, s=1)


def regime_size(ps: int, k: int) -> int:
    """Bits taken by the regime run plus its terminator, capped at the word."""
    rs = k + 2 if k >= 0 else -k + 1
    return min(rs, ps - 1)


def decode(cfg: PositConfig, bp: int) -> UnpackedPosit:
    ps, es = cfg.ps, cfg.es
    mask = (1 << ps) - 1
    if not 0 <= bp <= mask:
        raise ValueError(f"pattern {bp:#x} does not fit in {ps} bits")

    body_mask = mask >> 1
    s = (bp >> (ps - 1)) & 1
    if bp & body_mask == 0:
        return NAR if s else ZERO
    if s:
        bp = (-bp) & mask

    body = bp & body_mask
    r_i = (body >> (ps - 2)) & 1
    # Length of the run of r_i bits directly after the sign.
    if r_i:
        rn = (ps - 1) - ((~body) & body_mask).bit_length()
        k = rn - 1
    else:
        rn = (ps - 1) - body.bit_length()
        k = -rn
    rs = rn + 1

    ers = max(0, min(es, ps - rs - 1))
    if ers == 0:
        e = 0
    else:
        e = ((bp >> (ps - rs - ers - 1)) & ((1 << ers) - 1)) << (es - ers)

    frs = max(0, ps - rs - es - 1)
    f = bp & ((1 << frs) - 1) if frs else 0
    fs = frs
    f += 1 << fs
    return UnpackedPosit(sn=0, s=s, k=k, rs=rs, e=e, ers=ers, f=f, fs=fs, bm=0)


def canonicalize(cfg: PositConfig, u: UnpackedPosit) -> UnpackedPosit:
    """Bring a raw arithmetic result back to ``2^fs <= f < 2^(fs+1)``, ``0 <= e < 2^es``.

    ``fs`` is kept fixed.  Carries and cancellations move into the total
    exponent ``k*2^es + e``; bits pushed out by a right shift set ``bm``.
    """
    if u.sn:
        raise ValueError("special values have no fraction to canonicalize")
    if u.f <= 0:
        raise ValueError("zero fraction must be mapped to the special zero first")

    es = cfg.es
    f, fs, bm = u.f, u.fs, u.bm
    total = (u.k << es) + u.e
    shift = f.bit_length() - 1 - fs
    if shift > 0:
        if f & ((1 << shift) - 1):
            bm = 1
        f >>= shift
    elif shift < 0:
        f <<= -shift
    total += shift

    k = total >> es
    e = total & ((1 << es) - 1)
    rs = regime_size(cfg.ps, k)
    ers = max(0, min(es, cfg.ps - rs - 1))
    return UnpackedPosit(sn=0, s=u.s, k=k, rs=rs, e=e, ers=ers, f=f, fs=fs, bm=bm)


def encode(cfg: PositConfig, u: UnpackedPosit) -> int:
    """Pack ``u`` into a pattern, rounding to nearest with ties to even.

    Out-of-range magnitudes saturate to maxpos/minpos; a nonzero value never
    encodes to 0 or NaR.
    """
    ps, es = cfg.ps, cfg.es
    if u.sn:
        return 1 << (ps - 1) if u.s else 0

    width = 2 * ps
    if u.fs < width:
        # Exact widening so that normalization cannot drop a bit the
        # rounding step below still needs.
        u = replace(u, f=u.f << (width - u.fs), fs=width)
    u = canonicalize(cfg, u)
    f, fs, bm = u.f, u.fs, u.bm
    if fs > width:
        drop = fs - width
        if f & ((1 << drop) - 1):
            bm = 1
        f >>= drop
        fs = width
    k, e = u.k, u.e

    if k >= ps - 2:
        bp = (1 << (ps - 1)) - 1
    elif k < -(ps - 2):
        bp = 1
    else:
        if k >= 0:
            rn = k + 1
            regimebits = ((1 << rn) - 1) << 1
        else:
            rn = -k
            regimebits = 1
        rs = rn + 1
        nrs = max(0, ps - rs - 1)
        regimebits <<= nrs

        f <<= width - fs
        othervalue = ((e << width) | (f & ((1 << width) - 1))) << (ps - es)
        top = othervalue >> width
        bp = regimebits | (top >> (ps - nrs))

        guard = (top >> (ps - nrs - 1)) & 1
        if (top & ((1 << (ps - nrs - 1)) - 1)) or (othervalue & ((1 << width) - 1)):
            bm = 1
        add_one = guard & (bm | (bp & 1))
        bp += add_one

    if u.s:
        bp = (-bp) & ((1 << ps) - 1)
    return bp


class Constants(NamedTuple):
    zero: int
    nar: int
    one: int
    min_pos: int
    max_pos: int


def constants(cfg: PositConfig) -> Constants:
    ps = cfg.ps
    return Constants(
        zero=0,
        nar=1 << (ps - 1),
        one=1 << (ps - 2),
        min_pos=1,
        max_pos=(1 << (ps - 1)) - 1,
    )


def to_hex(cfg: PositConfig, bp: int) -> str:
    return f"0x{bp:0{cfg.hex_digits}x}"


def from_hex(cfg: PositConfig, text: str) -> int:
    """Parse a hex pattern; the digit count must match the format width."""
    t = text.strip().lower()
    if t.startswith("0x"):
        t = t[2:]
    if not t or len(t) > cfg.hex_digits:
        raise ValueError(
            f"expected up to {cfg.hex_digits} hex digits for {cfg.name}, got {text!r}"
        )
    try:
        bp = int(t, 16)
    except ValueError:
        raise ValueError(f"malformed hex pattern {text!r}") from None
    if bp >> cfg.ps:
        raise ValueError(f"pattern {text} does not fit in {cfg.ps} bits")
    return bp
