"""Conversions between posits, IEEE 754 binary32/binary64, integers and text."""
from __future__ import annotations

import math
import struct
from decimal import Decimal
from fractions import Fraction

import numpy as np

from .core import PositConfig, UnpackedPosit, decode, encode

__all__ = [
    "posit_to_binary64",
    "posit_to_binary32",
    "binary64_to_posit",
    "binary32_to_posit",
    "binary32_bits_to_posit",
    "posit_to_binary32_bits",
    "resize_posit",
    "int_to_posit",
    "posit_to_int",
    "parse_decimal",
    "format_decimal",
    "exact_fraction",
    "EXACT_BINARY64_MAX_PS",
]

# Every posit up to 32 bits fits binary64 exactly: at most 29 significant bits
# and |exponent| <= 4*30 * 2 = 240 for es <= 3.
EXACT_BINARY64_MAX_PS = 32


def _from_exponent(sign: int, f: int, fs: int, total: int, es: int, bm: int = 0) -> UnpackedPosit:
    return UnpackedPosit(
        sn=0, s=sign, k=total >> es, e=total & ((1 << es) - 1), f=f, fs=fs, bm=bm
    )


def _total_exponent(cfg: PositConfig, u: UnpackedPosit) -> int:
    return (u.k << cfg.es) + u.e


def exact_fraction(cfg: PositConfig, bp: int) -> Fraction | None:
    """Exact value of a pattern as a Fraction, ``None`` for NaR."""
    u = decode(cfg, bp)
    if u.sn:
        return None if u.s else Fraction(0)
    shift = _total_exponent(cfg, u) - u.fs
    mag = Fraction(u.f << shift) if shift >= 0 else Fraction(u.f, 1 << -shift)
    return -mag if u.s else mag


def posit_to_binary64(cfg: PositConfig, bp: int) -> float:
    if cfg.ps > EXACT_BINARY64_MAX_PS:
        raise ValueError(f"{cfg.name} values are not all exact in binary64")
    u = decode(cfg, bp)
    if u.sn:
        return math.nan if u.s else 0.0
    mag = math.ldexp(u.f, _total_exponent(cfg, u) - u.fs)
    return -mag if u.s else mag


def posit_to_binary32(cfg: PositConfig, bp: int) -> float:
    """Nearest binary32 (ties to even), returned as a Python float."""
    with np.errstate(over="ignore"):
        return float(np.float32(posit_to_binary64(cfg, bp)))


def posit_to_binary32_bits(cfg: PositConfig, bp: int) -> int:
    return struct.unpack("<I", struct.pack("<f", posit_to_binary32(cfg, bp)))[0]


def binary64_to_posit(cfg: PositConfig, x: float) -> int:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return cfg.nar
    if x == 0.0:
        return 0
    m, ex = math.frexp(abs(x))
    sig = int(math.ldexp(m, 53))
    return encode(cfg, _from_exponent(1 if x < 0 else 0, sig, 52, ex - 1, cfg.es))


def binary32_to_posit(cfg: PositConfig, x: float) -> int:
    """Convert a binary32 value; a Python float is first rounded to binary32."""
    with np.errstate(over="ignore"):
        return binary64_to_posit(cfg, float(np.float32(x)))


def binary32_bits_to_posit(cfg: PositConfig, bits: int) -> int:
    (x,) = struct.unpack("<f", struct.pack("<I", bits & 0xFFFFFFFF))
    return binary64_to_posit(cfg, x)


def resize_posit(src: PositConfig, dst: PositConfig, bp: int) -> int:
    u = decode(src, bp)
    if u.sn:
        return encode(dst, u)
    total = _total_exponent(src, u)
    return encode(dst, _from_exponent(u.s, u.f, u.fs, total, dst.es))


def int_to_posit(cfg: PositConfig, n: int) -> int:
    if n == 0:
        return 0
    mag = abs(n)
    fs = mag.bit_length() - 1
    return encode(cfg, _from_exponent(1 if n < 0 else 0, mag, fs, fs, cfg.es))


def posit_to_int(cfg: PositConfig, bp: int) -> int:
    """Nearest integer, ties to even.  NaR has no integer value."""
    u = decode(cfg, bp)
    if u.sn:
        if u.s:
            raise ValueError("NaR has no integer value")
        return 0
    shift = _total_exponent(cfg, u) - u.fs
    if shift >= 0:
        mag = u.f << shift
    else:
        mag, rem = divmod(u.f, 1 << -shift)
        half = 1 << (-shift - 1)
        if rem > half or (rem == half and mag & 1):
            mag += 1
    return -mag if u.s else mag


_NAR_WORDS = {"nar", "nan", "+nan", "-nan", "inf", "+inf", "-inf", "infinity", "+infinity", "-infinity"}


def _rational_to_posit(cfg: PositConfig, x: Fraction) -> int:
    if x == 0:
        return 0
    sign = 1 if x < 0 else 0
    num, den = abs(x.numerator), x.denominator
    # Keep at least 2*ps+2 quotient bits; the remainder becomes the sticky bit.
    shift = max(0, 2 * cfg.ps + 3 - (num.bit_length() - den.bit_length()))
    q, r = divmod(num << shift, den)
    fs = q.bit_length() - 1
    return encode(cfg, _from_exponent(sign, q, fs, fs - shift, cfg.es, 1 if r else 0))


def parse_decimal(cfg: PositConfig, text: str) -> int:
    """Round decimal or scientific notation to the nearest posit."""
    t = text.strip()
    if t.lower() in _NAR_WORDS:
        return cfg.nar
    try:
        x = Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed decimal {text!r}") from None
    return _rational_to_posit(cfg, x)


def default_digits(cfg: PositConfig) -> int:
    return max(17, math.ceil((cfg.ps - 2) * math.log10(2)) + 2)


def _exact_decimal(cfg: PositConfig, bp: int) -> Decimal | None:
    u = decode(cfg, bp)
    if u.sn:
        return None if u.s else Decimal(0)
    shift = _total_exponent(cfg, u) - u.fs
    if shift >= 0:
        mag = Decimal(u.f << shift)
    else:
        mag = Decimal(f"{u.f * 5 ** (-shift)}E{shift}")
    return -mag if u.s else mag


def format_decimal(cfg: PositConfig, bp: int, digits: int | None = None) -> str:
    """Render with ``digits`` significant digits (round half even)."""
    d = _exact_decimal(cfg, bp)
    if d is None:
        return "NaR"
    if d == 0:
        return "0"
    digits = digits or default_digits(cfg)
    return _trim(format(d, f".{digits}g"))


def exact_decimal_string(cfg: PositConfig, bp: int) -> str:
    """Full decimal expansion (posit values are dyadic, so it terminates)."""
    d = _exact_decimal(cfg, bp)
    if d is None:
        return "NaR"
    return _trim(format(d, "f"))


def _trim(text: str) -> str:
    """Drop trailing fractional zeros: ``2.500`` -> ``2.5``, ``2.000`` -> ``2``."""
    mant, sep, exp = text.partition("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    return mant + sep + exp
