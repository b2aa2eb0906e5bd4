"""Posit arithmetic: codec, arithmetic, conversions, a rational reference
oracle and benchmark kernels.

Patterns are plain ``int`` values; :class:`PositConfig` carries the format.
"""
from .arith import ArithOp, Ordering, apply_bits, compare
from .convert import (
    binary32_to_posit,
    binary64_to_posit,
    format_decimal,
    int_to_posit,
    parse_decimal,
    posit_to_binary32,
    posit_to_binary64,
    posit_to_int,
    resize_posit,
)
from .core import NAR, P8, P16, P32, P64, ZERO, PositConfig, UnpackedPosit, constants, decode, encode, from_hex, to_hex
from .kernel import compiled_available, get_kernel

__version__ = "0.1.0"

__all__ = [
    "ArithOp",
    "Ordering",
    "apply_bits",
    "compare",
    "binary32_to_posit",
    "binary64_to_posit",
    "format_decimal",
    "int_to_posit",
    "parse_decimal",
    "posit_to_binary32",
    "posit_to_binary64",
    "posit_to_int",
    "resize_posit",
    "NAR",
    "P8",
    "P16",
    "P32",
    "P64",
    "ZERO",
    "PositConfig",
    "UnpackedPosit",
    "constants",
    "decode",
    "encode",
    "from_hex",
    "to_hex",
    "compiled_available",
    "get_kernel",
]
