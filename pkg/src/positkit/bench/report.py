"""Benchmark reports, the exact-fraction-digit metric and the published table."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_DOWN, Context, Decimal
from typing import Iterable

from .backends import RangeStats

__all__ = [
    "REFERENCES",
    "PUBLISHED_ACCURACY",
    "PUBLISHED_RANGES",
    "BenchReport",
    "exact_fraction_digits",
    "render_value",
    "truncate_decimal",
    "reports_to_json",
    "accuracy_table",
    "check_published",
]

# 60 fractional digits each, computed with an arbitrary-precision library.
REFERENCES = {
    "pi": "3.141592653589793238462643383279502884197169399375105820974944",
    "e": "2.718281828459045235360287471352662497757247093699959574966967",
    "sin1": "0.841470984807896506652502321630298999622563060798371065672751",
}

# Published accuracy table: benchmark -> backend -> (printed value, exact digits).
PUBLISHED_ACCURACY: dict[str, dict[str, tuple[str, int]]] = {
    "pi_leibniz": {
        "f32": ("3.14159", 5),
        "p8": ("3.5", 0),
        "p16": ("3.14", 2),
        "p32": ("3.14159", 5),
    },
    "pi_nilakantha": {
        "f32": ("3.1415929", 6),
        "p8": ("3.125", 1),
        "p16": ("3.141", 3),
        "p32": ("3.1415922", 6),
    },
    "euler_e": {
        "f32": ("2.7182819", 6),
        "p8": ("2.625", 0),
        "p16": ("2.718", 3),
        "p32": ("2.7182817", 6),
    },
    "sin_one": {
        "f32": ("0.8414709", 7),
        "p8": ("0.78", 0),
        "p16": ("0.8413", 3),
        "p32": ("0.84147098", 8),
    },
}

# Published dynamic ranges (binary64 instrumented): benchmark -> (min in (0,1], max in [1,inf)).
PUBLISHED_RANGES: dict[str, tuple[float, float]] = {
    "pi_leibniz": (1.0e-06, 3_999_999.0),
    "pi_nilakantha": (6.2e-08, 64_480_800.0),
    "euler_e": (8.22e-18, 20.0),
    "sin_one": (1.96e-20, 9.223e18),
}

RENDER_DIGITS = 20


def render_value(x: float, digits: int = RENDER_DIGITS) -> str:
    """Exact decimal expansion of a binary64 value, cut (not rounded) to
    ``digits`` significant digits.  NaN renders as ``"NaN"``."""
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    d = Context(prec=digits, rounding=ROUND_DOWN).plus(Decimal(x))
    text = format(d, "f")
    return text if "." in text else text + ".0"


def truncate_decimal(text: str, decimals: int) -> str:
    """Cut a decimal string to ``decimals`` fractional digits (no rounding)."""
    whole, _, frac = text.partition(".")
    if decimals <= 0:
        return whole
    return f"{whole}.{frac[:decimals].ljust(decimals, '0')}"


def exact_fraction_digits(computed: str, reference: str) -> int:
    """Consecutive fractional digits of ``computed`` agreeing with ``reference``.

    The integer parts (with sign) must agree, otherwise the count is 0.
    """
    c_whole, _, c_frac = computed.strip().partition(".")
    r_whole, _, r_frac = reference.strip().partition(".")
    if c_whole.lstrip("+") != r_whole.lstrip("+"):
        return 0
    n = 0
    for a, b in zip(c_frac, r_frac):
        if a != b:
            break
        n += 1
    return n


@dataclass
class BenchReport:
    benchmark: str
    backend: str
    iterations: int
    value: str
    reference: str | None = None
    exact_fraction_digits: int | None = None
    ranges: RangeStats | None = None
    wall_time: float = 0.0
    outputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ranges"] = self.ranges.to_dict() if self.ranges else None
        return d


def reports_to_json(reports: Iterable[BenchReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def accuracy_table(reports: Iterable[BenchReport]) -> str:
    """Human-readable grid: one row per benchmark, ``value | digits`` per backend."""
    reports = [r for r in reports if r.exact_fraction_digits is not None]
    benches: list[str] = []
    backends: list[str] = []
    cells: dict[tuple[str, str], BenchReport] = {}
    for r in reports:
        if r.benchmark not in benches:
            benches.append(r.benchmark)
        if r.backend not in backends:
            backends.append(r.backend)
        cells[(r.benchmark, r.backend)] = r
    rows = [["benchmark", "iterations"] + backends]
    for b in benches:
        iters = next(r.iterations for r in reports if r.benchmark == b)
        row = [b, f"{iters:,}"]
        for be in backends:
            r = cells.get((b, be))
            if r is None:
                row.append("-")
            else:
                shown = truncate_decimal(r.value, max(r.exact_fraction_digits + 2, 3))
                row.append(f"{shown} | {r.exact_fraction_digits}")
        rows.append(row)
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for j, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


@dataclass
class CellCheck:
    benchmark: str
    backend: str
    want_value: str
    want_digits: int
    got_value: str
    got_digits: int

    @property
    def digits_ok(self) -> bool:
        return self.got_digits == self.want_digits

    @property
    def value_ok(self) -> bool:
        decimals = len(self.want_value.partition(".")[2])
        return truncate_decimal(self.got_value, decimals) == self.want_value

    @property
    def ok(self) -> bool:
        return self.digits_ok and self.value_ok


def check_published(reports: Iterable[BenchReport]) -> list[CellCheck]:
    """Compare reports with the published accuracy table (cells present in both)."""
    out = []
    for r in reports:
        want = PUBLISHED_ACCURACY.get(r.benchmark, {}).get(r.backend)
        if want is None or r.exact_fraction_digits is None:
            continue
        out.append(CellCheck(r.benchmark, r.backend, want[0], want[1], r.value, r.exact_fraction_digits))
    return out
