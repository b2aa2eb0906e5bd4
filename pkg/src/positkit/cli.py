"""Command-line front end.

Exit status: 0 success, 1 verification or check failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import re
import sys
from decimal import Decimal
from pathlib import Path
from typing import Sequence

from .arith import ArithOp
from .bench.backends import binary32_from_text
from .convert import (
    binary64_to_posit,
    exact_decimal_string,
    format_decimal,
    parse_decimal,
    posit_to_binary32,
    posit_to_binary64,
    resize_posit,
)
from .core import P8, P16, P32, P64, PositConfig, decode, from_hex, to_hex
from .kernel import get_kernel
from .oracle import DEFAULT_SEED, MismatchReport, exhaustive_check, sampled_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_NAMED = {"p8": P8, "p16": P16, "p32": P32, "p64": P64}


class UsageError(Exception):
    pass


def parse_format(text: str) -> PositConfig:
    """``p8``/``p16``/``p32``/``p64``, ``p12e1`` or ``12,1``."""
    t = text.strip().lower()
    if t in _NAMED:
        return _NAMED[t]
    m = re.fullmatch(r"p?(\d+)(?:e|,)(\d+)", t)
    if not m:
        raise UsageError(f"unknown posit format {text!r}")
    try:
        return PositConfig(int(m.group(1)), int(m.group(2)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _bits(bp: int, lo: int, width: int) -> str:
    return format((bp >> lo) & ((1 << width) - 1), f"0{width}b") if width > 0 else "-"


# ---------------------------------------------------------------- inspect

def cmd_inspect(args) -> int:
    cfg = parse_format(args.format)
    bp = from_hex(cfg, args.pattern)
    ps = cfg.ps
    print(f"format   {cfg.name}")
    print(f"pattern  {to_hex(cfg, bp)}  {format(bp, f'0{ps}b')}")
    if bp == 0:
        print("class    zero")
        print("value    0")
        return EXIT_OK
    if bp == cfg.nar:
        print("class    NaR")
        print("value    NaR")
        return EXIT_OK
    u = decode(cfg, bp)
    mag = (-bp) & cfg.mask if u.s else bp
    frac_w = u.fs
    exp_w = u.ers
    reg_w = u.rs
    print("class    " + ("negative" if u.s else "positive"))
    print(f"sign     s={u.s}")
    reg_lo = ps - 1 - reg_w
    print(f"regime   bits={_bits(mag, reg_lo, reg_w)} k={u.k}")
    print(f"exponent bits={_bits(mag, frac_w, exp_w)} e={u.e}")
    f_dec = _significand_text(u.f, u.fs)
    print(f"fraction bits={_bits(mag, 0, frac_w)} f={f_dec}")
    print(f"value    {exact_decimal_string(cfg, bp)}")
    return EXIT_OK


def _significand_text(f: int, fs: int) -> str:
    # f / 2**fs is dyadic, so f * 5**fs / 10**fs is its exact decimal
    d = Decimal(f"{f * 5 ** fs}E-{fs}")
    return format(d.normalize(), "f")


# ---------------------------------------------------------------- convert

_IEEE = {"f32", "f64", "dec"}


def cmd_convert(args) -> int:
    src, dst = args.src.lower(), args.dst.lower()
    text = args.value
    if src in _IEEE:
        if dst in _IEEE:
            raise UsageError("one side of a conversion must be a posit format")
        cfg = parse_format(dst)
        if src == "dec":
            bp = parse_decimal(cfg, text)
        else:
            bp = binary64_to_posit(cfg, _parse_float(text, single=src == "f32"))
        print(to_hex(cfg, bp))
        return EXIT_OK
    scfg = parse_format(src)
    bp = from_hex(scfg, text)
    if dst == "f32":
        print(repr(posit_to_binary32(scfg, bp)))
    elif dst == "f64":
        if scfg.ps > 32:
            raise UsageError("binary64 holds every posit only up to 32 bits; use --to dec")
        print(repr(posit_to_binary64(scfg, bp)))
    elif dst == "dec":
        print(exact_decimal_string(scfg, bp))
    else:
        dcfg = parse_format(dst)
        print(to_hex(dcfg, resize_posit(scfg, dcfg, bp)))
    return EXIT_OK


def _parse_float(text: str, single: bool) -> float:
    """Parse to binary64, or to the nearest binary32 when ``single``."""
    try:
        float(text)
    except ValueError:
        raise UsageError(f"malformed number {text!r}") from None
    return float(binary32_from_text(text)) if single else float(text)


# ---------------------------------------------------------------- op

def cmd_op(args) -> int:
    cfg = parse_format(args.format)
    op = ArithOp(args.op)
    a = from_hex(cfg, args.a)
    if op.arity == 2:
        if args.b is None:
            raise UsageError(f"{op.value} needs two operands")
        b = from_hex(cfg, args.b)
    else:
        if args.b is not None:
            raise UsageError(f"{op.value} takes one operand")
        b = 0
    r = get_kernel(cfg).apply(op.value, a, b)
    print(f"{to_hex(cfg, r)}  {format_decimal(cfg, r)}")
    return EXIT_OK


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    cfg = parse_format(args.format)
    if args.all or args.op is None:
        ops = list(ArithOp)
    else:
        ops = [ArithOp(o) for o in args.op.split(",")]
    sampled = args.samples is not None
    if args.exhaustive and sampled:
        raise UsageError("choose --exhaustive or --samples, not both")
    if not sampled and cfg.ps > 16:
        raise UsageError(f"exhaustive mode unsupported for {cfg.name}; sampled mode required (--samples N)")
    failed = False
    lines: list[str] = []
    for op in ops:
        if sampled:
            rep: MismatchReport = sampled_check(cfg, op, args.samples, seed=args.seed)
        else:
            rep = exhaustive_check(cfg, op)
        status = "ok" if rep.ok else "FAIL"
        print(f"{op.value:5s} {cfg.name} checked={rep.checked} mismatches={len(rep.mismatches)} {status}")
        lines.extend(rep.lines())
        failed |= not rep.ok
    for line in lines[: args.show]:
        print(line)
    if args.report:
        Path(args.report).write_text("".join(l + "\n" for l in lines))
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------- bench

def cmd_bench(args) -> int:
    from .bench import (
        LEVEL_ONE,
        LEVEL_TWO,
        accuracy_table,
        check_published,
        decisions_equal,
        load_iris,
        make_backend,
        reports_to_json,
        run_level_one,
        run_level_two,
    )

    if not (args.level1 or args.level2):
        raise UsageError("select --level1 and/or --level2")
    names = [n.strip() for n in args.backends.split(",") if n.strip()]
    try:
        backends = [make_backend(n) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    selected = set(args.benchmarks.split(",")) if args.benchmarks else None
    known = set(LEVEL_ONE) | set(LEVEL_TWO)
    if selected and not selected <= known:
        raise UsageError(f"unknown benchmark(s) {sorted(selected - known)}; choose from {sorted(known)}")

    reports = []
    failed = False
    if args.level1:
        for name in LEVEL_ONE:
            if selected and name not in selected:
                continue
            n = args.leibniz_iterations if name == "pi_leibniz" else None
            for be in backends:
                reports.append(run_level_one(name, be, n=n, track=args.ranges))
        print(accuracy_table(reports))
        if args.ranges:
            print()
            for r in reports:
                print(f"range {r.benchmark:14s} {r.backend:16s} min(0,1]={r.ranges.min_01:.3g} max[1,inf)={r.ranges.max_1inf:.10g}")
        if args.check_paper:
            checks = check_published(reports)
            print()
            for c in checks:
                verdict = "ok" if c.digits_ok else "MISMATCH"
                value_note = "" if c.value_ok else "  (printed value differs)"
                print(
                    f"published {c.benchmark:14s} {c.backend:4s} want {c.want_value} | {c.want_digits}"
                    f"  got {c.got_value[:12]} | {c.got_digits}  {verdict}{value_note}"
                )
                failed |= not c.digits_ok
            if not checks:
                print("published: no cells for the selected backends")

    if args.level2:
        try:
            data = load_iris(args.data)
        except (FileNotFoundError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        ref_backend = make_backend("f32")
        print()
        for name in LEVEL_TWO:
            if selected and name not in selected:
                continue
            ref = run_level_two(name, ref_backend, data)
            for be in backends:
                r = ref if be.name == "f32" else run_level_two(name, be, data)
                same = decisions_equal(name, r.outputs, ref.outputs)
                r.outputs["matches_f32"] = same
                reports.append(r)
                print(f"{name:4s} {be.name:16s} {'same as f32' if same else 'DIFFERS from f32'}  {r.value}")

    if args.output:
        Path(args.output).write_text(reports_to_json(reports) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="positkit", description="Posit arithmetic toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("inspect", help="break a pattern into its fields")
    s.add_argument("--format", "-f", required=True, help="p8, p16, p32, p64, p<ps>e<es> or ps,es")
    s.add_argument("pattern", help="hex pattern, e.g. 0x59")
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("convert", help="convert between posit, binary32, binary64 and decimal")
    s.add_argument("--from", dest="src", required=True, help="f32, f64, dec or a posit format")
    s.add_argument("--to", dest="dst", required=True, help="f32, f64, dec or a posit format")
    s.add_argument("value", help="number for f32/f64/dec sources, hex pattern for posits")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("op", help="apply one arithmetic operation")
    s.add_argument("--format", "-f", required=True)
    s.add_argument("op", choices=[o.value for o in ArithOp])
    s.add_argument("a")
    s.add_argument("b", nargs="?")
    s.set_defaults(func=cmd_op)

    s = sub.add_parser("verify", help="compare arithmetic with the rational oracle")
    s.add_argument("--format", "-f", required=True)
    s.add_argument("--op", help="comma-separated subset of add,sub,mul,div,sqrt")
    s.add_argument("--all", action="store_true", help="every operation (default)")
    s.add_argument("--exhaustive", action="store_true", help="every operand (default; ps <= 16)")
    s.add_argument("--samples", type=int, help="random operands per op instead of exhaustive")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--show", type=int, default=20, help="mismatch lines to print")
    s.add_argument("--report", help="write every mismatch line to this file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="run benchmark series and kernels")
    s.add_argument("--level1", action="store_true", help="constant-estimation series")
    s.add_argument("--level2", action="store_true", help="Iris kernels and matrix multiply")
    s.add_argument("--backends", default="f32,p8,p16,p32", help="comma-separated backend names")
    s.add_argument("--benchmarks", help="comma-separated subset of benchmark names")
    s.add_argument("--check-paper", action="store_true", help="fail unless the published exact-digit counts are reproduced")
    s.add_argument("--ranges", action="store_true", help="track dynamic range of every operation")
    s.add_argument("--leibniz-iterations", type=int, default=None)
    s.add_argument("--data", help="Iris CSV path (default: $POSITKIT_DATA_DIR/iris.csv or bundled copy)")
    s.add_argument("--output", "-o", help="write JSON reports here")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", None) is not None and args.samples < 1:
        parser.error("--samples must be positive")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"positkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
