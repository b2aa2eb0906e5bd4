"""Throughput of the compiled kernel against the pure-Python one.

    python benchmarks/compare_kernels.py [--ops 20000] [--leibniz 200000]

Times each arithmetic op on random operands for P8/P16/P32, then a short
Leibniz run through the benchmark backend, and checks the two kernels
returned identical patterns along the way.
"""
from __future__ import annotations

import argparse
import random
import time

from positkit.core import P8, P16, P32
from positkit.kernel import PyPositKernel, compiled_available, get_kernel

OPS = ("add", "sub", "mul", "div", "sqrt")


def time_op(kernel, op, pairs):
    fn = getattr(kernel, op)
    t0 = time.perf_counter()
    if op == "sqrt":
        out = [fn(a) for a, _ in pairs]
    else:
        out = [fn(a, b) for a, b in pairs]
    return time.perf_counter() - t0, out


def leibniz(kernel, n):
    four = kernel.from_int(4)
    pi = 0
    t0 = time.perf_counter()
    for i in range(n):
        t = kernel.div(four, kernel.from_int(2 * i + 1))
        pi = kernel.add(pi, t) if i % 2 == 0 else kernel.sub(pi, t)
    return time.perf_counter() - t0, pi


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ops", type=int, default=20000, help="operand pairs per op")
    ap.add_argument("--leibniz", type=int, default=200000, help="Leibniz terms")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    if not compiled_available():
        raise SystemExit("compiled kernel not built; reinstall without POSITKIT_NO_EXT/POSITKIT_PURE_PYTHON")

    print(f"{'format':12s} {'op':5s} {'python us/op':>13s} {'compiled us/op':>15s} {'speedup':>8s}")
    for cfg in (P8, P16, P32):
        rng = random.Random(f"{args.seed}:{cfg.ps}")
        pairs = [(rng.getrandbits(cfg.ps), rng.getrandbits(cfg.ps)) for _ in range(args.ops)]
        fast, slow = get_kernel(cfg, compiled=True), PyPositKernel(cfg.ps, cfg.es)
        for op in OPS:
            ts, rs = time_op(slow, op, pairs)
            tf, rf = time_op(fast, op, pairs)
            if rs != rf:
                raise SystemExit(f"kernels disagree on {cfg.name} {op}")
            n = len(pairs)
            print(f"{cfg.name:12s} {op:5s} {ts / n * 1e6:13.2f} {tf / n * 1e6:15.3f} {ts / tf:8.1f}x")

    ts, ps_ = leibniz(PyPositKernel(32, 3), args.leibniz)
    tf, pf = leibniz(get_kernel(P32, compiled=True), args.leibniz)
    if ps_ != pf:
        raise SystemExit("kernels disagree on the Leibniz run")
    print(f"\nLeibniz P32, {args.leibniz} terms: python {ts:.2f}s, compiled {tf:.2f}s ({ts / tf:.1f}x)")


if __name__ == "__main__":
    main()
