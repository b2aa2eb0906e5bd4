import os
import random
import subprocess
import sys

import pytest

from positkit.core import P8, P16, P32, P64, PositConfig
from positkit.kernel import PyPositKernel, compiled_available, get_kernel

needs_ext = pytest.mark.skipif(not compiled_available(), reason="compiled kernel not built")
OPS = ("add", "sub", "mul", "div", "sqrt")


def test_python_kernel_for_wide_formats():
    k = get_kernel(P64)
    assert isinstance(k, PyPositKernel)
    one = k.from_int(1)
    assert k.to_double(k.add(one, one)) == 2.0


def test_forced_python_path():
    assert isinstance(get_kernel(P8, compiled=False), PyPositKernel)


@needs_ext
def test_compiled_refuses_wide():
    with pytest.raises(RuntimeError):
        get_kernel(P64, compiled=True)


@needs_ext
@pytest.mark.parametrize("ps,es", [(ps, es) for ps in range(3, 9) for es in range(0, ps - 2)])
def test_parity_exhaustive_small(ps, es):
    cfg = PositConfig(ps, es)
    fast, slow = get_kernel(cfg, compiled=True), PyPositKernel(ps, es)
    n = 1 << ps
    for a in range(n):
        assert fast.sqrt(a) == slow.sqrt(a)
        for b in range(n):
            for op in ("add", "sub", "mul", "div"):
                assert getattr(fast, op)(a, b) == getattr(slow, op)(a, b), (op, a, b)


@needs_ext
@pytest.mark.parametrize("cfg", [P16, P32, PositConfig(24, 2), PositConfig(32, 0), PositConfig(32, 6)], ids=str)
def test_parity_sampled(cfg):
    fast, slow = get_kernel(cfg, compiled=True), PyPositKernel(cfg.ps, cfg.es)
    rng = random.Random(cfg.ps * 100 + cfg.es)
    for _ in range(3000):
        a, b = rng.getrandbits(cfg.ps), rng.getrandbits(cfg.ps)
        for op in OPS:
            assert fast.apply(op, a, b) == slow.apply(op, a, b), (op, hex(a), hex(b))


@needs_ext
def test_parity_helpers():
    fast, slow = get_kernel(P32, compiled=True), PyPositKernel(32, 3)
    for n in (0, 1, -1, 7, 2**31 - 1, -(2**40), 10**30):
        assert fast.from_int(n) == slow.from_int(n)
    rng = random.Random(2)
    for _ in range(500):
        a = rng.getrandbits(32)
        x, y = fast.to_double(a), slow.to_double(a)
        assert x == y or (x != x and y != y)
    xs = [rng.getrandbits(32) for _ in range(20)]
    ys = [rng.getrandbits(32) for _ in range(20)]
    assert fast.dot(xs, ys) == slow.dot(xs, ys)
    assert fast.fma(xs[0], xs[1], xs[2]) == slow.fma(xs[0], xs[1], xs[2])


def test_dot_length_mismatch():
    with pytest.raises(ValueError):
        get_kernel(P16).dot([1, 2], [1])


def test_pure_python_env_switch():
    code = "from positkit.kernel import compiled_available; print(compiled_available())"
    env = dict(os.environ, POSITKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
