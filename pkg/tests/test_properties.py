"""Property tests over random formats and operands."""
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from positkit.arith import ArithOp, apply_bits, neg
from positkit.convert import binary64_to_posit, exact_fraction, parse_decimal, resize_posit
from positkit.core import PositConfig, decode, encode
from positkit.kernel import PyPositKernel, get_kernel
from positkit.oracle import exact_value, ref_op, round_to_posit


@st.composite
def cfg_and_patterns(draw, n=2, max_ps=64):
    ps = draw(st.integers(3, max_ps))
    es = draw(st.integers(0, min(ps - 3, 5)))
    cfg = PositConfig(ps, es)
    pats = [draw(st.integers(0, cfg.mask)) for _ in range(n)]
    return cfg, pats


@given(cfg_and_patterns(n=1))
def test_decode_encode_identity(args):
    cfg, (a,) = args
    assert encode(cfg, decode(cfg, a)) == a


@given(cfg_and_patterns(n=1))
def test_decode_agrees_with_bit_scan(args):
    cfg, (a,) = args
    v = exact_fraction(cfg, a)
    assert v == (None if a == cfg.nar else exact_value(cfg, a))


@settings(max_examples=300)
@given(cfg_and_patterns(n=2, max_ps=40), st.sampled_from(list(ArithOp)))
def test_arithmetic_matches_oracle(args, op):
    cfg, (a, b) = args
    assert apply_bits(cfg, op, a, b) == ref_op(cfg, op, a, b)


@settings(max_examples=200)
@given(cfg_and_patterns(n=2, max_ps=32), st.sampled_from(["add", "sub", "mul", "div", "sqrt"]))
def test_kernels_agree(args, op):
    cfg, (a, b) = args
    assert get_kernel(cfg).apply(op, a, b) == PyPositKernel(cfg.ps, cfg.es).apply(op, a, b)


@given(cfg_and_patterns(n=2))
def test_sign_symmetry(args):
    cfg, (a, b) = args
    assert apply_bits(cfg, ArithOp.MUL, neg(cfg, a), b) == neg(cfg, apply_bits(cfg, ArithOp.MUL, a, b))
    assert apply_bits(cfg, ArithOp.SUB, a, b) == apply_bits(cfg, ArithOp.ADD, a, neg(cfg, b))


@given(st.fractions(max_denominator=10**12).filter(lambda x: x != 0), st.integers(3, 64), st.integers(0, 5))
def test_parse_decimal_matches_oracle(x, ps, es):
    cfg = PositConfig(ps, min(es, ps - 3))
    text = f"{x.numerator}/{x.denominator}"
    assert parse_decimal(cfg, text) == round_to_posit(cfg, x)


@given(st.floats(allow_nan=False, allow_infinity=False), st.integers(3, 64), st.integers(0, 5))
def test_binary64_conversion_matches_oracle(x, ps, es):
    cfg = PositConfig(ps, min(es, ps - 3))
    assert binary64_to_posit(cfg, x) == round_to_posit(cfg, Fraction(x))


@given(cfg_and_patterns(n=1), st.integers(3, 64), st.integers(0, 5))
def test_resize_matches_oracle(args, ps2, es2):
    src, (a,) = args
    dst = PositConfig(ps2, min(es2, ps2 - 3))
    assert resize_posit(src, dst, a) == round_to_posit(dst, exact_value(src, a))
