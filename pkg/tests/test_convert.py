import math
import random
import struct
from fractions import Fraction

import numpy as np
import pytest

from positkit.convert import (
    binary32_bits_to_posit,
    binary32_to_posit,
    binary64_to_posit,
    exact_decimal_string,
    exact_fraction,
    format_decimal,
    int_to_posit,
    parse_decimal,
    posit_to_binary32,
    posit_to_binary32_bits,
    posit_to_binary64,
    posit_to_int,
    resize_posit,
)
from positkit.core import P8, P16, P32, P64, PositConfig
from positkit.oracle import exact_value, round_to_posit


class TestBinary:
    def test_one(self):
        assert binary32_to_posit(P32, 1.0) == 0x40000000
        assert binary32_bits_to_posit(P32, 0x3F800000) == 0x40000000

    def test_tiny_saturates_to_min_pos(self):
        assert binary32_to_posit(P8, 1e-30) == 0x01
        assert binary32_to_posit(P8, -1e-30) == 0xFF

    def test_specials(self):
        assert binary64_to_posit(P16, math.nan) == P16.nar
        assert binary64_to_posit(P16, math.inf) == P16.nar
        assert binary64_to_posit(P16, -0.0) == 0
        assert math.isnan(posit_to_binary64(P16, P16.nar))

    def test_round_trip_p32_exact(self):
        rng = random.Random(1)
        for _ in range(5000):
            bp = rng.getrandbits(32)
            if bp == P32.nar:
                continue
            assert binary64_to_posit(P32, posit_to_binary64(P32, bp)) == bp

    def test_binary64_matches_oracle(self):
        rng = random.Random(4)
        for _ in range(3000):
            x = rng.uniform(-1, 1) * 2.0 ** rng.randint(-140, 140)
            for cfg in (P8, P16, P32):
                assert binary64_to_posit(cfg, x) == round_to_posit(cfg, Fraction(x))

    def test_binary32_rounding(self):
        bp = parse_decimal(P32, "0.1")
        assert posit_to_binary32(P32, bp) == float(np.float32(0.1))
        bits = posit_to_binary32_bits(P32, 0x40000000)
        assert bits == 0x3F800000

    def test_p64_refuses_lossy_binary64(self):
        with pytest.raises(ValueError):
            posit_to_binary64(P64, 0x4000000000000000)


class TestResize:
    def test_p16_e_to_p8(self):
        e16 = parse_decimal(P16, "2.718281828")
        assert resize_posit(P16, P8, e16) == 0x56

    def test_widening_is_exact(self):
        for bp in range(256):
            wide = resize_posit(P8, P32, bp)
            assert exact_value(P32, wide) == exact_value(P8, bp)
            assert resize_posit(P32, P8, wide) == bp

    def test_narrowing_matches_oracle(self):
        rng = random.Random(9)
        for _ in range(3000):
            bp = rng.getrandbits(32)
            v = exact_value(P32, bp)
            for dst in (P8, P16, PositConfig(12, 0)):
                assert resize_posit(P32, dst, bp) == round_to_posit(dst, v)


class TestIntegers:
    @pytest.mark.parametrize("n", [0, 1, -1, 3, 17, 255, -1000, 2**20 + 1])
    def test_matches_oracle(self, n):
        for cfg in (P8, P16, P32):
            assert int_to_posit(cfg, n) == round_to_posit(cfg, Fraction(n))

    def test_to_int(self):
        assert posit_to_int(P8, 0x59) == 3
        assert posit_to_int(P8, parse_decimal(P8, "2.5")) == 2
        assert posit_to_int(P8, parse_decimal(P8, "3.5")) == 4
        assert posit_to_int(P8, parse_decimal(P8, "-1.5")) == -2
        with pytest.raises(ValueError):
            posit_to_int(P8, 0x80)


class TestDecimal:
    def test_parse_table(self):
        assert parse_decimal(P8, "3.125") == 0x59
        assert parse_decimal(P8, "-2") == 0xB0
        assert parse_decimal(P8, "NaR") == 0x80
        assert parse_decimal(P8, "1e9") == 0x7F

    def test_parse_matches_oracle(self):
        rng = random.Random(8)
        for _ in range(1500):
            text = f"{rng.choice('-+ ')}{rng.randint(0, 10**6)}.{rng.randint(0, 10**6):06d}e{rng.randint(-40, 40)}".strip()
            for cfg in (P8, P16, P32, P64):
                assert parse_decimal(cfg, text) == round_to_posit(cfg, Fraction(text)), (cfg, text)

    @pytest.mark.parametrize("text", ["", "1.2.3", "abc", "1/0"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_decimal(P8, text)

    def test_format(self):
        assert format_decimal(P8, 0x59) == "3.125"
        assert format_decimal(P8, 0xB0) == "-2"
        assert format_decimal(P8, 0x80) == "NaR"
        assert format_decimal(P8, 0x00) == "0"
        assert format_decimal(P32, parse_decimal(P32, "3.14159265"), digits=4) == "3.142"

    def test_exact_string(self):
        assert exact_decimal_string(P8, 0x01) == "0.000244140625"
        assert exact_decimal_string(P8, 0x7F) == "4096"

    def test_format_round_trips(self):
        rng = random.Random(6)
        for _ in range(2000):
            bp = rng.getrandbits(32)
            assert parse_decimal(P32, format_decimal(P32, bp)) == bp

    def test_exact_fraction(self):
        assert exact_fraction(P8, 0x59) == Fraction(25, 8)
        assert exact_fraction(P8, 0x80) is None
        rng = random.Random(12)
        for _ in range(500):
            bp = rng.getrandbits(64)
            assert exact_fraction(P64, bp) == (None if bp == P64.nar else exact_value(P64, bp))
