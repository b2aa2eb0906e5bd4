import json
import subprocess
import sys

import pytest

from positkit.cli import main, parse_format
from positkit.core import P8, P64, PositConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseFormat:
    def test_names(self):
        assert parse_format("p8") == P8
        assert parse_format("P64") == P64
        assert parse_format("p12e1") == PositConfig(12, 1)
        assert parse_format("12,1") == PositConfig(12, 1)

    @pytest.mark.parametrize("text", ["q8", "p2e0", "p8e9"])
    def test_rejects(self, text, capsys):
        code, _, err = run(capsys, "inspect", "--format", text, "0x00")
        assert code == 2 and "error" in err


class TestInspect:
    def test_fields(self, capsys):
        code, out, _ = run(capsys, "inspect", "--format", "p8", "0x59")
        assert code == 0
        assert "regime   bits=10 k=0" in out
        assert "exponent bits=1 e=1" in out
        assert "fraction bits=1001 f=1.5625" in out
        assert "value    3.125" in out

    def test_specials(self, capsys):
        assert "NaR" in run(capsys, "inspect", "--format", "p8", "0x80")[1]
        assert "value    0" in run(capsys, "inspect", "--format", "p8", "0x00")[1]

    def test_negative(self, capsys):
        out = run(capsys, "inspect", "--format", "p8", "0xb0")[1]
        assert "s=1" in out and "value    -2" in out

    def test_bad_pattern(self, capsys):
        assert run(capsys, "inspect", "--format", "p8", "0x1ff")[0] == 2


class TestConvert:
    def test_f32_to_posit(self, capsys):
        assert run(capsys, "convert", "--from", "f32", "--to", "p32", "1.0")[1].strip() == "0x40000000"
        assert run(capsys, "convert", "--from", "f32", "--to", "p8", "1e-30")[1].strip() == "0x01"

    def test_dec_and_back(self, capsys):
        assert run(capsys, "convert", "--from", "dec", "--to", "p8", "3.125")[1].strip() == "0x59"
        assert run(capsys, "convert", "--from", "p8", "--to", "dec", "0x59")[1].strip() == "3.125"
        assert run(capsys, "convert", "--from", "p8", "--to", "f64", "0xb0")[1].strip() == "-2.0"
        assert run(capsys, "convert", "--from", "p16", "--to", "p8", "0x4ae0")[1].strip() == "0x56"

    def test_usage_errors(self, capsys):
        assert run(capsys, "convert", "--from", "f32", "--to", "f64", "1")[0] == 2
        assert run(capsys, "convert", "--from", "f32", "--to", "p8", "abc")[0] == 2
        assert run(capsys, "convert", "--from", "p64", "--to", "f64", "0x4000000000000000")[0] == 2


class TestOp:
    def test_mul(self, capsys):
        code, out, _ = run(capsys, "op", "--format", "p8", "mul", "0xb0", "0x59")
        assert code == 0 and out.split()[0] == "0x9c"

    def test_sqrt(self, capsys):
        assert run(capsys, "op", "--format", "p8", "sqrt", "0x52")[1].split()[0] == "0x48"

    def test_arity(self, capsys):
        assert run(capsys, "op", "--format", "p8", "add", "0x40")[0] == 2
        assert run(capsys, "op", "--format", "p8", "sqrt", "0x40", "0x40")[0] == 2


class TestVerify:
    def test_exhaustive_p8(self, capsys):
        code, out, _ = run(capsys, "verify", "--format", "p8", "--op", "add,sqrt")
        assert code == 0
        assert "checked=65536 mismatches=0 ok" in out

    def test_sampled(self, capsys, tmp_path):
        rep = tmp_path / "r.txt"
        code, out, _ = run(capsys, "verify", "--format", "p32", "--all", "--samples", "200", "--report", str(rep))
        assert code == 0 and out.count("ok") == 5
        assert rep.read_text() == ""

    def test_wide_needs_samples(self, capsys):
        code, _, err = run(capsys, "verify", "--format", "p64", "--all")
        assert code == 2 and "--samples" in err

    def test_conflicting_modes(self, capsys):
        assert run(capsys, "verify", "--format", "p8", "--exhaustive", "--samples", "5")[0] == 2


class TestBench:
    def test_level_one_json(self, capsys, tmp_path):
        path = tmp_path / "out.json"
        code, out, _ = run(
            capsys, "bench", "--level1", "--benchmarks", "euler_e", "--backends", "f32,p16",
            "--ranges", "--output", str(path),
        )
        assert code == 0 and "euler_e" in out and "range" in out
        data = json.loads(path.read_text())
        assert [d["backend"] for d in data] == ["f32", "p16"]

    def test_check_cells(self, capsys):
        code, out, _ = run(
            capsys, "bench", "--level1", "--benchmarks", "pi_nilakantha,euler_e", "--check-paper"
        )
        assert code == 0 and "MISMATCH" not in out

    def test_level_two(self, capsys):
        code, out, _ = run(capsys, "bench", "--level2", "--benchmarks", "KM,NB", "--backends", "f32,p32")
        assert code == 0 and out.count("same as f32") == 4

    def test_errors(self, capsys, tmp_path):
        assert run(capsys, "bench")[0] == 2
        assert run(capsys, "bench", "--level1", "--backends", "p9")[0] == 2
        assert run(capsys, "bench", "--level1", "--benchmarks", "nope")[0] == 2
        assert run(capsys, "bench", "--level2", "--data", str(tmp_path / "x.csv"))[0] == 2


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "positkit.cli", "inspect", "--format", "p8", "0x40"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and "value    1" in out.stdout
