import json
from fractions import Fraction

import numpy as np
import pytest

from positkit.bench import (
    BACKEND_NAMES,
    LEVEL_ONE,
    LEVEL_TWO,
    Binary32Backend,
    ConvertingPositBackend,
    HybridBackend,
    PositBackend,
    RangeStats,
    TracingBackend,
    TrackingBackend,
    accuracy_table,
    check_published,
    decisions_equal,
    euler_e,
    exact_fraction_digits,
    load_iris,
    make_backend,
    pi_nilakantha,
    reports_to_json,
    run_level_one,
    run_level_two,
    sin_one,
    track_ranges,
)
from positkit.bench.backends import binary32_from_text
from positkit.bench.report import REFERENCES, render_value, truncate_decimal
from positkit.core import P8, P16, P32


class TestBinary32FromText:
    @pytest.mark.parametrize("text", ["0.1", "3.14159265358979", "1e-40", "16777217", "5.1", "-2.5"])
    def test_nearest(self, text):
        got = binary32_from_text(text)
        exact = Fraction(text)
        err = abs(Fraction(float(got)) - exact)
        for cand in (np.nextafter(got, np.float32(-np.inf)), np.nextafter(got, np.float32(np.inf))):
            assert abs(Fraction(float(cand)) - exact) >= err

    def test_double_rounding_case(self):
        # halfway between two binary32 values plus a tiny excess lost in binary64
        text = "1.000000059604644775390625000000000001"
        assert float(binary32_from_text(text)) == float(np.nextafter(np.float32(1), np.float32(2)))


class TestReport:
    def test_digits(self):
        assert exact_fraction_digits("3.1415", REFERENCES["pi"]) == 4
        assert exact_fraction_digits("3.5", REFERENCES["pi"]) == 0
        assert exact_fraction_digits("2.718", REFERENCES["pi"]) == 0
        assert exact_fraction_digits("0.84147098", REFERENCES["sin1"]) == 8

    def test_render_truncates(self):
        assert render_value(0.1) == "0.10000000000000000555"
        assert render_value(2.0) == "2.0"
        assert render_value(float("nan")) == "NaN"
        assert truncate_decimal("3.14159", 3) == "3.141"
        assert truncate_decimal("3.1", 3) == "3.100"
        assert truncate_decimal("3.9", 0) == "3"

    def test_table_and_json(self):
        reps = [run_level_one("euler_e", make_backend(n)) for n in ("f32", "p16")]
        table = accuracy_table(reps)
        assert "euler_e" in table and "p16" in table and "2.718" in table
        data = json.loads(reports_to_json(reps))
        assert data[1]["backend"] == "p16" and data[1]["exact_fraction_digits"] == 3

    def test_check_published_ignores_unknown_backends(self):
        reps = [run_level_one("euler_e", make_backend("f64"))]
        assert check_published(reps) == []


class TestBackends:
    @pytest.mark.parametrize("name", BACKEND_NAMES)
    def test_make_every_backend(self, name):
        b = make_backend(name)
        three = b.from_int(3)
        two = b.const("2")
        assert b.to_binary64(b.add(three, two)) == 5.0
        assert b.compare(two, three) == -1
        assert b.lt(two, three) and b.le(two, two) and b.eq(two, two)
        assert b.to_binary64(b.neg(two)) == -2.0
        assert b.to_binary64(b.sqrt(b.from_int(4))) == 2.0

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            make_backend("p12")

    def test_posit_nar_is_unordered(self):
        b = PositBackend(P16)
        assert b.compare(P16.nar, 0) is None
        assert b.div(b.from_int(1), b.from_int(0)) == P16.nar

    def test_dot(self):
        for name in ("f32", "p32"):
            b = make_backend(name)
            xs = [b.from_int(i) for i in range(1, 5)]
            assert b.to_binary64(b.dot(xs, xs)) == 30.0
        with pytest.raises(ValueError):
            make_backend("p16").dot([1], [])

    def test_binary32_backend_rounds(self):
        b = Binary32Backend()
        x = b.div(b.from_int(1), b.from_int(3))
        assert b.to_binary64(x) == float(np.float32(1) / np.float32(3))

    def test_converting_rounds_through_binary32(self):
        b = ConvertingPositBackend(P32)
        third = b.div(b.from_int(1), b.from_int(3))
        (stored,) = b.checkpoint(third)
        assert b.to_binary64(stored) == float(np.float32(b.to_binary64(third)))

    def test_hybrid_storage(self):
        b = HybridBackend(P8, P16)
        x = b.const("3.14159")
        assert b.to_binary64(x) == 3.125
        third = b.div(b.from_int(1), b.from_int(3))
        assert b.to_binary64(b.store(third)) == 0.328125
        assert b.to_binary64(third) != 0.328125

    def test_range_stats(self):
        r = RangeStats()
        for x in (0.5, -2e-3, 7.0, 0.0, float("nan"), 1.0, -30.0):
            r.observe(x)
        assert r.min_01 == 2e-3 and r.max_1inf == 30.0
        assert r.to_dict() == {"min_01": 2e-3, "max_1inf": 30.0}

    def test_tracking_observes_operands_and_results(self):
        t = TrackingBackend(make_backend("f64"))
        t.mul(t.from_int(1000), t.const("0.001"))
        assert t.stats.max_1inf == 1000.0
        assert t.stats.min_01 == pytest.approx(0.001)


class TestLevelOne:
    def test_registry(self):
        assert set(LEVEL_ONE) == {"pi_leibniz", "pi_nilakantha", "euler_e", "sin_one"}

    def test_binary64_converges(self):
        assert float(pi_nilakantha(make_backend("f64"))) == pytest.approx(3.14159265, abs=1e-6)
        assert float(euler_e(make_backend("f64"))) == pytest.approx(2.718281828459045, abs=1e-15)
        assert float(sin_one(make_backend("f64"))) == pytest.approx(0.8414709848078965, abs=1e-15)

    def test_leibniz_short_run(self):
        r = run_level_one("pi_leibniz", make_backend("f64"), n=1000)
        assert r.iterations == 1000
        assert abs(float(r.value) - 3.14159265) < 2e-3

    def test_same_op_sequence_on_every_backend(self):
        # Every backend must execute the identical abstract program.
        for bench in ("pi_nilakantha", "euler_e", "sin_one"):
            traces = []
            for name in ("f32", "p8", "p32", "p8/p16-hybrid", "p32-converting"):
                t = TracingBackend(make_backend(name))
                kernel, n, _ = LEVEL_ONE[bench]
                kernel(t, min(n, 30))
                traces.append(t.trace)
            assert all(tr == traces[0] for tr in traces), bench

    def test_ranges_sin(self):
        r = track_ranges("sin_one")
        assert r.min_01 == pytest.approx(1.0 / 51090942171709440000, rel=1e-9)

    def test_published_cells_reproduced(self):
        reps = [run_level_one(b, make_backend(n)) for b in ("pi_nilakantha", "euler_e") for n in ("f32", "p8", "p16", "p32")]
        assert all(c.ok for c in check_published(reps))


class TestLevelTwo:
    def test_iris_loads(self, no_data_dir):
        d = load_iris()
        assert len(d.features) == 150 and len(d.classes) == 3
        assert d.labels.count(0) == 50

    def test_env_var_and_missing(self, tmp_path, monkeypatch):
        monkeypatch.setenv("POSITKIT_DATA_DIR", str(tmp_path))
        with pytest.raises(FileNotFoundError):
            load_iris()
        (tmp_path / "iris.csv").write_text("1,2,3,4,a\n5,6,7,8,b\n")
        d = load_iris()
        assert d.classes == ("a", "b") and d.features[1] == ("5", "6", "7", "8")

    def test_malformed(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2,3\n")
        with pytest.raises(ValueError):
            load_iris(p)

    def test_binary64_decisions_are_sensible(self):
        data = load_iris()
        b = make_backend("f64")
        km = run_level_two("KM", b, data).outputs["assignments"]
        assert len(set(km)) == 3
        knn = run_level_two("KNN", b, data).outputs["labels"]
        acc = sum(int(p == t) for p, t in zip(knn, data.labels)) / 150
        assert acc > 0.9
        nb = run_level_two("NB", b, data).outputs["labels"]
        assert sum(int(p == t) for p, t in zip(nb, data.labels)) / 150 > 0.9
        ct = run_level_two("CT", b, data).outputs["labels"]
        assert sum(int(p == t) for p, t in zip(ct, data.labels)) / 150 > 0.95

    def test_linear_regression_matches_least_squares(self):
        data = load_iris()
        x = np.array([[float(v) for v in row] for row in data.features])
        y = x[:, 3]
        a = np.column_stack([np.ones(150), x[:, :3]])
        want, *_ = np.linalg.lstsq(a, y, rcond=None)
        got = [float(c) for c in run_level_two("LR", make_backend("f64"), data).outputs["coefficients"]]
        assert got == pytest.approx(list(want), rel=1e-9, abs=1e-12)

    def test_decisions_equal(self):
        assert decisions_equal("LR", {"coefficients": ["1.23449"]}, {"coefficients": ["1.2345"]})
        assert not decisions_equal("LR", {"coefficients": ["1.2355"]}, {"coefficients": ["1.2345"]})
        assert decisions_equal("KNN", {"labels": [1, 2]}, {"labels": [1, 2]})

    def test_registry(self):
        assert set(LEVEL_TWO) == {"MM", "KM", "KNN", "LR", "NB", "CT"}

    def test_matrix_multiply_small(self):
        from positkit.bench.level_two import matrix_multiply

        a = matrix_multiply(make_backend("f64"), n=8)
        b = matrix_multiply(make_backend("p32"), n=8)
        assert float(a["checksum"]) == pytest.approx(float(b["checksum"]), rel=1e-6)
