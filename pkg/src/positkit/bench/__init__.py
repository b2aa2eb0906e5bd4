"""Benchmarks: constant-estimation series, Iris kernels and range tracking."""
from .backends import (
    BACKEND_NAMES,
    Binary32Backend,
    Binary64Backend,
    ConvertingPositBackend,
    HybridBackend,
    PositBackend,
    RangeStats,
    ScalarBackend,
    TracingBackend,
    TrackingBackend,
    make_backend,
)
from .level_one import LEVEL_ONE, euler_e, pi_leibniz, pi_nilakantha, run_level_one, sin_one, track_ranges
from .level_two import LEVEL_TWO, decisions_equal, level_two_suite, load_iris, run_level_two
from .report import (
    PUBLISHED_ACCURACY,
    PUBLISHED_RANGES,
    REFERENCES,
    BenchReport,
    accuracy_table,
    check_published,
    exact_fraction_digits,
    reports_to_json,
)

__all__ = [
    "BACKEND_NAMES",
    "Binary32Backend",
    "Binary64Backend",
    "ConvertingPositBackend",
    "HybridBackend",
    "PositBackend",
    "RangeStats",
    "ScalarBackend",
    "TracingBackend",
    "TrackingBackend",
    "make_backend",
    "LEVEL_ONE",
    "euler_e",
    "pi_leibniz",
    "pi_nilakantha",
    "run_level_one",
    "sin_one",
    "track_ranges",
    "LEVEL_TWO",
    "decisions_equal",
    "level_two_suite",
    "load_iris",
    "run_level_two",
    "PUBLISHED_ACCURACY",
    "PUBLISHED_RANGES",
    "REFERENCES",
    "BenchReport",
    "accuracy_table",
    "check_published",
    "exact_fraction_digits",
    "reports_to_json",
]
