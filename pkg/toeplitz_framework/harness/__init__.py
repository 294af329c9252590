"""
Sweep harness: configuration, identity suites, convergence sweeps,
benchmarks and their reports.
"""

from toeplitz_framework.harness.config import SweepConfig, SweepSetup, load_config, parse_config
from toeplitz_framework.harness.suites import (
    BenchTable,
    ConvergenceReport,
    IdentityResult,
    IdentitySummary,
    evaluate_determinant,
    run_bench,
    run_convergence,
    run_identity_suite,
)

__all__ = [
    "SweepConfig",
    "SweepSetup",
    "load_config",
    "parse_config",
    "BenchTable",
    "ConvergenceReport",
    "IdentityResult",
    "IdentitySummary",
    "evaluate_determinant",
    "run_bench",
    "run_convergence",
    "run_identity_suite",
]
