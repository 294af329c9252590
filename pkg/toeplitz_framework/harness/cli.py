"""
Command-line entry point for the Toeplitz harness.

Subcommands build and evaluate one determinant (``det``), run the identity
suite (``identities``), sweep a convergence check (``converge``) or time
the evaluation routes (``bench``). Exit codes: 0 when everything passes,
1 on a tolerance failure, 2 on a configuration, validation or
construction error.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from toeplitz_framework.core.exceptions import ConfigurationError, ToeplitzError
from toeplitz_framework.harness import reports
from toeplitz_framework.harness.config import SweepSetup, parse_config, read_document
from toeplitz_framework.harness.suites import (
    evaluate_determinant,
    run_bench,
    run_convergence,
    run_identity_suite,
)
from toeplitz_framework.observability.logging_config import init_logging_from_config, set_run_id

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2


def setup_parser() -> argparse.ArgumentParser:
    """Set up the command-line argument parser."""
    parser = argparse.ArgumentParser(
        prog="toeplitz-harness",
        description="Identity suites, convergence sweeps and benchmarks for structured Toeplitz determinants",
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    def common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", "-c", required=True, help="Sweep config (JSON, or YAML by suffix)")
        sub.add_argument("--out", "-o", default=None, help="Report path (stdout when omitted)")
        sub.add_argument("--format", "-f", choices=("csv", "json"), default=None, help="Report format")
        sub.add_argument("--tol", type=float, default=None, help="Override the tolerance the command checks")
        sub.add_argument("--seed", type=int, default=None, help="Seed for fuzzed identities")

    det_parser = subparsers.add_parser("det", help="Build and evaluate one structured determinant")
    common(det_parser)
    det_parser.add_argument("--n", type=int, default=None, help="Index n (defaults to the end of the n-grid)")

    common(subparsers.add_parser("identities", help="Run the identity suite over the n-grid"))
    common(subparsers.add_parser("converge", help="Compare normalized determinants with their limits"))
    common(subparsers.add_parser("bench", help="Time direct, condensation and asymptotic routes"))
    return parser


def _tolerance_override(command: str, tol: float, current: Dict[str, Any]) -> Dict[str, Any]:
    tolerances = dict(current)
    if command == "converge":
        tolerances["convergence"] = tol
    else:
        for key in ("identity", "dci", "quadrature"):
            tolerances[key] = tol
    return tolerances


def build_setup(args: argparse.Namespace) -> SweepSetup:
    """Read the config named by --config and apply the command-line overrides."""
    document = read_document(args.config)
    overrides: Dict[str, Any] = {"seed": args.seed, "format": args.format, "output": args.out}
    if args.tol is not None:
        if args.tol <= 0:
            raise ConfigurationError(f"--tol must be positive, got {args.tol}")
        overrides["tolerances"] = _tolerance_override(args.command, args.tol, document.get("tolerances", {}))
    config = parse_config(document, overrides)
    init_logging_from_config(config.logging)
    return config.build()


def cmd_det(args: argparse.Namespace, setup: SweepSetup) -> int:
    n = args.n if args.n is not None else setup.n_values[-1]
    value = evaluate_determinant(setup, n)
    logger.info("%s determinant at n=%d: log|D| = %.6g", setup.config.kind, n, value.log_modulus)
    reports.write_report(reports.render(value, setup.config.format, n), setup.config.output)
    return EXIT_OK


def cmd_identities(args: argparse.Namespace, setup: SweepSetup) -> int:
    summary = run_identity_suite(setup)
    reports.write_report(reports.render(summary, setup.config.format), setup.config.output)
    counts = summary.counts
    logger.info("identities: %d passed, %d failed, %d skipped", counts["pass"], counts["fail"], counts["precondition-skipped"])
    return EXIT_OK if summary.passed else EXIT_TOLERANCE


def cmd_converge(args: argparse.Namespace, setup: SweepSetup) -> int:
    report = run_convergence(setup)
    reports.write_report(reports.render(report, setup.config.format), setup.config.output)
    if report.rows:
        logger.info("converge: final rel_err %.3g (tol %.3g)", report.rows[-1].rel_err, report.tol)
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def cmd_bench(args: argparse.Namespace, setup: SweepSetup) -> int:
    table = run_bench(setup)
    reports.write_report(reports.render(table, setup.config.format), setup.config.output)
    ratio = table.asymptotic_time_ratio
    if ratio is not None:
        logger.info("bench: asymptotic route time ratio last/first = %.3g", ratio)
    return EXIT_OK


COMMANDS = {
    "det": cmd_det,
    "identities": cmd_identities,
    "converge": cmd_converge,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = setup_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG

    try:
        setup = build_setup(args)
        set_run_id(f"{args.command}-{setup.config.seed}")
        return COMMANDS[args.command](args, setup)
    except ConfigurationError as e:
        logger.error("configuration error: %s", e)
        _report_error(e)
        return EXIT_CONFIG
    except ToeplitzError as e:
        logger.error("%s: %s", type(e).__name__, e)
        _report_error(e)
        return EXIT_CONFIG
    except OSError as e:
        error = ConfigurationError(f"{e.strerror or e}", {"path": e.filename})
        logger.error("configuration error: %s", error)
        _report_error(error)
        return EXIT_CONFIG


def _report_error(error: ToeplitzError) -> None:
    print(reports.to_json(error.to_dict()), file=sys.stderr, end="")


if __name__ == "__main__":
    sys.exit(main())
