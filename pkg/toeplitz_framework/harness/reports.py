"""
Report serialization.

Numbers are written with 17 significant digits and complex values as
separate re/im columns. Reports carry no timestamps, so identical configs
and seeds give byte-identical identity and convergence reports.
"""

import csv
import io
import json
import logging
import math
import os
from typing import Any, Dict, List, Optional, Sequence

from toeplitz_framework.core.exceptions import ConfigurationError
from toeplitz_framework.core.logcomplex import LogComplex
from toeplitz_framework.harness.suites import BenchTable, ConvergenceReport, IdentitySummary

logger = logging.getLogger(__name__)

CONVERGENCE_HEADER = ("n", "value_re", "value_im", "pred_re", "pred_im", "rel_err")
IDENTITY_HEADER = ("identity", "n", "status", "residual", "tol", "detail")
BENCH_HEADER = (
    "n",
    "direct_seconds",
    "dci_seconds",
    "asymptotic_seconds",
    "dci_agreement",
    "asymptotic_rel_err",
)
DET_HEADER = ("n", "log_modulus", "phase", "value_re", "value_im")


def fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def _csv(header: Sequence[str], rows: List[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def to_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def convergence_csv(report: ConvergenceReport) -> str:
    rows = [
        (str(r.n), fmt(r.value.real), fmt(r.value.imag), fmt(r.predicted.real), fmt(r.predicted.imag), fmt(r.rel_err))
        for r in report.rows
    ]
    return _csv(CONVERGENCE_HEADER, rows)


def identity_csv(summary: IdentitySummary) -> str:
    rows = [(r.identity, str(r.n), r.status, fmt(r.residual), fmt(r.tol), r.detail) for r in summary.results]
    return _csv(IDENTITY_HEADER, rows)


def bench_csv(table: BenchTable) -> str:
    rows = [
        (
            str(r.n),
            fmt(r.direct_seconds),
            fmt(r.dci_seconds),
            fmt(r.asymptotic_seconds),
            fmt(r.dci_agreement),
            fmt(r.asymptotic_rel_err),
        )
        for r in table.rows
    ]
    return _csv(BENCH_HEADER, rows)


def det_csv(n: int, value: LogComplex) -> str:
    # the plain value overflows long before the log form does
    plain = value.to_complex() if value.log_modulus < 700 else complex(math.nan, math.nan)
    row = (str(n), fmt(value.log_modulus), fmt(value.phase), fmt(plain.real), fmt(plain.imag))
    return _csv(DET_HEADER, [row])


def render(result: Any, fmt_name: str, n: Optional[int] = None) -> str:
    """Serialize a suite summary, convergence report, bench table or determinant."""
    if fmt_name not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt_name!r}")
    if isinstance(result, LogComplex):
        if fmt_name == "csv":
            return det_csv(n, result)
        return to_json({"n": n, "value": result.to_dict()})
    if fmt_name == "json":
        return to_json(result.to_dict())
    if isinstance(result, IdentitySummary):
        return identity_csv(result)
    if isinstance(result, ConvergenceReport):
        return convergence_csv(result)
    if isinstance(result, BenchTable):
        return bench_csv(result)
    raise TypeError(f"cannot render {type(result).__name__}")


def write_report(text: str, path: Optional[str]) -> None:
    """Write to path, or stdout when path is None."""
    if path is None:
        print(text, end="")
        return
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="") as f:
            f.write(text)
    except OSError as e:
        raise ConfigurationError(f"cannot write report to {path}: {e.strerror or e}", {"output": path}) from e
    logger.info("report written to %s", path)
