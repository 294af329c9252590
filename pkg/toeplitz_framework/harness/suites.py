"""
Identity suites, convergence sweeps and benchmarks.

Sweep points run in a thread pool; results are reassembled in n order so
that identical configs give identical reports.
"""

import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from toeplitz_framework.bopuc import (
    VARIANTS,
    BopucSystem,
    biorthogonality_residual,
    compute_bopuc,
    kernel_det_identity,
    lu_factorization_residual,
    recurrence_residuals,
    reproducing_kernel,
    semiframed_via_kernel,
)
from toeplitz_framework.core.exceptions import (
    ConfigurationError,
    DegenerateMomentError,
    PreconditionViolationError,
    ToeplitzError,
)
from toeplitz_framework.core.logcomplex import LogComplex, log_combination, relative_difference
from toeplitz_framework.dci import (
    dodgson_residual,
    reduce_framed,
    reduce_three_bordered,
    reduce_two_bordered,
    reduce_two_framed,
)
from toeplitz_framework.harness.config import KIND_LAYOUT, SweepSetup
from toeplitz_framework.observability.logging_config import log_context, log_event
from toeplitz_framework.observability.metrics import get_metrics_collector
from toeplitz_framework.rhp import (
    bordered_via_rhp,
    compatibility_residual,
    semiframed_via_x,
    x_data,
    z_agreement,
)
from toeplitz_framework.structmat import (
    DetKind,
    StructuredDetSpec,
    bordered_det,
    framed_spec,
    semiframed_det,
    structured_det,
    toeplitz_det,
)
from toeplitz_framework.symbols import SymbolKind
from toeplitz_framework.szego import (
    constant_F,
    constant_F_general,
    constant_H,
    constant_J1,
    decay_note,
    predict_bordered_zl,
    predict_pure,
    predict_semiframed,
    predict_zphi_bordered_ratio,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "precondition-skipped"

SAMPLE_POINTS = (0.6 + 0.3j, -0.4 + 0.5j, 1.7 - 0.2j)
KERNEL_PAIRS = ((0.5 + 0.2j, 0.3 - 0.6j), (1.4 + 0.1j, -0.7 + 0.2j), (0.8 + 0.4j, 1.0 / (0.8 + 0.4j)))
JUMP_THETAS = np.linspace(0.1, 2.0 * math.pi - 0.1, 7)
MACHINE_FLOOR = 1e-13
CONVERGENCE_KINDS = (
    "pure",
    "bordered",
    "two-bordered",
    "semi-framed",
    "zphi-bordered",
    "z-inverse-bordered",
    "bordered-zl",
)


class SweepPoint:
    """Per-n state shared by the identities evaluated at that n."""

    def __init__(self, setup: SweepSetup, n: int):
        self.setup = setup
        self.n = n
        self.phi = setup.phi
        self.config = setup.config

    @functools.cached_property
    def system(self) -> BopucSystem:
        return compute_bopuc(self.phi, self.n + 2)

    def require(self, minimum: int) -> None:
        if self.n < minimum:
            raise PreconditionViolationError(f"needs n >= {minimum}", {"n": self.n})

    def require_nondegenerate(self, *degrees: int) -> None:
        """Skip when |X11(0; m)| = |q_m(0)|, relative to the largest coefficient of q_m, sits below the floor."""
        floor = self.config.degeneracy_floor
        for m in degrees:
            if m < 1:
                continue
            coeffs = self.system.monic_q[m, : m + 1]
            value = float(np.abs(coeffs[0]) / np.max(np.abs(coeffs)))
            if value < floor:
                raise PreconditionViolationError(
                    f"|X11(0; {m})| relative to the coefficients of q_{m} is {value:.3g}, below the degeneracy floor {floor:g}",
                    {"m": m, "floor": floor},
                )

    @property
    def coefficient_method(self) -> str:
        if self.config.method == "coefficients" or self.phi.kind is SymbolKind.JUMP:
            return "coefficients"
        return "quadrature"

    def semiframe(self) -> Tuple[Any, Any, complex]:
        frames = self.setup.frames
        return frames[0], frames[1], self.setup.corners[0]

    def quadrature_kwargs(self) -> Dict[str, Any]:
        q = self.config.quadrature
        return {
            "tol": self.config.tolerances.quadrature * 1e-2,
            "start_nodes": q.start_nodes,
            "max_nodes": max(q.max_nodes, q.start_nodes),
        }


def _dci_report_residual(report) -> float:
    if report.degenerate:
        raise PreconditionViolationError(f"{report.identity}: condensation denominator vanishes")
    return report.max_residual


def _two_bordered(point: SweepPoint) -> float:
    b = point.setup.borders
    return _dci_report_residual(reduce_two_bordered(point.phi, b[0], b[1], point.n + 2))


def _three_bordered(point: SweepPoint) -> float:
    b = point.setup.borders
    return _dci_report_residual(reduce_three_bordered(point.phi, b[0], b[1], b[2], point.n + 3))


def _framed(kind: str) -> Callable[[SweepPoint], float]:
    def check(point: SweepPoint) -> float:
        frames, corners = point.setup.frames, point.setup.corners
        spec = framed_spec(kind, point.phi, *frames[:4], corners[:4], point.n + 3)
        return _dci_report_residual(reduce_framed(spec))
    return check


def _two_framed(point: SweepPoint) -> float:
    spec = StructuredDetSpec(
        DetKind.TWO_FRAMED_K,
        point.n + 5,
        point.phi,
        point.setup.frames[:8],
        point.setup.corners[:8],
    )
    return _dci_report_residual(reduce_two_framed(spec))


def _dci_fuzz(point: SweepPoint) -> float:
    count = point.config.fuzz_count
    if count == 0:
        raise PreconditionViolationError("fuzzing disabled (fuzz_count = 0)")
    rng = np.random.default_rng([point.config.seed, point.n])
    size = point.n + 2
    worst = 0.0
    for _ in range(count):
        matrix = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        j1, j2 = sorted(rng.choice(size, 2, replace=False))
        k1, k2 = sorted(rng.choice(size, 2, replace=False))
        worst = max(worst, dodgson_residual(matrix, int(j1), int(j2), int(k1), int(k2)).residual)
    return worst


def _biorthogonality(point: SweepPoint) -> float:
    return biorthogonality_residual(point.system, k_max=point.n, method=point.coefficient_method)


def _recurrences(point: SweepPoint) -> float:
    return max(recurrence_residuals(point.system, point.n, z).max for z in SAMPLE_POINTS + (0.0,))


def _kernel_cd(point: SweepPoint) -> float:
    return max(reproducing_kernel(point.system, point.n, z, zeta).discrepancy for z, zeta in KERNEL_PAIRS)


def _kernel_det(point: SweepPoint) -> float:
    z, zeta = KERNEL_PAIRS[0]
    return kernel_det_identity(point.phi, point.n, z, zeta, point.setup.corners[0])


def _lu(point: SweepPoint) -> float:
    return lu_factorization_residual(point.phi, point.n)


def _semiframed_kernel(point: SweepPoint) -> float:
    psi, eta, a = point.semiframe()
    method = point.coefficient_method
    kwargs = point.quadrature_kwargs() if method == "quadrature" else {}
    return max(
        semiframed_via_kernel(point.phi, psi, eta, a, point.n, v, method, system=point.system, **kwargs).residual
        for v in VARIANTS
    )


def _semiframed_x(point: SweepPoint) -> float:
    psi, eta, a = point.semiframe()
    method = point.coefficient_method
    kwargs = point.quadrature_kwargs() if method == "quadrature" else {}
    return max(
        semiframed_via_x(point.phi, psi, eta, a, point.n, v, method, system=point.system, **kwargs).residual
        for v in VARIANTS
    )


def _x_jump(point: SweepPoint) -> float:
    if point.phi.kind is SymbolKind.JUMP:
        raise PreconditionViolationError("boundary values of X are discontinuous for a jump symbol")
    x = x_data(point.phi, point.n, point.system)
    points = np.array([0.5 + 0.1j, -0.3 - 0.4j, 1.6 + 0.3j])
    return max(x.jump_residual(JUMP_THETAS), x.det_residual(points))


def _z_routes(point: SweepPoint) -> float:
    point.require(1)
    point.require_nondegenerate(point.n, point.n - 1)
    return z_agreement(point.phi, point.n, np.array(SAMPLE_POINTS), point.system)


def _compatibility(point: SweepPoint) -> float:
    point.require(1)
    point.require_nondegenerate(point.n, point.n - 1)
    return max(compatibility_residual(point.phi, point.n, z, point.system) for z in SAMPLE_POINTS)


def _bordered_rhp(point: SweepPoint) -> float:
    point.require(1)
    phi, n = point.phi, point.n
    spec = point.setup.border_spec(0)
    combo = bordered_via_rhp(phi, n, "combination", border=spec, system=point.system)
    shifted = bordered_via_rhp(phi, n, "bulk-z-ell", ell=2, system=point.system)
    return max(
        relative_difference(combo, bordered_det(phi, point.setup.border(0), n + 1)),
        relative_difference(shifted, bordered_det(phi, phi.shift(-2), n + 1)),
    )


def _zphi_bordered_rhp(point: SweepPoint) -> float:
    point.require(1)
    point.require_nondegenerate(point.n, point.n - 1)
    phi, n = point.phi, point.n
    spec = point.setup.border_spec(0)
    value = bordered_via_rhp(phi, n, "combination", bulk="zphi", border=spec, system=point.system)
    return relative_difference(value, bordered_det(phi.shift(1), point.setup.border(0), n + 1))


# name -> (check, tolerance category)
IDENTITIES: Dict[str, Tuple[Callable[[SweepPoint], float], str]] = {
    "dci-two-bordered": (_two_bordered, "dci"),
    "dci-three-bordered": (_three_bordered, "dci"),
    "dci-framed-M": (_framed("M"), "dci"),
    "dci-framed-N": (_framed("N"), "dci"),
    "dci-two-framed-K": (_two_framed, "dci"),
    "dci-fuzz": (_dci_fuzz, "dci"),
    "biorthogonality": (_biorthogonality, "identity"),
    "recurrences": (_recurrences, "identity"),
    "kernel-christoffel-darboux": (_kernel_cd, "identity"),
    "kernel-determinant": (_kernel_det, "identity"),
    "lu-factorization": (_lu, "identity"),
    "semiframed-kernel": (_semiframed_kernel, "quadrature"),
    "semiframed-x": (_semiframed_x, "quadrature"),
    "x-jump": (_x_jump, "quadrature"),
    "z-routes": (_z_routes, "identity"),
    "compatibility": (_compatibility, "identity"),
    "bordered-rhp": (_bordered_rhp, "identity"),
    "zphi-bordered-rhp": (_zphi_bordered_rhp, "identity"),
}


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    n: int
    status: str
    residual: Optional[float]
    tol: float
    detail: str = ""

    def to_record(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "n": self.n,
            "status": self.status,
            "residual": self.residual,
            "tol": self.tol,
            "detail": self.detail,
        }


@dataclass
class IdentitySummary:
    """Per-identity outcomes of one suite run, ordered by n then identity."""

    results: List[IdentityResult]
    seed: int
    symbol: str

    @property
    def counts(self) -> Dict[str, int]:
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for result in self.results:
            counts[result.status] += 1
        return counts

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    @property
    def max_residual(self) -> float:
        values = [r.residual for r in self.results if r.residual is not None]
        return max(values, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "symbol": self.symbol,
            "seed": self.seed,
            "passed": self.passed,
            "counts": self.counts,
            "results": [r.to_record() for r in self.results],
        }


def _selected_identities(setup: SweepSetup) -> List[str]:
    names = setup.config.identities or list(IDENTITIES)
    unknown = [name for name in names if name not in IDENTITIES]
    if unknown:
        raise ConfigurationError(f"unknown identities {unknown}", {"known": sorted(IDENTITIES)})
    return names


def _run_identity_point(setup: SweepSetup, n: int, names: Sequence[str]) -> List[IdentityResult]:
    metrics = get_metrics_collector()
    tolerances = setup.config.tolerances
    point = SweepPoint(setup, n)
    results = []
    with log_context(symbol=setup.phi.name, n=n):
        for name in names:
            check, category = IDENTITIES[name]
            tol = getattr(tolerances, category)
            try:
                with metrics.timer("identity.seconds", {"identity": name}):
                    residual = float(check(point))
            except (PreconditionViolationError, DegenerateMomentError) as exc:
                results.append(IdentityResult(name, n, SKIPPED, None, tol, str(exc)))
                metrics.increment_counter("identity.skipped", tags={"identity": name})
                continue
            except ToeplitzError as exc:
                exc.context.update({"identity": name, "n": n})
                raise
            status = PASS if residual < tol else FAIL
            metrics.increment_counter(f"identity.{'passed' if status == PASS else 'failed'}", tags={"identity": name})
            metrics.observe_histogram("identity.residual", residual, {"identity": name})
            if status == FAIL:
                log_event(logger, "identity_failed", logging.WARNING, identity=name, n=n, residual=residual, tol=tol)
            results.append(IdentityResult(name, n, status, residual, tol))
    return results


def _parallel_map(setup: SweepSetup, fn: Callable[[int], Any], values: Sequence[int]) -> List[Any]:
    workers = setup.config.workers
    if workers == 1:
        return [fn(n) for n in values]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, values))


def run_identity_suite(setup: SweepSetup) -> IdentitySummary:
    """Evaluate every selected identity at every n of the grid."""
    names = _selected_identities(setup)
    logger.info("identity suite: %d identities over n=%s", len(names), setup.n_values)
    per_point = _parallel_map(setup, lambda n: _run_identity_point(setup, n, names), setup.n_values)
    results = [r for chunk in per_point for r in chunk]
    summary = IdentitySummary(results, setup.config.seed, setup.phi.name)
    counts = summary.counts
    log_event(logger, "identity_suite_done", passed=summary.passed, failed=counts[FAIL], skipped=counts[SKIPPED])
    return summary


# Convergence


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    value: complex
    predicted: complex
    rel_err: float

    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "value": [self.value.real, self.value.imag],
            "predicted": [self.predicted.real, self.predicted.imag],
            "rel_err": self.rel_err,
        }


@dataclass
class ConvergenceReport:
    """
    Normalized determinant against its predicted constant over the n-grid.

    ``fitted_decay`` is the least-squares slope of log(rel_err) against n
    over the top half of the sweep, so a geometric rate rho shows up as
    -log(rho). It is None below four rows or when the errors sit at
    machine precision.
    """

    kind: str
    rows: List[ConvergenceRow]
    tol: float
    fitted_decay: Optional[float] = None
    decay_note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.rows) and self.rows[-1].rel_err < self.tol

    @property
    def rho(self) -> Optional[float]:
        return None if self.fitted_decay is None else math.exp(-self.fitted_decay)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "rows": [r.to_record() for r in self.rows],
            "tol": self.tol,
            "fitted_decay": self.fitted_decay,
            "rho": self.rho,
            "decay_note": self.decay_note,
            "pass": self.passed,
        }


def relative_error(value: complex, predicted: complex) -> float:
    if predicted == 0:
        return abs(value)
    return abs(value - predicted) / abs(predicted)


def fit_decay(rows: Sequence[ConvergenceRow]) -> Optional[float]:
    if len(rows) < 4:
        return None
    tail = [r for r in rows[len(rows) // 2:] if r.rel_err > MACHINE_FLOOR]
    if len(tail) < 2:
        return None
    n = np.array([r.n for r in tail], dtype=float)
    log_err = np.log([r.rel_err for r in tail])
    return float(np.polyfit(n, log_err, 1)[0])


def _normalized(value: LogComplex, n: int, setup: SweepSetup) -> complex:
    return (value / predict_pure(setup.phi, n)).to_complex()


def convergence_point(setup: SweepSetup, n: int) -> Tuple[complex, complex]:
    """(observed, predicted) at n for the configured kind."""
    phi, kind = setup.phi, setup.config.kind
    if kind == "pure":
        return _normalized(toeplitz_det(phi, n), n, setup), 1.0 + 0j
    if kind == "bordered":
        border, spec = setup.border(0), setup.border_specs[0]
        predicted = constant_F(phi, spec) if spec is not None else constant_F_general(phi, border)
        return _normalized(bordered_det(phi, border, n), n, setup), predicted
    if kind == "two-bordered":
        predicted = constant_J1(phi, setup.border_spec(0), setup.border_spec(1))
        return _normalized(bordered_det(phi, setup.borders[:2], n), n, setup), predicted
    if kind == "semi-framed":
        psi, eta = setup.frames[0], setup.frames[1]
        a, variant = setup.corners[0], setup.config.variant
        value = semiframed_det(variant, phi, psi, eta, a, n + 1)
        return _normalized(value, n, setup), predict_semiframed(phi, psi, eta, a, variant)
    if kind == "z-inverse-bordered":
        value = bordered_det(phi, setup.border(0).shift(-1), n)
        return _normalized(value, n, setup), constant_H(phi, setup.border_spec(0))
    if kind == "zphi-bordered":
        z_phi = phi.shift(1)
        value = (bordered_det(z_phi, setup.border(0), n + 1) / toeplitz_det(z_phi, n)).to_complex()
        return value, predict_zphi_bordered_ratio(phi, setup.border_spec(0), n)
    if kind == "bordered-zl":
        ell = setup.config.ell
        value = (bordered_det(phi, phi.shift(-ell), n + 1) / toeplitz_det(phi, n)).to_complex()
        return value, predict_bordered_zl(phi, ell)
    raise ConfigurationError(f"{kind} has no asymptotic prediction", {"kinds": list(CONVERGENCE_KINDS)})


def _decay_poles(setup: SweepSetup) -> List[complex]:
    """Poles of the borders or frames the configured kind actually uses."""
    kind = setup.config.kind
    if kind == "semi-framed":
        return [c for frame in setup.frames[:2] for c, _ in frame.poles]
    used = KIND_LAYOUT[kind][1]
    return [c for spec in setup.border_specs[:used] if spec is not None for c in spec.poles]


def run_convergence(
setup: SweepSetup) -> ConvergenceReport:
    """Structured determinant over G^n E against its predicted constant."""
    kind = setup.config.kind
    if kind not in CONVERGENCE_KINDS:
        raise ConfigurationError(f"{kind} has no asymptotic prediction", {"kinds": list(CONVERGENCE_KINDS)})

    def evaluate(n: int) -> ConvergenceRow:
        with log_context(symbol=setup.phi.name, kind=kind, n=n):
            value, predicted = convergence_point(setup, n)
            return ConvergenceRow(n, complex(value), complex(predicted), relative_error(value, predicted))

    rows = _parallel_map(setup, evaluate, setup.n_values)
    note = decay_note(setup.phi, _decay_poles(setup))
    report = ConvergenceReport(kind, rows, setup.config.tolerances.convergence, fit_decay(rows), note)
    if report.fitted_decay is not None:
        get_metrics_collector().set_gauge("convergence.fitted_decay", report.fitted_decay, {"kind": kind})
    log_event(logger, "convergence_done", kind=kind, passed=report.passed, fitted_decay=report.fitted_decay)
    return report


# Benchmarks


@dataclass(frozen=True)
class BenchRow:
    """Wall times of the three routes to D^B_n[phi; psi1, psi2] at one n."""

    n: int
    direct_seconds: float
    dci_seconds: float
    asymptotic_seconds: float
    direct: LogComplex
    dci: Optional[LogComplex]
    asymptotic: LogComplex

    @property
    def dci_agreement(self) -> Optional[float]:
        return None if self.dci is None else relative_difference(self.direct, self.dci)

    @property
    def asymptotic_rel_err(self) -> float:
        return relative_difference(self.direct, self.asymptotic)

    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "direct_seconds": self.direct_seconds,
            "dci_seconds": self.dci_seconds,
            "asymptotic_seconds": self.asymptotic_seconds,
            "dci_agreement": self.dci_agreement,
            "asymptotic_rel_err": self.asymptotic_rel_err,
        }


@dataclass
class BenchTable:
    rows: List[BenchRow] = field(default_factory=list)

    @property
    def asymptotic_time_ratio(self) -> Optional[float]:
        """Last over first asymptotic-route time; stays near 1 when the route is O(1) in n."""
        if len(self.rows) < 2 or self.rows[0].asymptotic_seconds == 0:
            return None
        return self.rows[-1].asymptotic_seconds / self.rows[0].asymptotic_seconds

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": [r.to_record() for r in self.rows], "asymptotic_time_ratio": self.asymptotic_time_ratio}


def _dci_value(report) -> Optional[LogComplex]:
    """D^B_n[phi; psi1, psi2] rebuilt from the condensation constituents."""
    _, inner = report.lhs
    if inner.is_zero:
        return None
    a, b, c, d = report.rhs
    return log_combination([(1.0, a * b), (-1.0, c * d)]) / inner


def run_bench(setup: SweepSetup) -> BenchTable:
    """Time direct LU, the condensation route and the asymptotic constant per n (sequential)."""
    metrics = get_metrics_collector()
    phi = setup.phi
    psi1, psi2 = setup.borders[0], setup.borders[1]
    spec1, spec2 = setup.border_spec(0), setup.border_spec(1)
    sizes = setup.config.bench_sizes or setup.n_values
    table = BenchTable()
    for n in sizes:
        if n < 3:
            raise ConfigurationError(f"bench sizes must be at least 3, got {n}")
        with metrics.timer("bench.direct", {"n": str(n)}) as direct_t:
            direct = bordered_det(phi, (psi1, psi2), n)
        with metrics.timer("bench.dci", {"n": str(n)}) as dci_t:
            dci_value = _dci_value(reduce_two_bordered(phi, psi1, psi2, n))
        with metrics.timer("bench.asymptotic", {"n": str(n)}) as asym_t:
            asymptotic = predict_pure(phi, n).scale(constant_J1(phi, spec1, spec2))
        row = BenchRow(n, direct_t["seconds"], dci_t["seconds"], asym_t["seconds"], direct, dci_value, asymptotic)
        logger.debug("bench n=%d direct=%.3gs dci=%.3gs asymptotic=%.3gs", n, row.direct_seconds, row.dci_seconds, row.asymptotic_seconds)
        table.rows.append(row)
    return table


def evaluate_determinant(setup: SweepSetup, n: int) -> LogComplex:
    """The structured determinant the config describes, at index n."""
    phi, kind, borders = setup.phi, setup.config.kind, setup.borders
    frames, corners = setup.frames, setup.corners
    if kind == "pure":
        return toeplitz_det(phi, n)
    if kind == "bordered":
        return bordered_det(phi, borders[0], n)
    if kind == "two-bordered":
        return bordered_det(phi, borders[:2], n)
    if kind == "three-bordered":
        return bordered_det(phi, borders[:3], n)
    if kind == "semi-framed":
        return semiframed_det(setup.config.variant, phi, frames[0], frames[1], corners[0], n + 1)
    if kind in ("framed-M", "framed-N"):
        return structured_det(framed_spec(kind[-1], phi, *frames[:4], corners[:4], n + 3))
    if kind == "two-framed-K":
        return structured_det(StructuredDetSpec(DetKind.TWO_FRAMED_K, n + 5, phi, frames[:8], corners[:8]))
    if kind == "zphi-bordered":
        return bordered_det(phi.shift(1), borders[0], n + 1)
    if kind == "z-inverse-bordered":
        return bordered_det(phi, borders[0].shift(-1), n)
    if kind == "bordered-zl":
        return bordered_det(phi, phi.shift(-setup.config.ell), n + 1)
    raise ConfigurationError(f"unknown determinant kind {kind!r}")
