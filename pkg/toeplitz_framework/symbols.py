"""
Symbols on the unit circle.

A Symbol couples a vectorized evaluator with the structural metadata the
rest of the framework relies on: kind tag, pole list, analyticity annulus
and, whenever one is known, an exact rule for its Fourier coefficients.
This module also computes winding numbers, the log-symbol data (G, E,
Szegő function alpha, Wiener-Hopf factors) and builds the symbol families
used by the harness configuration.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from toeplitz_framework.core.exceptions import (
    AccuracyError,
    BoundaryError,
    ParameterError,
    PoleOnCircleError,
    RangeError,
    SingularSymbolError,
    WindingError,
)

logger = logging.getLogger(__name__)

ComplexLike = Union[complex, float, int, Sequence[float]]

DEFAULT_TOL = 1e-13
DEFAULT_TRUNC = 128
START_NODES = 256
NODE_CAP = 2 ** 20
CIRCLE_EPS = 1e-12


class SymbolKind(Enum):
    """Kind tags carried by every symbol."""
    ANALYTIC = "analytic-sampled"
    RATIONAL_COMBO = "rational-combo"
    RATIONAL = "plain-rational"
    PRODUCT = "product"
    ISING = "ising-diagonal"
    JUMP = "two-valued-jump"


def as_complex(value: ComplexLike) -> complex:
    """Accept a number or a [re, im] pair (the JSON config encoding)."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ParameterError(f"complex values are encoded as [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def circle_nodes(n_nodes: int, offset: float = 0.0) -> np.ndarray:
    """Uniform nodes exp(2 pi i (k + offset) / n) on the unit circle."""
    return np.exp(2j * np.pi * (np.arange(n_nodes) + offset) / n_nodes)


def _check_pole(location: complex) -> None:
    if abs(abs(location) - 1.0) < CIRCLE_EPS:
        raise PoleOnCircleError(
            f"pole {location} lies on the unit circle",
            {"pole": location},
        )


@dataclass(frozen=True, eq=False)
class Symbol:
    """
    A function on the unit circle together with its structural metadata.

    Instances are immutable and hash by identity, so derived quantities such
    as sampled coefficient tables can be cached per symbol.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    kind: SymbolKind
    name: str = "symbol"
    poles: Tuple[Tuple[complex, complex], ...] = ()
    annulus: Tuple[float, float] = (0.0, math.inf)
    winding_hint: Optional[int] = None
    coefficient_rule: Optional[Callable[[np.ndarray], np.ndarray]] = None
    base: Optional["Symbol"] = None
    base_reflected: bool = False
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for location, _ in self.poles:
            _check_pole(complex(location))
        inner, outer = self.annulus
        if not (inner < 1.0 < outer):
            raise ParameterError(
                f"annulus {self.annulus} of {self.name} does not contain the unit circle"
            )

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        values = np.asarray(self.evaluator(z_arr), dtype=complex)
        if z_arr.ndim == 0:
            return complex(values)
        return values

    def __repr__(self) -> str:
        return f"Symbol({self.name!r}, kind={self.kind.value})"

    @property
    def has_exact_coefficients(self) -> bool:
        return self.coefficient_rule is not None

    def coefficients_at(self, indices, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Fourier coefficients at an integer index array (exact rule or converged FFT)."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size == 0:
            return np.zeros(idx.shape, dtype=complex)
        if self.coefficient_rule is not None:
            return np.asarray(self.coefficient_rule(idx), dtype=complex).reshape(idx.shape)
        table, n_nodes, _ = _converged_table(self, _min_nodes(int(np.max(np.abs(idx)))), tol)
        out = table[np.mod(idx, n_nodes)]
        return np.where(np.abs(idx) < n_nodes // 2, out, 0.0 + 0.0j)

    def coeff(self, j: int) -> complex:
        return complex(self.coefficients_at(np.array([j]))[0])

    # Exact transforms of the coefficient sequence.

    def shift(self, k: int) -> "Symbol":
        """The symbol z^k * self; coefficients shift by k."""
        if k == 0:
            return self
        parent = self
        hint = None if self.winding_hint is None else self.winding_hint + k
        return Symbol(
            evaluator=lambda z: z ** k * parent.evaluator(z),
            kind=SymbolKind.ANALYTIC,
            name=f"z^{k}*{self.name}",
            annulus=self.annulus,
            winding_hint=hint,
            coefficient_rule=lambda idx: parent.coefficients_at(idx - k),
        )

    def reflect(self) -> "Symbol":
        """The symbol z -> self(1/z); coefficients are reversed."""
        parent = self
        inner, outer = self.annulus
        return Symbol(
            evaluator=lambda z: parent.evaluator(1.0 / z),
            kind=SymbolKind.ANALYTIC,
            name=f"~{self.name}",
            annulus=(1.0 / outer if outer < math.inf else 0.0, 1.0 / inner if inner > 0 else math.inf),
            winding_hint=None if self.winding_hint is None else -self.winding_hint,
            coefficient_rule=lambda idx: parent.coefficients_at(-idx),
        )

    def scale(self, factor: ComplexLike) -> "Symbol":
        factor = as_complex(factor)
        parent = self
        return Symbol(
            evaluator=lambda z: factor * parent.evaluator(z),
            kind=self.kind if self.kind is not SymbolKind.JUMP else SymbolKind.ANALYTIC,
            name=f"{factor}*{self.name}",
            poles=tuple((c, factor * b) for c, b in self.poles),
            annulus=self.annulus,
            winding_hint=self.winding_hint,
            coefficient_rule=lambda idx: factor * parent.coefficients_at(idx),
            base=self.base,
            base_reflected=self.base_reflected,
        )

    def __add__(self, other: "Symbol") -> "Symbol":
        left, right = self, other
        return Symbol(
            evaluator=lambda z: left.evaluator(z) + right.evaluator(z),
            kind=SymbolKind.ANALYTIC,
            name=f"({self.name}+{other.name})",
            annulus=_intersect(self.annulus, other.annulus),
            coefficient_rule=lambda idx: left.coefficients_at(idx) + right.coefficients_at(idx),
        )

    def __sub__(self, other: "Symbol") -> "Symbol":
        return self + other.scale(-1.0)

    def __mul__(self, other: "Symbol") -> "Symbol":
        """Pointwise product; coefficients come from quadrature of the product."""
        left, right = self, other
        hint = None
        if self.winding_hint is not None and other.winding_hint is not None:
            hint = self.winding_hint + other.winding_hint
        return Symbol(
            evaluator=lambda z: left.evaluator(z) * right.evaluator(z),
            kind=SymbolKind.ANALYTIC,
            name=f"{self.name}*{other.name}",
            annulus=_intersect(self.annulus, other.annulus),
            winding_hint=hint,
        )


def _intersect(a: Tuple[float, float], b: Tuple[float, float]) -> Tuple[float, float]:
    return (max(a[0], b[0]), min(a[1], b[1]))


@dataclass(frozen=True)
class FourierSeries:
    """Truncated two-sided coefficient array c_j, j_min <= j <= j_max."""

    j_min: int
    coeffs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be non-negative")
        if not np.all(np.isfinite(self.coeffs)):
            raise AccuracyError("non-finite Fourier coefficients", self.tail_bound)

    @property
    def j_max(self) -> int:
        return self.j_min + len(self.coeffs) - 1

    def __getitem__(self, j: int) -> complex:
        if j < self.j_min or j > self.j_max:
            return 0j
        return complex(self.coeffs[j - self.j_min])

    def indices(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def cauchy(self, w):
        """Cauchy transform of the series at |w| != 1."""
        return cauchy_from_coefficients(self.coeffs, self.j_min, w)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "j_min": self.j_min,
            "re": self.coeffs.real.tolist(),
            "im": self.coeffs.imag.tolist(),
            "tail_bound": self.tail_bound,
        }


def cauchy_from_coefficients(coeffs: np.ndarray, j_min: int, w):
    """
    (1/2 pi i) ∮ f(s) / (s - w) ds for f = sum c_j s^j.

    Inside the disk this is the analytic part sum_{j>=0} c_j w^j, outside it
    is -sum_{j>=1} c_{-j} w^{-j}.
    """
    w_arr = np.asarray(w, dtype=complex)
    if np.any(np.abs(np.abs(w_arr) - 1.0) < CIRCLE_EPS):
        raise BoundaryError("Cauchy transform requested on the unit circle", {"w": w})
    coeffs = np.asarray(coeffs, dtype=complex)
    j = np.arange(j_min, j_min + len(coeffs))
    plus = coeffs[j >= 0]
    plus_offset = max(j_min, 0)
    minus = coeffs[j <= -1][::-1]
    minus_start = -min(j[-1], -1) if len(coeffs) else 1
    inside = np.abs(w_arr) < 1.0
    out = np.zeros(w_arr.shape, dtype=complex)
    if np.any(inside) and len(plus):
        wi = w_arr[inside]
        out[inside] = wi ** plus_offset * np.polynomial.polynomial.polyval(wi, plus)
    if np.any(~inside) and len(minus):
        wo = 1.0 / w_arr[~inside]
        out[~inside] = -(wo ** minus_start) * np.polynomial.polynomial.polyval(wo, minus)
    if w_arr.ndim == 0:
        return complex(out)
    return out


def _min_nodes(max_index: int) -> int:
    n_nodes = START_NODES
    while n_nodes < 4 * (max_index + 1):
        n_nodes *= 2
    return n_nodes


def _adaptive_fft(
    sampler: Callable[[np.ndarray], np.ndarray],
    min_nodes: int,
    tol: float,
    label: str,
) -> Tuple[np.ndarray, int, float]:
    """
    Trapezoid/FFT coefficients on doubling grids.

    The tail estimate is the largest coefficient in the upper half of the
    resolved band, N/4 < |j| <= N/2; it must fall below tol relative to the
    largest coefficient before the table is accepted.
    """
    n_nodes = max(min_nodes, START_NODES)
    tail = math.inf
    while n_nodes <= NODE_CAP:
        samples = np.asarray(sampler(circle_nodes(n_nodes)), dtype=complex)
        if not np.all(np.isfinite(samples)):
            raise SingularSymbolError(f"{label} is not finite on the unit circle")
        coeffs = np.fft.fft(samples) / n_nodes
        freqs = np.abs(np.fft.fftfreq(n_nodes, d=1.0 / n_nodes))
        band = (freqs > n_nodes // 4) & (freqs <= n_nodes // 2)
        tail = float(np.max(np.abs(coeffs[band])))
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        if tail < tol * scale:
            logger.debug("Fourier table for %s converged with %d nodes (tail %.3e)", label, n_nodes, tail)
            return coeffs, n_nodes, tail
        n_nodes *= 2
    raise AccuracyError(
        f"Fourier coefficients of {label} did not converge within {NODE_CAP} nodes",
        tail,
        {"symbol": label, "tail": tail},
    )


@functools.lru_cache(maxsize=512)
def _converged_table(symbol: Symbol, min_nodes: int, tol: float) -> Tuple[np.ndarray, int, float]:
    return _adaptive_fft(symbol.evaluator, min_nodes, tol, symbol.name)


def fourier_coeffs(symbol: Symbol, j_min: int, j_max: int, tol: float = DEFAULT_TOL) -> FourierSeries:
    """Coefficients c_j for j_min <= j <= j_max (closed form where the symbol has one)."""
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if j_max < j_min:
        raise RangeError(f"empty coefficient range [{j_min}, {j_max}]")
    idx = np.arange(j_min, j_max + 1)
    if symbol.has_exact_coefficients:
        return FourierSeries(j_min, symbol.coefficients_at(idx, tol), 0.0)
    _, _, tail = _converged_table(symbol, _min_nodes(int(np.max(np.abs(idx)))), tol)
    return FourierSeries(j_min, symbol.coefficients_at(idx, tol), tail)


def winding_number(symbol: Symbol, start_nodes: int = 4096) -> int:
    """Total phase increment of one positive traversal divided by 2 pi."""
    n_nodes = start_nodes
    while n_nodes <= NODE_CAP:
        values = np.asarray(symbol.evaluator(circle_nodes(n_nodes)), dtype=complex)
        modulus = np.abs(values)
        if not np.all(np.isfinite(values)) or np.min(modulus) < 1e-12 * np.max(modulus):
            raise SingularSymbolError(
                f"{symbol.name} vanishes (or nearly so) on the unit circle",
                {"min_modulus": float(np.min(modulus))},
            )
        increments = np.angle(np.roll(values, -1) / values)
        if np.max(np.abs(increments)) < np.pi / 2:
            return int(round(float(np.sum(increments)) / (2.0 * np.pi)))
        n_nodes *= 2
    raise AccuracyError(f"phase of {symbol.name} could not be resolved on the circle")


def _exp_series(log_coeffs: np.ndarray) -> np.ndarray:
    """Taylor coefficients of exp(sum_k l_k x^k), same length as log_coeffs."""
    out = np.zeros(len(log_coeffs), dtype=complex)
    out[0] = np.exp(log_coeffs[0])
    k = np.arange(1, len(log_coeffs))
    weighted = k * log_coeffs[1:]
    for m in range(1, len(log_coeffs)):
        out[m] = np.dot(weighted[:m], out[m - 1::-1][:m]) / m
    return out


@dataclass(frozen=True)
class LogSymbolData:
    """
    Log-symbol Fourier data of a Szegő-type symbol.

    Series arrays are Taylor coefficients: alpha_inside in z, alpha_outside
    in 1/z, phi_plus in z and phi_minus in 1/z.
    """

    log_coeffs: FourierSeries
    G: complex
    E: complex
    alpha_inside: np.ndarray
    alpha_outside: np.ndarray
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    trunc: int
    annulus: Tuple[float, float] = (0.0, math.inf)

    def log_coeff(self, k: int) -> complex:
        return self.log_coeffs[k]

    @property
    def log_G(self) -> complex:
        return self.log_coeffs[0]

    @property
    def log_E(self) -> complex:
        k = np.arange(1, self.trunc + 1)
        plus = np.array([self.log_coeffs[int(j)] for j in k])
        minus = np.array([self.log_coeffs[-int(j)] for j in k])
        return complex(np.sum(k * plus * minus))

    def _log_plus(self) -> np.ndarray:
        return np.array([self.log_coeffs[k] for k in range(0, self.trunc + 1)])

    def _log_minus(self) -> np.ndarray:
        return np.array([0j] + [self.log_coeffs[-k] for k in range(1, self.trunc + 1)])

    def alpha_in(self, z):
        """exp(sum_{k>=0} [log phi]_k z^k); meaningful for |z| < 1."""
        return np.exp(np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self._log_plus()))

    def alpha_out(self, z):
        """exp(-sum_{k>=1} [log phi]_{-k} z^{-k}); meaningful for |z| > 1."""
        w = 1.0 / np.asarray(z, dtype=complex)
        return np.exp(-np.polynomial.polynomial.polyval(w, self._log_minus()))

    def phi_plus_at(self, z):
        return self.alpha_in(z) / self.G

    def phi_minus_at(self, z):
        return 1.0 / self.alpha_out(z)


def szego_data(symbol: Symbol, trunc: int = DEFAULT_TRUNC, tol: float = DEFAULT_TOL) -> LogSymbolData:
    """Log-symbol coefficients, G, E, alpha and the Wiener-Hopf factors of symbol."""
    if trunc < 1:
        raise RangeError("trunc must be at least 1")
    winding = winding_number(symbol)
    if winding != 0:
        raise WindingError(f"{symbol.name} has winding number {winding}", winding)
    return _szego_data_cached(symbol, trunc, tol)


@functools.lru_cache(maxsize=128)
def _szego_data_cached(symbol: Symbol, trunc: int, tol: float) -> LogSymbolData:
    def log_sampler(nodes: np.ndarray) -> np.ndarray:
        values = np.asarray(symbol.evaluator(nodes), dtype=complex)
        # np.unwrap keeps the principal phase at z = 1 (node 0)
        return np.log(np.abs(values)) + 1j * np.unwrap(np.angle(values))

    table, n_nodes, tail = _adaptive_fft(log_sampler, _min_nodes(trunc), tol, f"log {symbol.name}")
    idx = np.arange(-trunc, trunc + 1)
    log_coeffs = FourierSeries(-trunc, table[np.mod(idx, n_nodes)], tail)

    k = np.arange(1, trunc + 1)
    plus = table[k]
    minus = table[np.mod(-k, n_nodes)]
    e_terms = k * plus * minus
    e_tail = float(np.max(np.abs(e_terms[trunc // 2:])))
    if e_tail > max(tol, 1e-12):
        raise AccuracyError(
            f"E-series of {symbol.name} has not decayed at trunc={trunc}",
            e_tail,
            {"trunc": trunc},
        )

    log_plus = np.concatenate([[table[0]], plus])
    log_minus_neg = np.concatenate([[0j], -minus])
    log_phi_plus = np.concatenate([[0j], plus])
    log_phi_minus = np.concatenate([[0j], minus])

    G = complex(np.exp(table[0]))
    E = complex(np.exp(np.sum(e_terms)))
    logger.debug("szego data for %s: G=%s E=%s", symbol.name, G, E)
    return LogSymbolData(
        log_coeffs=log_coeffs,
        G=G,
        E=E,
        alpha_inside=_exp_series(log_plus),
        alpha_outside=_exp_series(log_minus_neg),
        phi_plus=_exp_series(log_phi_plus),
        phi_minus=_exp_series(log_phi_minus),
        trunc=trunc,
        annulus=symbol.annulus,
    )


def eval_alpha(data: LogSymbolData, z):
    """Szegő function alpha: inside branch for |z| < 1, outside branch for |z| > 1."""
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(z_arr) - 1.0) < CIRCLE_EPS):
        raise BoundaryError("alpha is two-valued on the unit circle; pick a side", {"z": z})
    inside = np.abs(z_arr) < 1.0
    out = np.empty(z_arr.shape, dtype=complex)
    # each truncated series is only evaluated on its own side
    out[inside] = data.alpha_in(z_arr[inside])
    out[~inside] = data.alpha_out(z_arr[~inside])
    if z_arr.ndim == 0:
        return complex(out)
    return out


def alpha_taylor_at_zero(data: LogSymbolData, ell: int) -> complex:
    """alpha^{(ell)}(0) / ell!."""
    if ell < 0 or ell > data.trunc:
        raise RangeError(f"Taylor order {ell} outside [0, {data.trunc}]", {"ell": ell})
    return complex(data.alpha_inside[ell])


# Symbol families


def constant_symbol(value: ComplexLike = 1.0) -> Symbol:
    value = as_complex(value)
    if value == 0:
        rule = lambda idx: np.zeros(idx.shape, dtype=complex)
    else:
        rule = lambda idx: np.where(idx == 0, value, 0.0 + 0.0j)
    return Symbol(
        evaluator=lambda z: np.full(np.shape(z), value, dtype=complex),
        kind=SymbolKind.RATIONAL,
        name=f"const({value})",
        winding_hint=0 if value != 0 else None,
        coefficient_rule=rule,
        params={"value": value},
    )


def monomial_symbol(power: int, coeff: ComplexLike = 1.0) -> Symbol:
    coeff = as_complex(coeff)
    return Symbol(
        evaluator=lambda z: coeff * z ** power,
        kind=SymbolKind.RATIONAL,
        name=f"{coeff}*z^{power}",
        winding_hint=power,
        coefficient_rule=lambda idx: np.where(idx == power, coeff, 0.0 + 0.0j),
        params={"power": power, "coeff": coeff},
    )


def polynomial_symbol(coeffs: Sequence[ComplexLike], offset: int = 0, name: Optional[str] = None) -> Symbol:
    """sum_k coeffs[k] z^(k + offset) with exact coefficients."""
    values = np.array([as_complex(c) for c in coeffs], dtype=complex)
    if values.size == 0:
        raise ParameterError("polynomial symbol needs at least one coefficient")
    top = offset + values.size - 1

    def rule(idx):
        inside = (idx >= offset) & (idx <= top)
        return np.where(inside, values[np.clip(idx - offset, 0, values.size - 1)], 0.0 + 0.0j)

    return Symbol(
        evaluator=lambda z: z ** offset * np.polynomial.polynomial.polyval(z, values),
        kind=SymbolKind.RATIONAL,
        name=name or f"poly[{offset}..{top}]",
        annulus=(0.0, math.inf),
        coefficient_rule=rule,
        params={"offset": offset, "degree": top},
    )


def _pole_coefficients(idx: np.ndarray, location: complex, weight: complex) -> np.ndarray:
    """Coefficients of weight / (z - location)."""
    out = np.zeros(idx.shape, dtype=complex)
    if abs(location) > 1.0:
        mask = idx >= 0
        out[mask] = -weight * location ** (-(idx[mask] + 1).astype(float))
    else:
        mask = idx <= -1
        if location == 0:
            out[idx == -1] = weight
        else:
            out[mask] = weight * location ** (-(idx[mask] + 1).astype(float))
    return out


def rational_symbol(
    constant: ComplexLike = 0.0,
    linear: ComplexLike = 0.0,
    inverse: ComplexLike = 0.0,
    poles: Sequence[Tuple[ComplexLike, ComplexLike]] = (),
    name: Optional[str] = None,
) -> Symbol:
    """constant + linear*z + inverse/z + sum_j b_j / (z - c_j), with exact coefficients."""
    a0, a1, b0 = as_complex(constant), as_complex(linear), as_complex(inverse)
    pole_list = tuple((as_complex(c), as_complex(b)) for c, b in poles)
    for c, _ in pole_list:
        _check_pole(c)

    def evaluator(z):
        out = a0 + a1 * z + b0 / z
        for c, b in pole_list:
            out = out + b / (z - c)
        return out

    def rule(idx):
        out = np.where(idx == 0, a0, 0.0 + 0.0j) + np.where(idx == 1, a1, 0.0) + np.where(idx == -1, b0, 0.0)
        for c, b in pole_list:
            out = out + _pole_coefficients(idx, c, b)
        return out

    inside = [abs(c) for c, _ in pole_list if abs(c) < 1]
    outside = [abs(c) for c, _ in pole_list if abs(c) > 1]
    return Symbol(
        evaluator=evaluator,
        kind=SymbolKind.RATIONAL,
        name=name or "rational",
        poles=pole_list,
        annulus=(max(inside, default=0.0), min(outside, default=math.inf)),
        coefficient_rule=rule,
        params={"constant": a0, "linear": a1, "inverse": b0},
    )


def product_symbol(
    poles: Sequence[Tuple[ComplexLike, ComplexLike]],
    bulk: Symbol,
    reflected: bool = False,
) -> Symbol:
    """sum_j w_j / (z - c_j) times bulk (or times bulk(1/z) when reflected)."""
    rational = rational_symbol(poles=poles)
    factor = bulk.reflect() if reflected else bulk
    product = rational * factor
    return Symbol(
        evaluator=product.evaluator,
        kind=SymbolKind.PRODUCT,
        name=f"r*{'~' if reflected else ''}{bulk.name}",
        poles=rational.poles,
        annulus=_intersect(rational.annulus, factor.annulus),
        base=bulk,
        base_reflected=reflected,
    )


def exp_symbol(coeffs: Mapping[int, ComplexLike], name: Optional[str] = None) -> Symbol:
    """exp(sum_k t_k z^k) for finitely many k."""
    terms = {int(k): as_complex(v) for k, v in coeffs.items()}

    def evaluator(z):
        total = np.zeros(np.shape(z), dtype=complex)
        for k, t in terms.items():
            total = total + t * z ** k
        return np.exp(total)

    return Symbol(
        evaluator=evaluator,
        kind=SymbolKind.ANALYTIC,
        name=name or "exp(" + "+".join(f"{t}z^{k}" for k, t in sorted(terms.items())) + ")",
        winding_hint=0,
        params={"coeffs": terms},
    )


def ising_symbol(k: float) -> Symbol:
    """sqrt((1 - 1/(k z)) / (1 - z/k)) on the continuous principal branch."""
    k = float(k)
    if k <= 1.0:
        raise ParameterError(f"Ising diagonal symbol needs k > 1, got {k}")
    return Symbol(
        evaluator=lambda z: np.sqrt(1.0 - 1.0 / (k * z)) / np.sqrt(1.0 - z / k),
        kind=SymbolKind.ISING,
        name=f"ising(k={k})",
        annulus=(1.0 / k, k),
        winding_hint=0,
        params={"k": k},
    )


def jump_symbol(offset: ComplexLike = 0.0) -> Symbol:
    """g = +1 on Re z >= 0, -1 on Re z < 0, plus an optional constant offset."""
    offset = as_complex(offset)

    def rule(idx):
        j = idx.astype(float)
        safe = np.where(idx == 0, 1.0, j)
        out = np.where(idx == 0, 0.0, 2.0 * np.sin(j * np.pi / 2.0) / (np.pi * safe))
        # sin(j pi / 2) is exactly 0 or +-1 for integer j
        out = np.where(idx % 2 == 0, 0.0, out)
        return out + np.where(idx == 0, offset, 0.0)

    return Symbol(
        evaluator=lambda z: np.where(np.real(z) >= 0, 1.0 + offset, -1.0 + offset),
        kind=SymbolKind.JUMP,
        name="g" if offset == 0 else f"{offset}+g",
        coefficient_rule=rule,
        params={"offset": offset},
    )


def make_family(name: str, params: Optional[Mapping[str, Any]] = None, bulk: Optional[Symbol] = None) -> Symbol:
    """Build a symbol from a family name and parameters (the JSON config encoding)."""
    params = dict(params or {})
    if name == "constant":
        return constant_symbol(params.get("value", 1.0))
    if name == "monomial":
        return monomial_symbol(int(params.get("power", 1)), params.get("coeff", 1.0))
    if name == "exp":
        if "t" in params:
            t = as_complex(params["t"])
            return exp_symbol({1: t, -1: t}, name=f"exp({params['t']}(z+1/z))")
        return exp_symbol({int(k): v for k, v in params.get("coeffs", {}).items()})
    if name == "rational":
        return rational_symbol(
            params.get("constant", 0.0),
            params.get("linear", 0.0),
            params.get("inverse", 0.0),
            params.get("poles", ()),
        )
    if name == "ising-diagonal":
        return ising_symbol(params.get("k", 3.0))
    if name == "jump-g":
        return jump_symbol(params.get("offset", 0.0))
    if name in ("product", "rational-combo", "shifted"):
        if bulk is None:
            raise ParameterError(f"family {name!r} needs a bulk symbol")
        if name == "product":
            base = params.get("base", "phi")
            if base not in ("phi", "phi_tilde"):
                raise ParameterError(f"product base must be 'phi' or 'phi_tilde', got {base!r}")
            return product_symbol(params.get("poles", ()), bulk, reflected=base == "phi_tilde")
        if name == "shifted":
            return bulk.shift(int(params.get("power", 1)))
        # imported here: szego depends on this module
        from toeplitz_framework.szego import BorderSpec
        return BorderSpec.from_params(params).to_symbol(bulk)
    raise ParameterError(f"unknown symbol family {name!r}")
