"""
Sweep configuration.

A config document (JSON or YAML) is checked against the JSON schema first,
then parsed into pydantic models, and finally materialized: symbols are
built, border parameters parsed and counts checked against the
determinant kind. Every failure surfaces as a ConfigurationError.
"""

import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from toeplitz_framework.core.exceptions import ConfigurationError, ToeplitzError
from toeplitz_framework.symbols import Symbol, as_complex, make_family, rational_symbol
from toeplitz_framework.szego import BorderSpec
from toeplitz_framework.validation.schema_validator import validate_sweep_config

logger = logging.getLogger(__name__)

# smallest admissible n and the number of border symbols / corners per kind
KIND_LAYOUT: Dict[str, Tuple[int, int, int]] = {
    "pure": (1, 0, 0),
    "bordered": (2, 1, 0),
    "two-bordered": (3, 2, 0),
    "three-bordered": (4, 3, 0),
    "semi-framed": (1, 2, 1),
    "framed-M": (0, 4, 4),
    "framed-N": (0, 4, 4),
    "two-framed-K": (0, 8, 8),
    "zphi-bordered": (1, 1, 0),
    "z-inverse-bordered": (2, 1, 0),
    "bordered-zl": (1, 0, 0),
}

# kinds whose border must be given as q1 phi + q2 parameters
BORDER_SPEC_KINDS = {"two-bordered", "zphi-bordered", "z-inverse-bordered"}

DEFAULT_BORDERS = (
    {"a0": 1.0, "a0_hat": 0.4, "poles": [2.0, 0.5], "b": [0.5, 0.2], "b_hat": [0.3, -0.1]},
    {"a1": 0.7, "b0": 0.2, "a1_hat": 0.3, "poles": [-3.0], "b": [0.1], "b_hat": [0.6]},
    {"a0": -0.5, "a0_hat": 1.0, "poles": [2.5], "b": [0.25], "b_hat": [0.4]},
)

DEFAULT_FRAMES = (
    ((2.5, 0.4),),
    ((1.8, 1.0), (0.4, 0.5)),
    ((3.0, 0.8), (-0.5, 0.3)),
    ((-2.2, 0.6),),
    ((2.0, 0.3),),
    ((-1.6, 0.7),),
    ((2.4, -0.5), (0.3, 0.2)),
    ((1.5, 0.9),),
)

DEFAULT_CORNERS = (1.0, 0.5, 0.8, -0.3, 0.6, -0.2, 1.1, 0.4)


class SymbolSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    family: str
    params: Dict[str, Any] = Field(default_factory=dict)


class NGrid(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    start: int = Field(ge=0)
    stop: int = Field(ge=0)
    step: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _nonempty(self) -> "NGrid":
        if self.stop < self.start:
            raise ValueError(f"n-grid is empty: stop {self.stop} < start {self.start}")
        return self

    @property
    def values(self) -> List[int]:
        return list(range(self.start, self.stop + 1, self.step))


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    identity: float = Field(default=1e-8, gt=0)
    dci: float = Field(default=1e-10, gt=0)
    convergence: float = Field(default=1e-4, gt=0)
    quadrature: float = Field(default=1e-6, gt=0)


class QuadratureSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start_nodes: int = Field(default=512, ge=16)
    max_nodes: int = Field(default=4096, ge=16)


class SweepConfig(BaseModel):
    """Parsed sweep configuration; field names mirror the JSON document."""

    model_config = ConfigDict(extra="forbid")

    symbol: SymbolSpec
    kind: str
    n_grid: NGrid
    borders: List[SymbolSpec] = Field(default_factory=list)
    corners: List[Union[float, List[float]]] = Field(default_factory=list)
    variant: Literal["E", "G", "H", "L"] = "H"
    ell: int = Field(default=0, ge=0)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    identities: Optional[List[str]] = None
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    seed: int = 0
    workers: int = Field(default=1, ge=1)
    fuzz_count: int = Field(default=4, ge=0)
    degeneracy_floor: float = Field(default=1e-8, gt=0)
    method: Literal["quadrature", "coefficients"] = "quadrature"
    bench_sizes: Optional[List[int]] = None
    logging: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_kind(self) -> "SweepConfig":
        if self.kind not in KIND_LAYOUT:
            raise ValueError(f"unknown determinant kind {self.kind!r}")
        minimum, n_borders, n_corners = KIND_LAYOUT[self.kind]
        if self.n_grid.start < minimum:
            raise ValueError(f"{self.kind} needs n >= {minimum}, grid starts at {self.n_grid.start}")
        if len(self.borders) not in (0, n_borders):
            raise ValueError(f"{self.kind} takes {n_borders} border symbols, got {len(self.borders)}")
        if len(self.corners) not in (0, n_corners):
            raise ValueError(f"{self.kind} takes {n_corners} corners, got {len(self.corners)}")
        return self

    def build(self) -> "SweepSetup":
        """Materialize symbols; construction errors become ConfigurationError."""
        try:
            return _build_setup(self)
        except ToeplitzError as exc:
            raise ConfigurationError(f"invalid sweep configuration: {exc}", {"cause": exc.to_dict()}) from exc


@dataclass(frozen=True)
class SweepSetup:
    """A config together with the symbols it describes."""

    config: SweepConfig
    phi: Symbol
    borders: Tuple[Symbol, ...]
    border_specs: Tuple[Optional[BorderSpec], ...]
    frames: Tuple[Symbol, ...]
    corners: Tuple[complex, ...]

    @property
    def n_values(self) -> List[int]:
        return self.config.n_grid.values

    def border(self, index: int) -> Symbol:
        return self.borders[index]

    def border_spec(self, index: int) -> BorderSpec:
        spec = self.border_specs[index]
        if spec is None:
            raise ConfigurationError(
                f"border {index} must be a rational-combo family for {self.config.kind}",
                {"kind": self.config.kind},
            )
        return spec


def _build_setup(config: SweepConfig) -> SweepSetup:
    phi = make_family(config.symbol.family, config.symbol.params)
    framed = config.kind in ("semi-framed", "framed-M", "framed-N", "two-framed-K")

    if config.borders and not framed:
        specs = tuple(
            BorderSpec.from_params(b.params) if b.family == "rational-combo" else None for b in config.borders
        )
        borders = tuple(make_family(b.family, b.params, bulk=phi) for b in config.borders)
    else:
        specs, borders = (), ()
    # identity suites use up to three borders; pad with the defaults
    for params in DEFAULT_BORDERS[len(specs):]:
        spec = BorderSpec.from_params(params)
        specs += (spec,)
        borders += (spec.to_symbol(phi),)
    if config.kind in BORDER_SPEC_KINDS and any(s is None for s in specs[: KIND_LAYOUT[config.kind][1]]):
        raise ConfigurationError(f"{config.kind} borders must use the rational-combo family")

    frames = tuple(make_family(b.family, b.params, bulk=phi) for b in config.borders) if framed else ()
    frames += tuple(
        rational_symbol(poles=poles, name=f"frame{k}") for k, poles in enumerate(DEFAULT_FRAMES[len(frames):], len(frames))
    )
    corners = tuple(as_complex(c) for c in config.corners)
    corners += DEFAULT_CORNERS[len(corners):]
    logger.debug("built sweep setup: symbol=%s kind=%s", phi.name, config.kind)
    return SweepSetup(config, phi, borders, specs, frames, tuple(complex(c) for c in corners))


def read_document(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise ConfigurationError(f"config file not found: {path}", {"path": path})
    with open(path, "r") as f:
        text = f.read()
    try:
        if path.endswith((".yaml", ".yml")):
            document = yaml.safe_load(text)
        else:
            document = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}", {"path": path}) from exc
    if not isinstance(document, dict):
        raise ConfigurationError(f"{path} does not hold a mapping", {"path": path})
    return document


def parse_config(document: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None) -> SweepConfig:
    """Schema-check and parse a config document; overrides replace top-level fields."""
    document = dict(document)
    document.update({k: v for k, v in (overrides or {}).items() if v is not None})
    validate_sweep_config(document)
    try:
        return SweepConfig.model_validate(document)
    except ValidationError as exc:
        errors = [f"{'/'.join(map(str, e['loc'])) or '<root>'}: {e['msg']}" for e in exc.errors()]
        raise ConfigurationError(f"invalid sweep configuration: {'; '.join(errors)}", {"errors": errors}) from exc


def load_config(path: str, overrides: Optional[Mapping[str, Any]] = None) -> SweepSetup:
    """Read, validate and materialize a sweep configuration file."""
    config = parse_config(read_document(path), overrides)
    logger.info("loaded sweep config %s (kind=%s, n=%s..%s)", path, config.kind, config.n_grid.start, config.n_grid.stop)
    return config.build()
