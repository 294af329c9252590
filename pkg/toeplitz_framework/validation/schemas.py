"""
JSON schemas for sweep configurations.

Complex numbers are written either as plain JSON numbers or as [re, im]
pairs. The schemas check the document shape; semantic checks (poles off
the circle, minimum sizes per determinant kind) happen when the config
model is built.
"""

COMPLEX_SCHEMA = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 2,
            "maxItems": 2,
        },
    ]
}

POLE_LIST_SCHEMA = {
    "type": "array",
    "items": {
        "type": "array",
        "items": COMPLEX_SCHEMA,
        "minItems": 2,
        "maxItems": 2,
    },
}

SYMBOL_FAMILIES = [
    "constant",
    "monomial",
    "exp",
    "rational",
    "rational-combo",
    "product",
    "shifted",
    "ising-diagonal",
    "jump-g",
]

SYMBOL_SPEC_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "SymbolSpec",
    "type": "object",
    "required": ["family"],
    "properties": {
        "family": {"type": "string", "enum": SYMBOL_FAMILIES},
        "params": {"type": "object"},
    },
    "additionalProperties": False,
}

DETERMINANT_KINDS = [
    "pure",
    "bordered",
    "two-bordered",
    "three-bordered",
    "semi-framed",
    "framed-M",
    "framed-N",
    "two-framed-K",
    "zphi-bordered",
    "z-inverse-bordered",
    "bordered-zl",
]

SWEEP_CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "SweepConfig",
    "type": "object",
    "required": ["symbol", "kind", "n_grid"],
    "properties": {
        "symbol": SYMBOL_SPEC_SCHEMA,
        "kind": {"type": "string", "enum": DETERMINANT_KINDS},
        "borders": {"type": "array", "items": SYMBOL_SPEC_SCHEMA},
        "corners": {"type": "array", "items": COMPLEX_SCHEMA},
        "variant": {"type": "string", "enum": ["E", "G", "H", "L"]},
        "ell": {"type": "integer", "minimum": 0},
        "n_grid": {
            "type": "object",
            "required": ["start", "stop"],
            "properties": {
                "start": {"type": "integer", "minimum": 0},
                "stop": {"type": "integer", "minimum": 1},
                "step": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "tolerances": {
            "type": "object",
            "properties": {
                "identity": {"type": "number", "exclusiveMinimum": 0},
                "dci": {"type": "number", "exclusiveMinimum": 0},
                "convergence": {"type": "number", "exclusiveMinimum": 0},
                "quadrature": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "quadrature": {
            "type": "object",
            "properties": {
                "start_nodes": {"type": "integer", "minimum": 16},
                "max_nodes": {"type": "integer", "minimum": 16},
            },
            "additionalProperties": False,
        },
        "identities": {"type": "array", "items": {"type": "string"}},
        "output": {"type": ["string", "null"]},
        "format": {"type": "string", "enum": ["csv", "json"]},
        "seed": {"type": "integer"},
        "workers": {"type": "integer", "minimum": 1},
        "fuzz_count": {"type": "integer", "minimum": 0},
        "degeneracy_floor": {"type": "number", "exclusiveMinimum": 0},
        "method": {"type": "string", "enum": ["quadrature", "coefficients"]},
        "bench_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "logging": {"type": "object"},
    },
    "additionalProperties": False,
}
