"""Run configuration: a single JSON document, schema-validated up front.

Unknown keys are rejected so typos fail loudly before any computation.
The config hash (sha256 of the canonical JSON) keys artifacts and the run
manifest.
"""

from __future__ import annotations

import copy
import hashlib
import json

import jsonschema

_NUMBER = {"type": "number"}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

COEFFICIENT_KEYS = ("J0", "J1", "U0", "U1", "U01", "E0", "E1")

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "bath": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer", "minimum": 1},
                "coefficients": {
                    "oneOf": [
                        {"const": "solve"},
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "properties": {k: _NUMBER for k in COEFFICIENT_KEYS},
                            "required": list(COEFFICIENT_KEYS),
                        },
                    ]
                },
                "g_B": _NUMBER,
            },
            "required": ["N", "coefficients"],
        },
        "potential": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "barrier_height": {"type": "number", "minimum": 0},
                "barrier_width": _POSITIVE,
                "width_convention": {"enum": ["intensity", "stddev"]},
                "x_min": _NUMBER,
                "x_max": _NUMBER,
                "n_points": {"type": "integer", "minimum": 3},
            },
        },
        "qubit": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "delta": _POSITIVE,
                "initial_state": {"enum": ["ground", "plus"]},
            },
        },
        "coupling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "g": {"type": "number", "minimum": 0},
                "form": {"enum": ["full", "sigma_x", "sigma_z"]},
                "observable": {"type": "string"},
            },
        },
        "thermo": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "delta_window": _POSITIVE,
                "n_grid": {"type": "integer", "minimum": 10},
            },
        },
        "eth": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "observable": {"type": "string"},
                "n_bins": {"type": "integer", "minimum": 4},
                "omega_max": _POSITIVE,
                "smooth_window": _POSITIVE,
                "min_states": {"type": "integer", "minimum": 3},
            },
        },
        "dynamics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "e_target": _NUMBER,
                "e_target_per_particle": _NUMBER,
                "t_max": _POSITIVE,
                "n_steps": {"type": "integer", "minimum": 2},
                "method": {"enum": ["spectral", "krylov", "auto"]},
                "label": {"type": "string"},
            },
        },
        "master": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["thermalizing", "dephasing"]},
                "beta": _NUMBER,
                "thermal_ratio": _POSITIVE,
                "gamma": {"type": "number", "minimum": 0},
                "delta_shift": {"type": "number", "minimum": 0},
                "s_zero": {"type": "number", "minimum": 0},
                "t_max": _POSITIVE,
                "n_steps": {"type": "integer", "minimum": 2},
            },
        },
        "seed": {"type": "integer"},
    },
    "required": ["bath"],
}

DEFAULTS = {
    "bath": {"N": 20, "coefficients": "solve", "g_B": 0.3},
    "potential": {
        "barrier_height": 10.0,
        "barrier_width": 0.1,
        "width_convention": "intensity",
        "x_min": -8.0,
        "x_max": 8.0,
        "n_points": 2001,
    },
    "qubit": {"delta": 1.0, "initial_state": "plus"},
    "coupling": {"g": 0.2, "form": "full", "observable": "n_L0"},
    "thermo": {"delta_window": 0.5, "n_grid": 200},
    "eth": {
        "observable": "n_L0",
        "n_bins": 60,
        "omega_max": 6.0,
        "smooth_window": 0.5,
        "min_states": 31,
    },
    "dynamics": {
        "e_target_per_particle": 3.0,
        "t_max": 4000.0,
        "n_steps": 500,
        "method": "auto",
        "label": "",
    },
    "master": {
        "mode": "thermalizing",
        "thermal_ratio": 4.0,
        "gamma": 0.1,
        "delta_shift": 0.5,
        "s_zero": 0.5,
        "t_max": 200.0,
        "n_steps": 2000,
    },
    "seed": 0,
}


class ConfigError(ValueError):
    pass


def validate_config(raw: dict) -> dict:
    """Validate against the schema and merge with defaults."""
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message} (at {'/'.join(map(str, exc.path))})")
    merged = copy.deepcopy(DEFAULTS)
    for section, value in raw.items():
        if isinstance(value, dict):
            merged[section].update(value)
        else:
            merged[section] = value
    dyn = merged["dynamics"]
    if "e_target" in dyn and "e_target_per_particle" in dyn:
        raise ConfigError("specify dynamics.e_target or e_target_per_particle, not both")
    return merged


def load_config(path) -> dict:
    with open(path) as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}")
    return validate_config(raw)


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def e_target_of(config: dict) -> float:
    dyn = config["dynamics"]
    if "e_target" in dyn:
        return float(dyn["e_target"])
    return float(dyn["e_target_per_particle"]) * config["bath"]["N"]
