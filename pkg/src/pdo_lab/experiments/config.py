"""JSON experiment configuration.

Schema (all keys except ``scenario`` optional)::

    {
      "scenario": "index-invariance",
      "seed": 0,
      "out": "pdo_lab_out",
      "workers": 1,
      "params": {"grid": [1, 3.14159, 256], "N_values": [256]},
      "tolerances": {"gap": 10.0}
    }

``params`` are scenario overrides; ``tolerances`` may only override keys the
scenario already declares. ``PDO_LAB_SEED`` in the environment replaces
``seed``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from ..symbols import CORPUS
from .registry import REGISTRY, TOLERANCES

__all__ = ["ConfigError", "ExperimentConfig", "SCHEMA", "load_config", "config_from_dict"]

SCHEMA = {
    "type": "object",
    "required": ["scenario"],
    "additionalProperties": False,
    "properties": {
        "scenario": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "out": {"type": "string"},
        "workers": {"type": "integer", "minimum": 1},
        "params": {
            "type": "object",
            "properties": {
                "grid": {"type": "array", "prefixItems": [{"enum": [1, 2]}, {"type": "number", "exclusiveMinimum": 0},
                                                          {"type": "integer", "minimum": 8}],
                         "minItems": 3, "maxItems": 3},
                "symbol": {"type": "string"},
                "count": {"type": "integer", "minimum": 1},
                "N_values": {"type": "array", "items": {"type": "integer", "minimum": 16}},
            },
        },
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "exclusiveMinimum": 0}},
    },
}


class ConfigError(ValueError):
    """Invalid configuration; maps to exit status 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    seed: int = 0
    out: str = "pdo_lab_out"
    workers: int = 1
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def merged_tolerances(self) -> dict[str, float]:
        return {**TOLERANCES[self.scenario], **self.tolerances}


def config_from_dict(raw: dict, env: dict | None = None) -> ExperimentConfig:
    env = os.environ if env is None else env
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config: {exc.message}") from None
    name = raw["scenario"]
    if name not in REGISTRY:
        raise ConfigError(f"unknown scenario {name!r}; known: {', '.join(sorted(REGISTRY))}")
    params = dict(raw.get("params", {}))
    if "symbol" in params and params["symbol"] not in CORPUS:
        raise ConfigError(f"unknown symbol {params['symbol']!r}")
    tols = dict(raw.get("tolerances", {}))
    unknown = set(tols) - set(TOLERANCES[name])
    if unknown:
        raise ConfigError(f"scenario {name!r} has no tolerance(s) {sorted(unknown)}")
    seed = raw.get("seed", 0)
    if env.get("PDO_LAB_SEED"):
        try:
            seed = int(env["PDO_LAB_SEED"])
        except ValueError:
            raise ConfigError(f"PDO_LAB_SEED must be an integer, got {env['PDO_LAB_SEED']!r}") from None
    return ExperimentConfig(name, seed, raw.get("out", "pdo_lab_out"), raw.get("workers", 1), params, tols)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_dict(raw)
