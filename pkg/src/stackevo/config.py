"""Run configuration: defaults, JSON config files and their schema.

Precedence is defaults < config file < command-line flags.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields

import jsonschema

from stackevo.errors import ConfigError
from stackevo.evolution import EAConfig
from stackevo.genome import SearchBounds
from stackevo.primitives import catalog_names


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    label_col: str | int = -1
    train_frac: float = 0.8
    stratify: bool = False
    max_layers: int = 5
    max_nodes: int = 3
    primitives: tuple | None = None  # None means the whole catalog
    population: int = 200
    iterations: int = 10
    folds: int = 5
    seed: int = 0
    workers: int = 1
    out: str = "stackevo-out"
    plots: bool = True

    def bounds(self):
        allowed = tuple(self.primitives) if self.primitives else tuple(catalog_names())
        unknown = [p for p in allowed if p not in catalog_names()]
        if unknown:
            raise ConfigError(f"unknown primitives {unknown}; see `stackevo info primitives`")
        return SearchBounds(self.max_layers, self.max_nodes, allowed)

    def ea_config(self):
        return EAConfig(
            population_n=self.population,
            iterations_m=self.iterations,
            bounds=self.bounds(),
            cv_folds=self.folds,
            master_seed=self.seed,
            worker_count=self.workers,
        )

    def to_json(self):
        d = asdict(self)
        d["primitives"] = list(self.primitives) if self.primitives else None
        return d


def config_schema():
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "stackevo run configuration",
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "data": {"type": "string", "description": "path to the CSV dataset"},
            "label_col": {"type": ["string", "integer"], "description": "label column name or index"},
            "train_frac": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "stratify": {"type": "boolean"},
            "max_layers": {"type": "integer", "minimum": 1},
            "max_nodes": {"type": "integer", "minimum": 1},
            "primitives": {
                "type": ["array", "null"],
                "items": {"enum": catalog_names()},
                "minItems": 1,
                "uniqueItems": True,
            },
            "population": {"type": "integer", "minimum": 4, "multipleOf": 2},
            "iterations": {"type": "integer", "minimum": 0},
            "folds": {"type": "integer", "minimum": 2},
            "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            "workers": {"type": "integer", "minimum": 1},
            "out": {"type": "string"},
            "plots": {"type": "boolean"},
        },
    }


def validate(obj):
    try:
        jsonschema.validate(obj, config_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None


def load_config_file(path):
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    validate(obj)
    return obj


def resolve(file_values=None, flag_values=None):
    """Merge layers into a RunConfig; ``None`` flag values mean "not given"."""
    merged = {}
    for layer in (file_values or {}, flag_values or {}):
        merged.update({k: v for k, v in layer.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    extra = set(merged) - known
    if extra:
        raise ConfigError(f"unknown config keys {sorted(extra)}")
    if merged.get("primitives") is not None:
        merged["primitives"] = tuple(merged["primitives"])
    return RunConfig(**merged)
