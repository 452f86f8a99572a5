"""Parsing of the JSON-compatible config fragments used by scenarios.

Fragment shapes (all plain JSON):

* space:  {"space": "counting", "n": 64}
          {"space": "grid", "a": 0.01, "b": 200, "cells": 20000}
* phi:    {"family": "power", "p": 2}
          {"family": "scaled_power", "c": 0.5, "p": 2}
          {"family": "power_log", "p": 2}
          {"family": "sum", "terms": [...]}
          {"family": "scaled", "outer": o, "inner": i, "base": {...}}
          {"family": "tabulated", "t": [...], "v": [...]}
          {"family": "weighted_power", "w": "inverse_square", "p": 2}
          {"family": "point_table", "youngs": [...]}   (one per atom)
          {"family": "scaled_combination", "base": {...},
           "outer": [...], "inner": [...]}
* family: {"values": [[...], ...]} | {"csv": "path"} |
          {"generator": "unit_vectors", "count": 16, ...}
* fn:     {"constant": 1.0} | {"values": [...]}
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import ConfigurationError
from .generators import make_family
from .phi import (
    Constant,
    GeneralizedPhi,
    PointTable,
    Power,
    PowerLog,
    ScaledCombination,
    ScaledPower,
    ScaledYoung,
    SumYoung,
    Tabulated,
    WeightedPower,
    YoungFunction,
)
from .space import DiscreteMeasureSpace, FnFamily, counting_space, grid_space

SCHEMA_VERSION = 1

_YOUNG_FAMILIES = ("power", "scaled_power", "power_log", "sum", "scaled", "tabulated")


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise ConfigurationError(f"{where}: missing field {key!r}")
    return cfg[key]


def parse_space(cfg: dict) -> DiscreteMeasureSpace:
    if not isinstance(cfg, dict):
        raise ConfigurationError("space: expected an object")
    kind = _require(cfg, "space", "space")
    if kind == "counting":
        return counting_space(int(_require(cfg, "n", "space")))
    if kind == "grid":
        return grid_space(
            float(_require(cfg, "a", "space")),
            float(_require(cfg, "b", "space")),
            int(_require(cfg, "cells", "space")),
            exhaustion_steps=int(cfg.get("exhaustion_steps", 16)),
        )
    raise ConfigurationError(f"space: unknown kind {kind!r}")


def parse_young(cfg: dict, where: str = "phi") -> YoungFunction:
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"{where}: expected an object")
    family = _require(cfg, "family", where)
    if family == "power":
        return Power(p=float(_require(cfg, "p", where)))
    if family == "scaled_power":
        return ScaledPower(c=float(_require(cfg, "c", where)), p=float(_require(cfg, "p", where)))
    if family == "power_log":
        return PowerLog(p=float(_require(cfg, "p", where)))
    if family == "sum":
        terms = _require(cfg, "terms", where)
        return SumYoung(tuple(parse_young(term, f"{where}.terms[{i}]") for i, term in enumerate(terms)))
    if family == "scaled":
        return ScaledYoung(
            base=parse_young(_require(cfg, "base", where), f"{where}.base"),
            outer=float(_require(cfg, "outer", where)),
            inner=float(_require(cfg, "inner", where)),
        )
    if family == "tabulated":
        return Tabulated(_require(cfg, "t", where), _require(cfg, "v", where))
    raise ConfigurationError(f"{where}: unknown Young family {family!r}")


def parse_phi(cfg: dict, space: DiscreteMeasureSpace | None = None, where: str = "phi") -> GeneralizedPhi:
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"{where}: expected an object")
    family = _require(cfg, "family", where)
    if family in _YOUNG_FAMILIES:
        return Constant(parse_young(cfg, where))
    if family == "weighted_power":
        return WeightedPower(_require(cfg, "w", where), _require(cfg, "p", where))
    if family == "point_table":
        if space is None:
            raise ConfigurationError(f"{where}: point_table needs a space to bind labels")
        youngs = _require(cfg, "youngs", where)
        if len(youngs) != space.n_atoms:
            raise ConfigurationError(
                f"{where}: point_table has {len(youngs)} entries for {space.n_atoms} atoms"
            )
        return PointTable(
            space.labels,
            tuple(parse_young(y, f"{where}.youngs[{i}]") for i, y in enumerate(youngs)),
        )
    if family == "scaled_combination":
        return ScaledCombination(
            parse_phi(_require(cfg, "base", where), space, f"{where}.base"),
            outer=_require(cfg, "outer", where),
            inner=_require(cfg, "inner", where),
        )
    raise ConfigurationError(f"{where}: unknown family {family!r}")


def parse_fn(cfg, space: DiscreteMeasureSpace, where: str = "fn") -> np.ndarray:
    if isinstance(cfg, dict) and "constant" in cfg:
        return np.full(space.n_atoms, float(cfg["constant"]))
    if isinstance(cfg, dict) and "values" in cfg:
        return space.validate_fn(cfg["values"])
    raise ConfigurationError(f"{where}: expected {{'constant': c}} or {{'values': [...]}}")


def _load_family_csv(path, space: DiscreteMeasureSpace) -> FnFamily:
    rows = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        for row in reader:
            if not row:
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                if rows:
                    raise ConfigurationError(f"family.csv: non-numeric row {row!r}")
                continue  # header row
    if not rows:
        raise ConfigurationError("family.csv: no numeric rows found")
    matrix = np.asarray(rows, dtype=float)  # one row per atom, one column per member
    if matrix.shape[0] != space.n_atoms:
        raise ConfigurationError(
            f"family.csv: {matrix.shape[0]} rows for {space.n_atoms} atoms"
        )
    return FnFamily(tuple(matrix[:, j] for j in range(matrix.shape[1])))


def parse_family(
    cfg: dict,
    space: DiscreteMeasureSpace,
    gp: GeneralizedPhi,
    base_dir: str = ".",
    seed_override: int | None = None,
) -> FnFamily:
    if not isinstance(cfg, dict):
        raise ConfigurationError("family: expected an object")
    if "values" in cfg:
        members = cfg["values"]
        if not members:
            raise ConfigurationError(
                "family.values: must be nonempty (profiles require a bounded nonempty "
                "family; on atomic spaces boundedness is an essential hypothesis)"
            )
        return FnFamily(
            tuple(space.validate_fn(member) for member in members),
            name=cfg.get("name"),
        )
    if "csv" in cfg:
        import os

        return _load_family_csv(os.path.join(base_dir, cfg["csv"]), space)
    if "generator" in cfg:
        params = {
            k: v for k, v in cfg.items() if k not in ("generator", "name")
        }
        if seed_override is not None and "seed" in params:
            params["seed"] = seed_override
        return make_family(cfg["generator"], space, gp, params)
    raise ConfigurationError("family: expected 'values', 'csv' or 'generator'")
