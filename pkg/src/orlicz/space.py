"""Discretized sigma-finite measure spaces and functions living on them.

A space is a finite list of atoms (real point label, positive weight).
Counting measure and uniform grids over an interval are the two built-in
kinds; both carry an exhaustion chain of index sets whose union is the
whole atom list. Measurable functions are plain 1-D numpy arrays with one
value per atom, and families of them are grouped in :class:`FnFamily`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError


def _read_only(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=a.dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    """Finite atom list approximating a sigma-finite measure space.

    Attributes
    ----------
    labels : array of real point labels, one per atom (counting: 1..N,
        grid: cell midpoints). Labels feed point-dependent Young functions.
    weights : strictly positive atom measures.
    kind : "counting" or "grid".
    exhaustion : nondecreasing chain of index arrays whose last element
        covers every atom.
    """

    labels: np.ndarray
    weights: np.ndarray
    kind: str = "counting"
    exhaustion: tuple = ()

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if labels.ndim != 1 or weights.ndim != 1 or labels.size != weights.size:
            raise ConfigurationError("labels and weights must be 1-D arrays of equal length")
        if labels.size == 0:
            raise ConfigurationError("a measure space needs at least one atom")
        if not np.all(np.isfinite(labels)):
            raise ConfigurationError("atom labels must be finite")
        if not np.all(weights > 0):
            raise ConfigurationError("atom weights must be strictly positive")
        if self.kind not in ("counting", "grid"):
            raise ConfigurationError(f"unknown space kind {self.kind!r}")
        object.__setattr__(self, "labels", _read_only(labels))
        object.__setattr__(self, "weights", _read_only(weights))

        chain = self.exhaustion
        if not chain:
            chain = tuple(np.arange(m) for m in range(1, labels.size + 1))
        chain = tuple(self.validate_subset(z) for z in chain)
        previous: set = set()
        for z in chain:
            current = set(z.tolist())
            if not previous.issubset(current):
                raise ConfigurationError("exhaustion chain must be nondecreasing")
            previous = current
        if previous != set(range(labels.size)):
            raise ConfigurationError("exhaustion chain must end with every atom")
        object.__setattr__(self, "exhaustion", chain)

    @property
    def n_atoms(self) -> int:
        return self.labels.size

    @property
    def total_measure(self) -> float:
        return float(self.weights.sum())

    def measure(self, subset) -> float:
        """Total weight of an index set."""
        return float(self.weights[self.validate_subset(subset)].sum())

    def validate_subset(self, subset) -> np.ndarray:
        idx = np.asarray(subset, dtype=int).ravel()
        if idx.size and (idx.min() < 0 or idx.max() >= self.n_atoms):
            raise DomainError("atom index out of range")
        idx = _read_only(np.unique(idx))
        return idx

    def validate_fn(self, f) -> np.ndarray:
        values = np.asarray(f, dtype=float)
        if values.shape != (self.n_atoms,):
            raise ConfigurationError(
                f"function has {values.shape} values, space has {self.n_atoms} atoms"
            )
        return values

    def complement(self, subset) -> np.ndarray:
        return np.setdiff1d(np.arange(self.n_atoms), self.validate_subset(subset))

    def to_config(self) -> dict:
        if self.kind == "counting":
            return {"space": "counting", "n": self.n_atoms}
        h = float(self.weights[0])
        a = float(self.labels[0]) - h / 2.0
        b = float(self.labels[-1]) + h / 2.0
        return {"space": "grid", "a": a, "b": b, "cells": self.n_atoms}


def counting_space(n: int, exhaustion_steps: int | None = None) -> DiscreteMeasureSpace:
    """Counting measure on labels 1..n; exhaustion = prefixes {1..m}."""
    if n < 1:
        raise ConfigurationError("counting space needs n >= 1")
    labels = np.arange(1, n + 1, dtype=float)
    weights = np.ones(n)
    chain = _prefix_chain(n, exhaustion_steps)
    return DiscreteMeasureSpace(labels, weights, kind="counting", exhaustion=chain)


def grid_space(a: float, b: float, cells: int, exhaustion_steps: int = 16) -> DiscreteMeasureSpace:
    """Uniform partition of [a, b]; atoms at cell midpoints with weight = cell width."""
    if not (b > a):
        raise ConfigurationError("grid space needs b > a")
    if cells < 1:
        raise ConfigurationError("grid space needs at least one cell")
    h = (b - a) / cells
    labels = a + h * (np.arange(cells) + 0.5)
    weights = np.full(cells, h)
    chain = _prefix_chain(cells, exhaustion_steps)
    return DiscreteMeasureSpace(labels, weights, kind="grid", exhaustion=chain)


def _prefix_chain(n: int, steps: int | None) -> tuple:
    if steps is None or steps >= n:
        sizes = range(1, n + 1)
    else:
        if steps < 1:
            raise ConfigurationError("exhaustion_steps must be >= 1")
        sizes = sorted({int(math.ceil(n * m / steps)) for m in range(1, steps + 1)})
    return tuple(np.arange(size) for size in sizes)


@dataclass(frozen=True)
class FnFamily:
    """Nonempty ordered family of functions on a common space."""

    members: tuple = field(default=())
    name: str | None = None

    def __post_init__(self):
        if len(self.members) == 0:
            raise ConfigurationError("a function family must be nonempty")
        arrays = tuple(_read_only(np.asarray(m, dtype=float)) for m in self.members)
        length = arrays[0].size
        for m in arrays:
            if m.ndim != 1 or m.size != length:
                raise ConfigurationError("family members must be 1-D arrays of equal length")
        object.__setattr__(self, "members", arrays)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def matrix(self) -> np.ndarray:
        """Members stacked as rows."""
        return np.vstack(self.members)


def integrate(space: DiscreteMeasureSpace, f, subset=None) -> float:
    """Weighted sum of f over an index set (the whole space by default)."""
    values = space.validate_fn(f)
    if subset is None:
        return float(values @ space.weights)
    idx = space.validate_subset(subset)
    return float(values[idx] @ space.weights[idx])


def exceedance_indices(space: DiscreteMeasureSpace, f, threshold: float) -> np.ndarray:
    """Atoms where |f| exceeds the threshold strictly."""
    values = space.validate_fn(f)
    return np.nonzero(np.abs(values) > threshold)[0]


def exceedance_sets(space: DiscreteMeasureSpace, family: FnFamily, n_max: int | None = None):
    """Measures of B_n = {x : |f_n(x)| > n} for the first n_max members.

    Returns a list of (n, measure) pairs, n starting at 1.
    """
    if n_max is None:
        n_max = len(family)
    if n_max < 1 or n_max > len(family):
        raise PreconditionError(f"need at least {n_max} family members, have {len(family)}")
    out = []
    for n in range(1, n_max + 1):
        idx = exceedance_indices(space, family[n - 1], float(n))
        out.append((n, float(space.weights[idx].sum())))
    return out


def shrinking_sets(space: DiscreteMeasureSpace, count: int):
    """Decreasing chain of suffix index sets with measure halved at each step."""
    if count < 1:
        raise ConfigurationError("shrinking chain needs count >= 1")
    tail = np.cumsum(space.weights[::-1])[::-1]  # tail[i] = measure of atoms i..end
    total = space.total_measure
    chain = []
    for k in range(count):
        target = total / (2.0**k)
        inside = np.nonzero(tail <= target * (1.0 + 1e-12))[0]
        start = int(inside[0]) if inside.size else space.n_atoms
        chain.append(np.arange(start, space.n_atoms))
    return chain


def are_disjoint(family: FnFamily) -> bool:
    """True when at most one member is nonzero at every atom (exact zeros)."""
    support_count = (family.matrix != 0.0).sum(axis=0)
    return bool(np.all(support_count <= 1))
