"""Young functions, point-indexed families of them, and structural checks.

A Young function here is a finite-valued convex nondecreasing function with
value 0 at 0, given either in closed parametric form or as a convex table
with linear interpolation. A generalized family attaches one Young function
to every atom label of a companion measure space. The checks in this module
(doubling constant, N-function limits, uniformity in the point variable,
"increases uniformly more rapidly") are grid verdicts with witness values,
never claims about true limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .space import DiscreteMeasureSpace

SKIP_THRESHOLD = 1e-300

DEFAULT_T_GRID_SMALL = np.geomspace(1e-6, 1e-2, 13)
DEFAULT_T_GRID_LARGE = np.geomspace(10.0, 1e3, 13)
DEFAULT_UMR_T_GRID = np.geomspace(1e-6, 1e3, 241)
DEFAULT_DELTA_GRID = 2.0 ** -np.arange(1, 31, dtype=float)


def _as_nonneg(t, name: str = "t") -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be nonnegative")
    return arr


def _maybe_scalar(a):
    return float(a) if np.ndim(a) == 0 else a


# ---------------------------------------------------------------------------
# Young functions
# ---------------------------------------------------------------------------


class YoungFunction:
    """Convex, nondecreasing, finite-valued function with value 0 at 0."""

    def __call__(self, t):
        raise NotImplementedError

    def right_derivative(self, t):
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Power(YoungFunction):
    """t ** p with p >= 1."""

    p: float

    def __post_init__(self):
        if not self.p >= 1.0:
            raise ConfigurationError("power family needs p >= 1")

    def __call__(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return _maybe_scalar(t**self.p)

    def right_derivative(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return _maybe_scalar(self.p * t ** (self.p - 1.0))

    def to_config(self) -> dict:
        return {"family": "power", "p": self.p}


@dataclass(frozen=True)
class ScaledPower(YoungFunction):
    """c * t ** p with c > 0, p >= 1."""

    c: float
    p: float

    def __post_init__(self):
        if not self.c > 0.0:
            raise ConfigurationError("scaled_power family needs c > 0")
        if not self.p >= 1.0:
            raise ConfigurationError("scaled_power family needs p >= 1")

    def __call__(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return _maybe_scalar(self.c * t**self.p)

    def right_derivative(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return _maybe_scalar(self.c * self.p * t ** (self.p - 1.0))

    def to_config(self) -> dict:
        return {"family": "scaled_power", "c": self.c, "p": self.p}


@dataclass(frozen=True)
class PowerLog(YoungFunction):
    """t ** p * log(1 + t) with p > 1."""

    p: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise ConfigurationError("power_log family needs p > 1")

    def __call__(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return _maybe_scalar(t**self.p * np.log1p(t))

    def right_derivative(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return _maybe_scalar(
                self.p * t ** (self.p - 1.0) * np.log1p(t) + t**self.p / (1.0 + t)
            )

    def to_config(self) -> dict:
        return {"family": "power_log", "p": self.p}


@dataclass(frozen=True)
class SumYoung(YoungFunction):
    """Pointwise sum of Young functions."""

    terms: tuple

    def __post_init__(self):
        if len(self.terms) < 1:
            raise ConfigurationError("sum family needs at least one term")
        for term in self.terms:
            if not isinstance(term, YoungFunction):
                raise ConfigurationError("sum terms must be Young functions")
        object.__setattr__(self, "terms", tuple(self.terms))

    def __call__(self, t):
        t = _as_nonneg(t)
        total = self.terms[0](t)
        for term in self.terms[1:]:
            total = total + term(t)
        return _maybe_scalar(total)

    def right_derivative(self, t):
        t = _as_nonneg(t)
        total = self.terms[0].right_derivative(t)
        for term in self.terms[1:]:
            total = total + term.right_derivative(t)
        return _maybe_scalar(total)

    def to_config(self) -> dict:
        return {"family": "sum", "terms": [term.to_config() for term in self.terms]}


@dataclass(frozen=True)
class ScaledYoung(YoungFunction):
    """outer * base(inner * t) with outer, inner > 0; convexity is preserved."""

    base: YoungFunction
    outer: float
    inner: float

    def __post_init__(self):
        if not (self.outer > 0.0 and self.inner > 0.0):
            raise ConfigurationError("scaled family needs outer > 0 and inner > 0")

    def __call__(self, t):
        t = _as_nonneg(t)
        return _maybe_scalar(self.outer * np.asarray(self.base(self.inner * t)))

    def right_derivative(self, t):
        t = _as_nonneg(t)
        return _maybe_scalar(
            self.outer * self.inner * np.asarray(self.base.right_derivative(self.inner * t))
        )

    def to_config(self) -> dict:
        return {
            "family": "scaled",
            "outer": self.outer,
            "inner": self.inner,
            "base": self.base.to_config(),
        }


class Tabulated(YoungFunction):
    """Convex table with linear interpolation and last-slope extrapolation.

    The grid must increase starting at 0, the values must be 0 at 0,
    nondecreasing and convex (nondecreasing chord slopes).
    """

    def __init__(self, grid, values):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or values.ndim != 1 or grid.size != values.size:
            raise ConfigurationError("tabulated family needs matching 1-D grid and values")
        if grid.size < 2:
            raise ConfigurationError("tabulated family needs at least two nodes")
        if grid[0] != 0.0:
            raise ConfigurationError("tabulated grid must start at 0")
        if np.any(np.diff(grid) <= 0):
            raise ConfigurationError("tabulated grid must be strictly increasing")
        if values[0] != 0.0:
            raise ConfigurationError("tabulated values must start at 0")
        if np.any(np.diff(values) < 0):
            raise ConfigurationError("tabulated values must be nondecreasing")
        slopes = np.diff(values) / np.diff(grid)
        if np.any(np.diff(slopes) < -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))):
            raise ConfigurationError("tabulated values must be convex")
        self.grid = grid
        self.values = values
        self.grid.setflags(write=False)
        self.values.setflags(write=False)
        self._last_slope = float(slopes[-1]) if slopes.size else 0.0

    def __call__(self, t):
        t = _as_nonneg(t)
        out = np.interp(t, self.grid, self.values)
        over = t > self.grid[-1]
        if np.any(over):
            out = np.where(over, self.values[-1] + self._last_slope * (t - self.grid[-1]), out)
        return _maybe_scalar(out)

    def right_derivative(self, t):
        # forward difference; at a node this picks the right-hand slope
        t = _as_nonneg(t)
        h = 1e-6 * np.maximum(1.0, t)
        return _maybe_scalar((np.asarray(self(t + h)) - np.asarray(self(t))) / h)

    def to_config(self) -> dict:
        return {"family": "tabulated", "t": self.grid.tolist(), "v": self.values.tolist()}

    def __repr__(self):
        return f"Tabulated(nodes={self.grid.size}, t_max={self.grid[-1]!r})"


# ---------------------------------------------------------------------------
# Generalized families: one Young function per atom label
# ---------------------------------------------------------------------------


class GeneralizedPhi:
    """Rule mapping an atom label x to a Young function phi(x, .)."""

    def value(self, x, t):
        raise NotImplementedError

    def right_derivative(self, x, t):
        raise NotImplementedError

    def young_at(self, x) -> YoungFunction:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(GeneralizedPhi):
    """The same Young function at every point."""

    young: YoungFunction

    def value(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        return _maybe_scalar(np.broadcast_to(np.asarray(self.young(tb)), xb.shape))

    def right_derivative(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        return _maybe_scalar(np.broadcast_to(np.asarray(self.young.right_derivative(tb)), xb.shape))

    def young_at(self, x) -> YoungFunction:
        return self.young

    def to_config(self) -> dict:
        return self.young.to_config()


NAMED_WEIGHTS = {
    "one": lambda x: np.ones_like(np.asarray(x, dtype=float)),
    "identity": lambda x: np.asarray(x, dtype=float),
    "inverse_square": lambda x: 1.0 / np.asarray(x, dtype=float) ** 2,
}


class WeightedPower(GeneralizedPhi):
    """phi(x, t) = w(x) * t ** p(x) with w > 0 and p >= 1.

    `weight` may be a positive number, the name of a registered weight
    function, or a callable; `exponent` may be a number or a callable.
    Only named/number forms survive a config round trip.
    """

    def __init__(self, weight, exponent):
        self._weight_spec = weight
        self._exponent_spec = exponent
        if callable(weight):
            self._w = weight
        elif isinstance(weight, str):
            if weight not in NAMED_WEIGHTS:
                raise ConfigurationError(f"unknown weight name {weight!r}")
            self._w = NAMED_WEIGHTS[weight]
        else:
            w0 = float(weight)
            if not w0 > 0:
                raise ConfigurationError("constant weight must be positive")
            self._w = lambda x: np.full_like(np.asarray(x, dtype=float), w0)
        if callable(exponent):
            self._p = exponent
        else:
            p0 = float(exponent)
            if not p0 >= 1.0:
                raise ConfigurationError("exponent must satisfy p >= 1")
            self._p = lambda x: np.full_like(np.asarray(x, dtype=float), p0)

    def _wp(self, xb):
        w = np.asarray(self._w(xb), dtype=float)
        p = np.asarray(self._p(xb), dtype=float)
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ConfigurationError("weight function must be finite and positive on the atoms")
        if np.any(p < 1.0):
            raise ConfigurationError("exponent function must satisfy p(x) >= 1 on the atoms")
        return w, p

    def value(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        w, p = self._wp(xb)
        with np.errstate(over="ignore"):
            return _maybe_scalar(w * tb**p)

    def right_derivative(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        w, p = self._wp(xb)
        with np.errstate(over="ignore"):
            return _maybe_scalar(w * p * tb ** (p - 1.0))

    def young_at(self, x) -> YoungFunction:
        x0 = np.asarray(x, dtype=float)
        w, p = self._wp(x0)
        return ScaledPower(c=float(w), p=float(p))

    def to_config(self) -> dict:
        if callable(self._weight_spec) or callable(self._exponent_spec):
            raise ConfigurationError("weighted_power built from raw callables has no config form")
        return {"family": "weighted_power", "w": self._weight_spec, "p": self._exponent_spec}

    def __repr__(self):
        return f"WeightedPower(w={self._weight_spec!r}, p={self._exponent_spec!r})"


class PointTable(GeneralizedPhi):
    """Explicit Young function per atom label."""

    def __init__(self, labels, youngs):
        labels = np.asarray(labels, dtype=float)
        youngs = tuple(youngs)
        if labels.ndim != 1 or labels.size != len(youngs):
            raise ConfigurationError("point table needs one Young function per label")
        if np.any(np.diff(labels) <= 0):
            raise ConfigurationError("point table labels must be strictly increasing")
        for young in youngs:
            if not isinstance(young, YoungFunction):
                raise ConfigurationError("point table entries must be Young functions")
        self.labels = labels
        self.labels.setflags(write=False)
        self.youngs = youngs

    def _resolve_mask(self, xb):
        masks = []
        resolved = np.zeros(xb.shape, dtype=bool)
        for label in self.labels:
            mask = np.abs(xb - label) <= 1e-9 * max(1.0, abs(label))
            masks.append(mask)
            resolved |= mask
        if not resolved.all():
            bad = np.asarray(xb)[~resolved].ravel()
            raise ConfigurationError(f"atom label {bad[0]!r} not resolved by the point table")
        return masks

    def value(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        xb = np.atleast_1d(xb)
        tb = np.atleast_1d(tb)
        out = np.empty(xb.shape)
        for mask, young in zip(self._resolve_mask(xb), self.youngs):
            if mask.any():
                out[mask] = np.asarray(young(tb[mask]))
        return _maybe_scalar(out[()] if np.ndim(x) or np.ndim(t) else out[0])

    def right_derivative(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        xb = np.atleast_1d(xb)
        tb = np.atleast_1d(tb)
        out = np.empty(xb.shape)
        for mask, young in zip(self._resolve_mask(xb), self.youngs):
            if mask.any():
                out[mask] = np.asarray(young.right_derivative(tb[mask]))
        return _maybe_scalar(out[()] if np.ndim(x) or np.ndim(t) else out[0])

    def young_at(self, x) -> YoungFunction:
        x0 = float(np.asarray(x, dtype=float))
        hits = np.nonzero(np.abs(self.labels - x0) <= 1e-9 * max(1.0, abs(x0)))[0]
        if hits.size == 0:
            raise ConfigurationError(f"atom label {x0!r} not resolved by the point table")
        return self.youngs[int(hits[0])]

    def to_config(self) -> dict:
        return {"family": "point_table", "youngs": [y.to_config() for y in self.youngs]}

    def __repr__(self):
        return f"PointTable(n={len(self.youngs)})"


class ScaledCombination(GeneralizedPhi):
    """sum_n outer_n * base(x, inner_n * t) over a finite list of terms."""

    def __init__(self, base: GeneralizedPhi, outer, inner):
        outer = np.asarray(outer, dtype=float)
        inner = np.asarray(inner, dtype=float)
        if outer.ndim != 1 or inner.ndim != 1 or outer.size != inner.size or outer.size == 0:
            raise ConfigurationError("scaled combination needs matching nonempty coefficient lists")
        if np.any(outer <= 0) or np.any(inner <= 0):
            raise ConfigurationError("scaled combination coefficients must be positive")
        self.base = base
        self.outer = outer
        self.inner = inner
        self.outer.setflags(write=False)
        self.inner.setflags(write=False)

    def value(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        total = np.zeros(xb.shape)
        for o, i in zip(self.outer, self.inner):
            total = total + o * np.asarray(self.base.value(xb, i * tb))
        return _maybe_scalar(total)

    def right_derivative(self, x, t):
        xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), _as_nonneg(t))
        total = np.zeros(xb.shape)
        for o, i in zip(self.outer, self.inner):
            total = total + o * i * np.asarray(self.base.right_derivative(xb, i * tb))
        return _maybe_scalar(total)

    def young_at(self, x) -> YoungFunction:
        base_young = self.base.young_at(x)
        return SumYoung(
            tuple(
                ScaledYoung(base_young, outer=float(o), inner=float(i))
                for o, i in zip(self.outer, self.inner)
            )
        )

    def to_config(self) -> dict:
        return {
            "family": "scaled_combination",
            "base": self.base.to_config(),
            "outer": self.outer.tolist(),
            "inner": self.inner.tolist(),
        }

    def __repr__(self):
        return f"ScaledCombination(base={self.base!r}, terms={self.outer.size})"


# ---------------------------------------------------------------------------
# Structural property checks (grid verdicts with witnesses)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    """Grid-scale verdicts on the structural hypotheses, with witnesses.

    ``delta2_constant`` is the largest observed ratio phi(x, 2t)/phi(x, t);
    ``math.inf`` means the ratio is unbounded on the tested grid.
    ``nabla2_constant`` is the smallest observed ratio (an estimator only;
    no duality claim is attached to it). Every boolean verdict is grid
    relative and justified by the stored witness numbers.
    """

    delta2_constant: float
    nabla2_constant: float
    delta2_skipped: tuple
    delta2_skipped_count: int
    constrained_ok: bool
    sup_phi_at_small_t: float
    inf_phi_at_large_t: float
    n_function_small_ok: bool
    n_function_large_ok: bool
    ratio_at_small_t: float
    ratio_at_large_t: float
    t_small: float
    t_large: float
    tol: float

    @property
    def n_function_ok(self) -> bool:
        return self.n_function_small_ok and self.n_function_large_ok

    @property
    def delta2_description(self) -> str:
        if math.isinf(self.delta2_constant):
            return "unbounded on grid"
        return repr(self.delta2_constant)

    def summary(self) -> str:
        lines = [
            f"delta2_constant: {self.delta2_description}"
            + (f" ({self.delta2_skipped_count} grid points skipped)" if self.delta2_skipped_count else ""),
            f"nabla2_constant: {self.nabla2_constant!r}",
            f"constrained_ok: {self.constrained_ok}"
            f" (sup phi(x, {self.t_small!r}) = {self.sup_phi_at_small_t!r},"
            f" inf phi(x, {self.t_large!r}) = {self.inf_phi_at_large_t!r})",
            f"n_function_small_ok: {self.n_function_small_ok}"
            f" (max phi(x, t)/t at t = {self.t_small!r}: {self.ratio_at_small_t!r})",
            f"n_function_large_ok: {self.n_function_large_ok}"
            f" (min phi(x, t)/t at t = {self.t_large!r}: {self.ratio_at_large_t!r})",
        ]
        return "\n".join(lines)


def check_properties(
    gp: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    t_grid_small=None,
    t_grid_large=None,
    tol: float = 1e-3,
    skip_cap: int = 1000,
) -> PropertyReport:
    """Estimate the doubling constant and check uniformity and N-function limits.

    The doubling ratio is maximised over every atom and every point of the
    two grids; points with phi below ``SKIP_THRESHOLD`` at both t and 2t are
    skipped and reported. Verdicts are relative to the supplied grids.
    """
    t_small = DEFAULT_T_GRID_SMALL if t_grid_small is None else np.asarray(t_grid_small, float)
    t_large = DEFAULT_T_GRID_LARGE if t_grid_large is None else np.asarray(t_grid_large, float)
    if t_small.size == 0 or t_large.size == 0:
        raise ConfigurationError("property check grids must be nonempty")
    if np.any(t_small <= 0) or np.any(t_large <= 0):
        raise ConfigurationError("property check grids must be strictly positive")

    labels = space.labels
    grid = np.concatenate([np.sort(t_small), np.sort(t_large)])
    base = np.asarray(gp.value(labels[:, None], grid[None, :]), dtype=float)
    doubled = np.asarray(gp.value(labels[:, None], 2.0 * grid[None, :]), dtype=float)

    tiny_base = base < SKIP_THRESHOLD
    skipped_mask = tiny_base & (doubled < SKIP_THRESHOLD)
    unbounded = bool(np.any(tiny_base & ~skipped_mask))
    valid = ~tiny_base

    skipped_idx = np.argwhere(skipped_mask)
    skipped = tuple(
        (float(labels[i]), float(grid[j])) for i, j in skipped_idx[:skip_cap]
    )

    if unbounded:
        delta2 = math.inf
    elif np.any(valid):
        delta2 = float(np.max(doubled[valid] / base[valid]))
    else:
        delta2 = math.nan
    nabla2 = float(np.min(doubled[valid] / base[valid])) if np.any(valid) else math.nan

    t_lo = float(np.min(t_small))
    t_hi = float(np.max(t_large))
    phi_small = np.asarray(gp.value(labels, t_lo), dtype=float)
    phi_large = np.asarray(gp.value(labels, t_hi), dtype=float)
    sup_small = float(np.max(phi_small))
    inf_large = float(np.min(phi_large))
    constrained_ok = (sup_small <= tol) and (inf_large >= 1.0 / tol)

    ratio_small = float(np.max(phi_small / t_lo))
    ratio_large = float(np.min(phi_large / t_hi))

    return PropertyReport(
        delta2_constant=delta2,
        nabla2_constant=nabla2,
        delta2_skipped=skipped,
        delta2_skipped_count=int(skipped_mask.sum()),
        constrained_ok=constrained_ok,
        sup_phi_at_small_t=sup_small,
        inf_phi_at_large_t=inf_large,
        n_function_small_ok=ratio_small <= tol,
        n_function_large_ok=ratio_large >= 1.0 / tol,
        ratio_at_small_t=ratio_small,
        ratio_at_large_t=ratio_large,
        t_small=t_lo,
        t_large=t_hi,
        tol=tol,
    )


def umr_holds(
    psi: GeneralizedPhi,
    phi: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    eps: float,
    delta: float,
    t_grid=None,
    rtol: float = 1e-12,
) -> bool:
    """Grid check of eps * psi(x, t) >= phi(x, delta * t) / delta on all atoms."""
    t_grid = _umr_grid(t_grid)
    if not (eps > 0 and delta > 0):
        raise DomainError("eps and delta must be positive")
    labels = space.labels
    if isinstance(psi, Constant) and isinstance(phi, Constant):
        labels = labels[:1]  # point-independent: one representative atom suffices
    lhs = eps * np.asarray(psi.value(labels[:, None], t_grid[None, :]), dtype=float)
    rhs = np.asarray(phi.value(labels[:, None], delta * t_grid[None, :]), dtype=float) / delta
    # slack is purely relative so that near-zero values are compared honestly
    slack = rtol * np.maximum(np.abs(lhs), np.abs(rhs))
    return bool(np.all(lhs >= rhs - slack))


def uniformly_more_rapid(
    psi: GeneralizedPhi,
    phi: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    eps_list,
    delta_grid=None,
    t_grid=None,
) -> dict:
    """For each eps, the largest grid delta passing :func:`umr_holds`, else None.

    The verdict is explicitly grid relative: it samples the atoms of the
    space and the supplied t grid, which must span at least [1e-6, 1e3].
    """
    t_grid = _umr_grid(t_grid)
    deltas = DEFAULT_DELTA_GRID if delta_grid is None else np.asarray(delta_grid, dtype=float)
    if deltas.size == 0 or np.any(deltas <= 0):
        raise ConfigurationError("delta grid must be nonempty and positive")
    eps_values = [float(e) for e in np.atleast_1d(np.asarray(eps_list, dtype=float))]
    if not eps_values:
        raise ConfigurationError("eps list must be nonempty")
    deltas = np.sort(deltas)[::-1]
    out: dict = {}
    for eps in eps_values:
        found = None
        for delta in deltas:
            if umr_holds(psi, phi, space, eps, float(delta), t_grid):
                found = float(delta)
                break
        out[eps] = found
    return out


def _umr_grid(t_grid) -> np.ndarray:
    if t_grid is None:
        return DEFAULT_UMR_T_GRID
    grid = np.asarray(t_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ConfigurationError("t grid must be nonempty and positive")
    if grid.min() > 1e-6 * (1 + 1e-9) or grid.max() < 1e3 * (1 - 1e-9):
        raise ConfigurationError("t grid must span at least [1e-6, 1e3]")
    return np.sort(grid)
