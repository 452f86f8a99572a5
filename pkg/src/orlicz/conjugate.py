"""Discrete Legendre-Fenchel conjugation and the Young (in)equality.

The conjugate of a Young function at u is sup over t >= 0 of t*u - phi(t).
On a grid the argmax is nondecreasing in u, so a single two-pointer sweep
computes a whole table in linear total time. For pure power functions the
closed form (p-1) * (u/p)^(p/(p-1)) (suitably scaled) is used instead, with
the grid sweep kept available as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .phi import GeneralizedPhi, Power, ScaledPower, YoungFunction, _as_nonneg

DEFAULT_T_GRID = np.geomspace(1e-6, 1e4, 512)


def default_t_grid() -> np.ndarray:
    return DEFAULT_T_GRID.copy()


def _closed_form(young: YoungFunction):
    """(value, argmax) callables for the conjugate, or None if unknown.

    Covers c * t**p with p > 1; p = 1 conjugates to an extended-value
    function and falls back to the (flagged) grid sweep.
    """
    if isinstance(young, Power) and young.p > 1.0:
        c, p = 1.0, young.p
    elif isinstance(young, ScaledPower) and young.p > 1.0:
        c, p = young.c, young.p
    else:
        return None

    def argmax(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(over="ignore"):
            return (u / (c * p)) ** (1.0 / (p - 1.0))

    def value(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.where(u > 0, (p - 1.0) / p * u * argmax(u), 0.0)

    return value, argmax


def _sweep(support: np.ndarray, support_values: np.ndarray, queries: np.ndarray):
    """max over support of q*s - value(s) per query, two-pointer over sorted q.

    Requires support increasing and support_values convex over it, so the
    objective is unimodal in s and its argmax is nondecreasing in q. Values
    are clamped at 0 (the point s = 0 always competes with value 0).
    Returns (values, argmax indices); argmax -1 marks a clamped entry.
    """
    order = np.argsort(queries, kind="stable")
    values = np.empty(queries.size)
    argmax = np.empty(queries.size, dtype=int)
    j = 0
    n = support.size
    for pos in order:
        q = queries[pos]
        while j + 1 < n and support[j + 1] * q - support_values[j + 1] >= support[j] * q - support_values[j]:
            j += 1
        best = support[j] * q - support_values[j]
        if best < 0.0:
            values[pos] = 0.0
            argmax[pos] = -1
        else:
            values[pos] = best
            argmax[pos] = j
    return values, argmax


@dataclass(frozen=True)
class ConjugateTable:
    """Conjugate values on a u grid for one atom.

    ``argmax_t`` records where the grid sup was attained (the closed-form
    maximiser when a closed form was used); ``truncated`` flags entries
    whose sup sat on the last grid node, i.e. the grid may have cut the
    true supremum short.
    """

    x: float
    u: np.ndarray
    values: np.ndarray
    argmax_t: np.ndarray
    truncated: np.ndarray
    method: str

    def __post_init__(self):
        for name in ("u", "values", "argmax_t", "truncated"):
            arr = getattr(self, name)
            arr.setflags(write=False)


def conjugate_table(
    gp: GeneralizedPhi, x, u_grid, t_grid=None, method: str = "auto"
) -> ConjugateTable:
    """Conjugate of phi(x, .) on a grid of u values.

    ``method="auto"`` uses the closed form for pure powers and the grid
    sweep otherwise; ``method="grid"`` forces the sweep (the independent
    route used by the cross-check tests).
    """
    if method not in ("auto", "grid"):
        raise ConfigurationError(f"unknown conjugate method {method!r}")
    u = np.asarray(u_grid, dtype=float)
    if u.size == 0:
        raise ConfigurationError("u grid must be nonempty")
    if np.any(u < 0) or (u.size > 1 and np.any(np.diff(u) <= 0)):
        raise ConfigurationError("u grid must be nonnegative and increasing")
    young = gp.young_at(x)

    if method == "auto":
        closed = _closed_form(young)
        if closed is not None:
            value_fn, argmax_fn = closed
            values = np.asarray(value_fn(u), dtype=float)
            argmax = np.asarray(argmax_fn(u), dtype=float)
            return ConjugateTable(
                x=float(np.asarray(x, dtype=float)),
                u=u.copy(),
                values=values,
                argmax_t=argmax,
                truncated=np.zeros(u.size, dtype=bool),
                method="closed_form",
            )

    grid = DEFAULT_T_GRID if t_grid is None else np.asarray(t_grid, dtype=float)
    if grid.size == 0:
        raise ConfigurationError("t grid must be nonempty")
    if np.any(np.diff(grid) <= 0):
        raise ConfigurationError("t grid must be strictly increasing")
    phi_vals = np.asarray(young(grid), dtype=float)
    values, argmax_idx = _sweep(grid, phi_vals, u)
    shown = np.argsort(u, kind="stable")
    if np.any(np.diff(argmax_idx[shown][argmax_idx[shown] >= 0]) < 0):
        raise RuntimeError("conjugate sweep argmax is not nondecreasing in u")
    argmax_t = np.where(argmax_idx >= 0, grid[np.maximum(argmax_idx, 0)], 0.0)
    truncated = argmax_idx == grid.size - 1
    return ConjugateTable(
        x=float(np.asarray(x, dtype=float)),
        u=u.copy(),
        values=values,
        argmax_t=argmax_t,
        truncated=truncated,
        method="grid",
    )


def _phi_star_at(gp: GeneralizedPhi, x, u: float, t_grid, extra_t=None) -> float:
    """Conjugate value at a single u; grid sup includes any extra support points."""
    young = gp.young_at(x)
    closed = _closed_form(young)
    if closed is not None:
        return float(closed[0](u))
    grid = DEFAULT_T_GRID if t_grid is None else np.asarray(t_grid, dtype=float)
    if extra_t is not None:
        grid = np.union1d(grid, np.asarray(extra_t, dtype=float))
    candidates = grid * u - np.asarray(young(grid), dtype=float)
    return max(0.0, float(np.max(candidates)))


def young_gap(gp: GeneralizedPhi, x, t: float, u: float, t_grid=None) -> float:
    """phi(x, t) + phi*(x, u) - t*u; nonnegative up to grid and rounding error.

    When the conjugate comes from a grid sup, the query t itself joins the
    support so the defining inequality phi*(u) >= t*u - phi(t) is honoured
    exactly and the gap cannot go materially negative.
    """
    t = float(_as_nonneg(t, "t"))
    u = float(_as_nonneg(u, "u"))
    phi_t = float(np.asarray(gp.value(x, t), dtype=float))
    star = _phi_star_at(gp, x, u, t_grid, extra_t=[t])
    return phi_t + star - t * u


@dataclass(frozen=True)
class YoungEquality:
    u: float
    gap: float


def young_equality_at_derivative(gp: GeneralizedPhi, x, t: float, t_grid=None) -> YoungEquality:
    """Young gap at the equality point u = right derivative of phi(x, .) at t."""
    t = float(_as_nonneg(t, "t"))
    u = float(np.asarray(gp.right_derivative(x, t), dtype=float))
    return YoungEquality(u=u, gap=young_gap(gp, x, t, u, t_grid=t_grid))


def biconjugate_check(gp: GeneralizedPhi, x, t_grid, u_grid) -> float:
    """max over the t grid of |phi** - phi|, via two grid sweeps.

    For convex inputs the discrepancy is a pure discretisation artefact,
    bounded by a small multiple of the grid spacing.
    """
    t = np.asarray(t_grid, dtype=float)
    u = np.asarray(u_grid, dtype=float)
    if t.size == 0 or u.size == 0:
        raise ConfigurationError("biconjugate check needs nonempty grids")
    if np.any(t < 0) or np.any(u < 0):
        raise DomainError("grids must be nonnegative")
    t = np.unique(t)
    u = np.unique(u)
    young = gp.young_at(x)
    phi_vals = np.asarray(young(t), dtype=float)
    star_vals, _ = _sweep(t, phi_vals, u)
    bistar_vals, _ = _sweep(u, star_vals, t)
    return float(np.max(np.abs(bistar_vals - phi_vals)))


def write_conjugate_csv(table: ConjugateTable, path) -> None:
    """CSV export with the stable column contract."""
    import csv

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["u", "phi_star", "argmax_t", "truncated_flag"])
        for u, v, a, flag in zip(table.u, table.values, table.argmax_t, table.truncated):
            writer.writerow([repr(float(u)), repr(float(v)), repr(float(a)), int(flag)])
