"""Weak-compactness diagnostics on finite function families.

Every "limit equals zero" criterion is reported as a profile (parameter ->
supremum over the family) plus a grid verdict. A profile can only show that
a finite family is consistent with a criterion at the tested resolution; it
never certifies weak compactness of an infinite set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, CriterionBoundError, PreconditionError
from .modular import rho
from .phi import Constant, GeneralizedPhi, ScaledCombination, ScaledYoung, SumYoung
from .space import DiscreteMeasureSpace, FnFamily, exceedance_indices, integrate

CONSISTENT_VERDICT = "consistent with criterion on tested range"

DEFAULT_LAMBDA_GRID = 2.0 ** -np.arange(1, 15, dtype=float)


def _violated(parameter) -> str:
    return f"violated at parameter value {parameter!r}"


@dataclass(frozen=True)
class CriterionProfile:
    """A monotone table (parameter -> supremum over the family) with verdict."""

    kind: str
    parameters: np.ndarray
    values: np.ndarray
    verdict: str
    tol: float

    def __post_init__(self):
        self.parameters.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT_VERDICT

    def rows(self):
        for p, v in zip(self.parameters, self.values):
            yield p, v, self.verdict


def ando_profile(
    gp: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    family: FnFamily,
    lambda_grid=None,
    tol: float = 1e-3,
) -> CriterionProfile:
    """Profile of the modular rate sup_f rho(lambda f)/lambda over a lambda grid.

    The grid must be decreasing inside (0, 1]. Consistency on the tested
    range means: the profile is nondecreasing in lambda (a structural
    invariant, asserted on every run) and its value at the smallest lambda
    is below tol. A consistent profile on a finite family is necessary
    evidence only, never a compactness certificate.
    """
    lambdas = DEFAULT_LAMBDA_GRID if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    if lambdas.size == 0:
        raise ConfigurationError("lambda grid must be nonempty")
    if np.any(lambdas <= 0) or np.any(lambdas > 1):
        raise ConfigurationError("lambda grid must lie in (0, 1]")
    if lambdas.size > 1 and np.any(np.diff(lambdas) >= 0):
        raise ConfigurationError("lambda grid must be strictly decreasing")

    matrix = family.matrix
    values = np.empty(lambdas.size)
    for i, lam in enumerate(lambdas):
        values[i] = max(rho(gp, space, lam * member) / lam for member in matrix)

    # rho(lam f)/lam is nondecreasing in lam by convex scaling; a violation
    # beyond rounding is an implementation bug, not a property of the family.
    drop = values[:-1] - values[1:]  # lambdas decrease, so values must not increase
    if np.any(drop < -1e-12 * np.maximum(1.0, np.abs(values[:-1]))):
        raise RuntimeError("modular rate profile is not monotone in lambda")

    verdict = CONSISTENT_VERDICT if values[-1] < tol else _violated(float(lambdas[-1]))
    return CriterionProfile(
        kind="ando", parameters=lambdas.copy(), values=values, verdict=verdict, tol=tol
    )


def equi_integrability_profile(
    space: DiscreteMeasureSpace,
    family: FnFamily,
    g,
    chain,
    tol: float = 1e-3,
) -> CriterionProfile:
    """sup_f of the integral of |f g| over a decreasing chain of sets."""
    g = space.validate_fn(g)
    sets = [space.validate_subset(s) for s in chain]
    if not sets:
        raise ConfigurationError("shrinking chain must be nonempty")
    measures = [space.measure(s) for s in sets]
    if np.any(np.diff(measures) > 1e-12 * max(1.0, measures[0])):
        raise ConfigurationError("shrinking chain measures must be nonincreasing")
    values = np.array(
        [max(integrate(space, np.abs(member * g), s) for member in family) for s in sets]
    )
    verdict = CONSISTENT_VERDICT if values[-1] < tol else _violated(len(sets))
    return CriterionProfile(
        kind="equi_integrability",
        parameters=np.arange(1, len(sets) + 1, dtype=float),
        values=values,
        verdict=verdict,
        tol=tol,
    )


def tail_profile(
    space: DiscreteMeasureSpace,
    family: FnFamily,
    g,
    exhaustion=None,
    tol: float = 1e-3,
) -> CriterionProfile:
    """sup_f of the integral of |f g| outside each exhaustion set."""
    g = space.validate_fn(g)
    chain = space.exhaustion if exhaustion is None else tuple(
        space.validate_subset(z) for z in exhaustion
    )
    if not chain:
        raise ConfigurationError("exhaustion must be nonempty")
    values = np.empty(len(chain))
    for m, z in enumerate(chain):
        outside = space.complement(z)
        values[m] = max(integrate(space, np.abs(member * g), outside) for member in family)
    verdict = CONSISTENT_VERDICT if values[-1] < tol else _violated(len(chain))
    return CriterionProfile(
        kind="tail",
        parameters=np.arange(1, len(chain) + 1, dtype=float),
        values=values,
        verdict=verdict,
        tol=tol,
    )


@dataclass(frozen=True)
class PsiBoundReport:
    max_modular: float
    in_unit_ball: bool


def bounded_in_psi(
    psi: GeneralizedPhi, space: DiscreteMeasureSpace, family: FnFamily
) -> PsiBoundReport:
    """Largest psi-modular over the family and unit-ball membership."""
    max_modular = max(rho(psi, space, member) for member in family)
    return PsiBoundReport(max_modular=max_modular, in_unit_ball=max_modular <= 1.0 + 1e-9)


@dataclass(frozen=True)
class DominatingPsiSpec:
    """The dyadic scale sequence and certified bounds behind a dominating psi.

    lambdas are strictly decreasing powers of two with lambda_n <= 1/(2n) and
    total at most 1; bounds[n-1] certifies sup_f rho(lambda_n f)/lambda_n
    <= 2**(-2n). psi is sum_n (2**n / lambda_n) * phi(x, lambda_n t),
    truncated at the stored depth; the truncation only lowers psi, so every
    certified inequality stays one-sided.
    """

    lambdas: tuple
    depth: int
    bounds: tuple
    psi: GeneralizedPhi

    def __post_init__(self):
        if len(self.lambdas) != self.depth or len(self.bounds) != self.depth:
            raise ConfigurationError("spec needs one lambda and one bound per level")
        lam = np.asarray(self.lambdas, dtype=float)
        if np.any(np.diff(lam) >= 0):
            raise ConfigurationError("lambda sequence must be strictly decreasing")
        n = np.arange(1, self.depth + 1, dtype=float)
        if np.any(lam > 1.0 / (2.0 * n)):
            raise ConfigurationError("lambda_n must not exceed 1/(2n)")
        if lam.sum() > 1.0 + 1e-12:
            raise ConfigurationError("lambda sequence must sum to at most 1")
        b = np.asarray(self.bounds, dtype=float)
        if np.any(b > 2.0 ** (-2.0 * n) * (1.0 + 1e-12)):
            raise ConfigurationError("certified bounds must satisfy b_n <= 2**(-2n)")

    def psi_config(self) -> dict:
        return self.psi.to_config()


def construct_dominating_psi(
    gp: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    family: FnFamily,
    depth: int,
    max_exponent: int = 60,
) -> DominatingPsiSpec:
    """Build the truncated dominating function sum_n (2^n/lambda_n) phi(x, lambda_n t).

    Each lambda_n is the largest power of two meeting the certified decay
    bound sup_f rho(lambda_n f)/lambda_n <= 2**(-2n) together with
    lambda_n <= min(1/(2n), lambda_{n-1}/2). Scales are restricted to
    powers of two so the construction is bit-reproducible.
    """
    if depth < 1:
        raise ConfigurationError("depth must be at least 1")
    matrix = family.matrix
    lambdas: list[float] = []
    bounds: list[float] = []
    prev = 1.0
    for n in range(1, depth + 1):
        cap = min(1.0 / (2.0 * n), prev / 2.0)
        k = int(math.ceil(-math.log2(cap)))
        if 2.0**-k > cap:
            k += 1
        target = 2.0 ** (-2 * n)
        found = None
        while k <= max_exponent:
            lam = 2.0**-k
            bound = max(rho(gp, space, lam * member) / lam for member in matrix)
            if bound <= target:
                found = (lam, bound)
                break
            k += 1
        if found is None:
            raise CriterionBoundError("criterion bound not achieved on this family")
        lambdas.append(found[0])
        bounds.append(found[1])
        prev = found[0]

    outer = [2.0**n / lam for n, lam in enumerate(lambdas, start=1)]
    inner = list(lambdas)
    if isinstance(gp, Constant):
        psi: GeneralizedPhi = Constant(
            SumYoung(
                tuple(
                    ScaledYoung(gp.young, outer=o, inner=i) for o, i in zip(outer, inner)
                )
            )
        )
    else:
        psi = ScaledCombination(gp, outer=outer, inner=inner)

    spec = DominatingPsiSpec(
        lambdas=tuple(lambdas), depth=depth, bounds=tuple(bounds), psi=psi
    )
    certification = bounded_in_psi(psi, space, family)
    if not certification.in_unit_ball:
        raise RuntimeError(
            f"dominating psi certification failed: max modular {certification.max_modular!r}"
        )
    return spec


@dataclass(frozen=True)
class LemmaBoundRow:
    n: int
    mu_exceedance: float
    bound: float


def lemma_bound_check(
    gp: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    family: FnFamily,
    n_max: int | None = None,
) -> list:
    """Exceedance measures mu{|f_n| > n} against the bound 1/inf_x phi(x, n).

    Every member must lie in the unit modular ball; under that hypothesis
    the inequality mu(B_n) <= 1/inf_x phi(x, n) is guaranteed, so a
    violation beyond rounding raises rather than being reported.
    """
    if n_max is None:
        n_max = len(family)
    if n_max < 1 or n_max > len(family):
        raise PreconditionError(f"need at least {n_max} family members, have {len(family)}")
    for i, member in enumerate(family):
        modular = rho(gp, space, member)
        if modular > 1.0 + 1e-9:
            raise PreconditionError(
                f"family member {i} has modular {modular!r} outside the unit ball"
            )
    rows = []
    for n in range(1, n_max + 1):
        idx = exceedance_indices(space, family[n - 1], float(n))
        mu = float(space.weights[idx].sum())
        inf_phi = float(np.min(np.asarray(gp.value(space.labels, float(n)), dtype=float)))
        bound = math.inf if inf_phi <= 0.0 else 1.0 / inf_phi
        if mu > bound + 1e-9:
            raise RuntimeError(
                f"exceedance bound violated at n={n}: mu={mu!r} > bound={bound!r}"
            )
        rows.append(LemmaBoundRow(n=n, mu_exceedance=mu, bound=bound))
    return rows
