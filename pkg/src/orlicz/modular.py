"""The modular, the Luxemburg norm, and their unit-ball relation.

The modular of f is the weighted sum of phi(x, |f(x)|) over the atoms;
the Luxemburg norm is the infimum of r > 0 with modular of f/r at most 1,
computed here by bracketing and bisection on the nonincreasing map
r -> modular(f / r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotInSpaceError
from .phi import GeneralizedPhi
from .space import DiscreteMeasureSpace

_MAX_DOUBLINGS = 1100  # keeps r inside the double range; never hit for valid inputs


def rho(gp: GeneralizedPhi, space: DiscreteMeasureSpace, f) -> float:
    """Modular of f: sum of phi(x_i, |f_i|) * mu_i. Overflow returns +inf."""
    values = space.validate_fn(f)
    with np.errstate(over="ignore", invalid="ignore"):
        point = np.asarray(gp.value(space.labels, np.abs(values)), dtype=float)
        total = float(np.dot(point, space.weights))
    return total


@dataclass(frozen=True)
class NormResult:
    """Luxemburg norm value with its final bisection bracket.

    ``residual`` is the modular of f/value, reported so callers can audit
    how the boundary case inf { r : modular <= 1 } was resolved.
    """

    value: float
    bracket: tuple
    iterations: int
    residual: float


def luxemburg_norm(
    gp: GeneralizedPhi, space: DiscreteMeasureSpace, f, tol: float = 1e-10
) -> NormResult:
    """Norm as the midpoint of a bisection bracket of relative width tol.

    The bracket [lo, hi] always satisfies modular(f/hi) <= 1 < modular(f/lo);
    bisection stops once hi - lo <= tol * lo. The zero function returns 0
    directly.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    values = space.validate_fn(f)
    if not np.any(values):
        return NormResult(value=0.0, bracket=(0.0, 0.0), iterations=0, residual=0.0)

    def modular_at(r: float) -> float:
        with np.errstate(divide="ignore"):
            scaled = values / r
        return rho(gp, space, scaled)

    iterations = 0
    r = 1.0
    m = modular_at(r)
    iterations += 1
    if m <= 1.0:
        hi = r
        lo = r / 2.0
        while True:
            m_lo = modular_at(lo)
            iterations += 1
            if m_lo > 1.0:
                break
            hi = lo
            lo /= 2.0
            if iterations > _MAX_DOUBLINGS:
                raise NotInSpaceError("norm bracket collapsed below floating-point range")
    else:
        all_infinite = math.isinf(m)
        lo = r
        hi = 2.0 * r
        while True:
            m_hi = modular_at(hi)
            iterations += 1
            if m_hi <= 1.0:
                break
            all_infinite = all_infinite and math.isinf(m_hi)
            if all_infinite and hi >= 2.0**60:
                raise NotInSpaceError("not in the space at this resolution")
            lo = hi
            hi *= 2.0
            if iterations > _MAX_DOUBLINGS:
                raise NotInSpaceError("norm bracket exceeded floating-point range")

    while hi - lo > tol * lo:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break  # bracket already at floating-point resolution
        if modular_at(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        iterations += 1

    value = 0.5 * (lo + hi)
    if not value > lo:
        value = hi  # midpoint underflowed; hi is the certified end
    return NormResult(
        value=value,
        bracket=(lo, hi),
        iterations=iterations,
        residual=modular_at(value),
    )


@dataclass(frozen=True)
class UnitBallCheck:
    rho_value: float
    norm_value: float
    consistent: bool


def unit_ball_check(gp: GeneralizedPhi, space: DiscreteMeasureSpace, f) -> UnitBallCheck:
    """Check that modular and norm agree about membership in the unit ball."""
    rho_value = rho(gp, space, f)
    norm_value = luxemburg_norm(gp, space, f).value
    consistent = (rho_value <= 1.0 + 1e-9) == (norm_value <= 1.0 + 1e-6)
    return UnitBallCheck(rho_value=rho_value, norm_value=norm_value, consistent=consistent)
