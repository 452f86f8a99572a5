"""Weak-convergence diagnostics for sequences and Cesàro-mean experiments.

The "for every set of finite measure" quantifier is replaced by a caller
supplied list of test sets (exhaustion prefixes by default); the sup over
the sequence of the modular rate is delegated to the compactness profile.
Everything is finite-resolution consistency checking, not a proof of weak
convergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError
from .compactness import CriterionProfile, ando_profile, bounded_in_psi, equi_integrability_profile, tail_profile
from .modular import luxemburg_norm, rho
from .phi import GeneralizedPhi
from .space import DiscreteMeasureSpace, FnFamily, are_disjoint, integrate, shrinking_sets

REFLEXIVE_NOTE = "valid only under reflexivity hypotheses (not verified by this tool)"


@dataclass(frozen=True)
class SetIntegralRow:
    set_index: int
    values: tuple
    last: float
    passed: bool
    whole_space: bool = False


def set_integral_convergence(
    space: DiscreteMeasureSpace,
    seq: FnFamily,
    f,
    test_sets=None,
    tol: float = 1e-3,
) -> list:
    """Per test set A: the sequence of integrals of (f_n - f) over A.

    The verdict per row is |last value| < tol. Rows covering every atom of
    a grid space are flagged: on a truncated grid that set stands in for the
    whole (infinite-measure) space. The default test sets are the exhaustion
    prefixes, minus any prefix covering every atom: a truncated sequence can
    never escape the whole truncated space, so that prefix does not stand in
    for a fixed finite-measure set.
    """
    f = space.validate_fn(f)
    if test_sets is None:
        sets = [z for z in space.exhaustion if len(z) < space.n_atoms]
        if not sets:
            sets = list(space.exhaustion)
    else:
        sets = [space.validate_subset(s) for s in test_sets]
    rows = []
    for j, subset in enumerate(sets):
        values = tuple(integrate(space, member - f, subset) for member in seq)
        whole = space.kind == "grid" and len(subset) == space.n_atoms
        rows.append(
            SetIntegralRow(
                set_index=j + 1,
                values=values,
                last=values[-1],
                passed=abs(values[-1]) < tol,
                whole_space=whole,
            )
        )
    return rows


@dataclass(frozen=True)
class CoordinateRow:
    coordinate: int
    last_deviation: float
    passed: bool


def coordinatewise_check(space: DiscreteMeasureSpace, seq: FnFamily, y, tol: float) -> list:
    """Per coordinate, the deviation |x^k_n - y_n| at the last k."""
    if space.kind != "counting":
        raise ConfigurationError("coordinatewise check is for counting-measure spaces only")
    y = space.validate_fn(y)
    last = seq[len(seq) - 1]
    rows = []
    for n in range(space.n_atoms):
        deviation = abs(float(last[n]) - float(y[n]))
        rows.append(CoordinateRow(coordinate=n + 1, last_deviation=deviation, passed=deviation < tol))
    return rows


@dataclass(frozen=True)
class CesaroTable:
    rows: tuple  # (n, modular of the n-th Cesaro mean)
    disjoint: bool


def cesaro_profile(gp: GeneralizedPhi, space: DiscreteMeasureSpace, seq: FnFamily, f=None) -> CesaroTable:
    """Modular of the Cesàro means (f_1 + ... + f_n)/n - f for n = 1..N.

    When the sequence is pairwise disjoint the limit function must be 0 (the
    disjoint reduction) and the modular of each mean is cross-checked against
    the sum of the members' modulars, which disjoint supports make exact.
    """
    if f is None:
        f = np.zeros(space.n_atoms)
    f = space.validate_fn(f)
    disjoint = are_disjoint(seq)
    if disjoint and np.any(f != 0.0):
        raise PreconditionError("a disjoint Cesàro experiment requires limit f = 0")
    running = np.zeros(space.n_atoms)
    rows = []
    for n, member in enumerate(seq, start=1):
        running = running + member
        mean = running / n
        value = rho(gp, space, mean - f)
        if disjoint:
            split = sum(rho(gp, space, member_i / n) for member_i in list(seq)[:n])
            if abs(value - split) > 1e-12 * max(1.0, abs(value)):
                raise RuntimeError(
                    f"disjoint additivity failed at n={n}: {value!r} vs {split!r}"
                )
        rows.append((n, value))
    return CesaroTable(rows=tuple(rows), disjoint=disjoint)


@dataclass(frozen=True)
class WeakConvergenceReport:
    """Combined diagnostics for one sequence against one candidate limit."""

    set_integrals: tuple
    criterion_profile: CriterionProfile | None
    equi_profile: CriterionProfile | None
    tail_profile: CriterionProfile | None
    coordinatewise: tuple | None
    psi_bound: object | None
    max_norm: float | None
    flavor: str
    verdicts: dict
    passed: bool
    notes: tuple = field(default=())

    def summary(self) -> str:
        lines = [f"flavor: {self.flavor}"]
        for key in sorted(self.verdicts):
            lines.append(f"{key}: {'pass' if self.verdicts[key] else 'FAIL'}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        lines.extend(self.notes)
        return "\n".join(lines)


def weak_convergence_report(
    gp: GeneralizedPhi,
    space: DiscreteMeasureSpace,
    seq: FnFamily,
    f,
    lambda_grid=None,
    test_sets=None,
    chain=None,
    exhaustion=None,
    g=None,
    psi: GeneralizedPhi | None = None,
    tol: float = 1e-3,
    flavor: str = "full",
) -> WeakConvergenceReport:
    """Run the weak-convergence conditions on a sequence and combine verdicts.

    The full flavor checks the set-integral condition and the modular-rate
    profile of the shifted family {f_n - f}; a caller-supplied pairing
    function g adds the shrinking-set and tail profiles, and a caller
    supplied psi adds a domination check on {f_n - f} (how to pick psi when
    testing rather than proving is the caller's choice; the dominating-psi
    constructor is one option). The reflexive flavor checks only norm
    boundedness plus the set-integral condition and is labelled as such.
    """
    if flavor not in ("full", "reflexive"):
        raise ConfigurationError(f"unknown report flavor {flavor!r}")
    f = space.validate_fn(f)
    shifted = FnFamily(tuple(member - f for member in seq), name="shifted")

    rows = set_integral_convergence(space, seq, f, test_sets=test_sets, tol=tol)
    verdicts = {"set_integrals": all(row.passed for row in rows)}
    notes = []

    profile = None
    equi = None
    tail = None
    psi_report = None
    coordinate_rows = None
    max_norm = None

    if flavor == "reflexive":
        max_norm = max(luxemburg_norm(gp, space, member).value for member in seq)
        verdicts["norm_bounded"] = np.isfinite(max_norm)
        notes.append(REFLEXIVE_NOTE)
    else:
        profile = ando_profile(gp, space, shifted, lambda_grid=lambda_grid, tol=tol)
        verdicts["modular_rate"] = profile.consistent
        if g is not None:
            sets = shrinking_sets(space, 6) if chain is None else chain
            equi = equi_integrability_profile(space, shifted, g, sets, tol=tol)
            tail = tail_profile(space, shifted, g, exhaustion=exhaustion, tol=tol)
            verdicts["equi_integrability"] = equi.consistent
            verdicts["tail"] = tail.consistent
        if psi is not None:
            members = tuple(shifted) + (np.zeros(space.n_atoms),)
            psi_report = bounded_in_psi(psi, space, FnFamily(members))
            verdicts["psi_bound"] = psi_report.in_unit_ball
        if space.kind == "counting":
            # informational table; not part of the verdict conjunction
            coordinate_rows = tuple(coordinatewise_check(space, seq, f, tol=tol))

    passed = all(verdicts.values())
    return WeakConvergenceReport(
        set_integrals=tuple(rows),
        criterion_profile=profile,
        equi_profile=equi,
        tail_profile=tail,
        coordinatewise=coordinate_rows,
        psi_bound=psi_report,
        max_norm=max_norm,
        flavor=flavor,
        verdicts=verdicts,
        passed=passed,
        notes=tuple(notes),
    )
