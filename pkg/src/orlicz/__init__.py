"""Numerical diagnostics for modular function spaces on discretized measures.

Evaluate modulars and Luxemburg norms, compute Young conjugates, check the
structural hypotheses of the underlying function families (doubling,
N-function limits, uniformity in the point variable), and run
weak-compactness and weak-convergence profiles on concrete families.
"""

from .compactness import (
    CONSISTENT_VERDICT,
    CriterionProfile,
    DominatingPsiSpec,
    PsiBoundReport,
    ando_profile,
    bounded_in_psi,
    construct_dominating_psi,
    equi_integrability_profile,
    lemma_bound_check,
    tail_profile,
)
from .conjugate import (
    ConjugateTable,
    biconjugate_check,
    conjugate_table,
    young_equality_at_derivative,
    young_gap,
)
from .convergence import (
    CesaroTable,
    WeakConvergenceReport,
    cesaro_profile,
    coordinatewise_check,
    set_integral_convergence,
    weak_convergence_report,
)
from .errors import (
    ConfigurationError,
    CriterionBoundError,
    DomainError,
    NotInSpaceError,
    OrliczError,
    PreconditionError,
)
from .modular import NormResult, UnitBallCheck, luxemburg_norm, rho, unit_ball_check
from .phi import (
    Constant,
    GeneralizedPhi,
    PointTable,
    Power,
    PowerLog,
    PropertyReport,
    ScaledCombination,
    ScaledPower,
    ScaledYoung,
    SumYoung,
    Tabulated,
    WeightedPower,
    YoungFunction,
    check_properties,
    umr_holds,
    uniformly_more_rapid,
)
from .space import (
    DiscreteMeasureSpace,
    FnFamily,
    are_disjoint,
    counting_space,
    exceedance_sets,
    grid_space,
    integrate,
    shrinking_sets,
)

__version__ = "0.1.0"

__all__ = [
    "CONSISTENT_VERDICT",
    "CesaroTable",
    "ConfigurationError",
    "ConjugateTable",
    "Constant",
    "CriterionBoundError",
    "CriterionProfile",
    "DiscreteMeasureSpace",
    "DomainError",
    "DominatingPsiSpec",
    "FnFamily",
    "GeneralizedPhi",
    "NormResult",
    "NotInSpaceError",
    "OrliczError",
    "PointTable",
    "Power",
    "PowerLog",
    "PreconditionError",
    "PropertyReport",
    "PsiBoundReport",
    "ScaledCombination",
    "ScaledPower",
    "ScaledYoung",
    "SumYoung",
    "Tabulated",
    "UnitBallCheck",
    "WeakConvergenceReport",
    "WeightedPower",
    "YoungFunction",
    "ando_profile",
    "are_disjoint",
    "biconjugate_check",
    "bounded_in_psi",
    "cesaro_profile",
    "check_properties",
    "conjugate_table",
    "construct_dominating_psi",
    "coordinatewise_check",
    "counting_space",
    "equi_integrability_profile",
    "exceedance_sets",
    "grid_space",
    "integrate",
    "lemma_bound_check",
    "luxemburg_norm",
    "rho",
    "set_integral_convergence",
    "shrinking_sets",
    "tail_profile",
    "umr_holds",
    "unit_ball_check",
    "uniformly_more_rapid",
    "weak_convergence_report",
    "young_equality_at_derivative",
    "young_gap",
]
