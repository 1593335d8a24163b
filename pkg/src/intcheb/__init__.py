"""Bounds for integer Chebyshev constants via weighted potential theory."""

from .bounds import (
    BoundReport,
    ClosedFormGaps,
    LejaGaps,
    RegionSpec,
    feasible_region,
    fekete_upper,
    lemniscate_tz,
    neighborhood_invariance_check,
    rational_point_lower,
    robin_lower,
    sweep_lower_bound,
    sweep_upper_bound,
    trigub_lower,
    weighted_upper,
)
from .errors import (
    BudgetTooSmall,
    DomainError,
    EmptyDomain,
    IntChebError,
    LengthMismatch,
    ModeUnavailable,
    NonConvergence,
    PointInSupport,
    SingularNodes,
)
from .exact_search import (
    FactorizationRecord,
    brute_force_search,
    factor_analyze,
    hilbert_fekete_construct,
    search_integer_chebyshev,
    symmetry_reduce,
)
from .jacobi import (
    GreenEvaluator,
    SupportInterval,
    TwoFactorParams,
    density_at,
    potential_gap,
    robin_constant,
    support_endpoints,
)
from .leja import (
    EquilibriumData,
    LejaSequence,
    estimate_capacity,
    estimate_potential_gap,
    estimate_robin,
    leja_sequence,
    next_leja_point,
    start_leja,
)
from .polycore import (
    FactorWeight,
    IntervalUnion,
    IntPoly,
    RationalPoint,
    eval_log_abs_weight,
    poly_roots,
    sup_norm,
    sup_norm_on_grid,
)

__version__ = "0.1.0"
