"""Vector fields on the circle: brackets, commutants, canonical reduction."""

from .trig import (
    TAU,
    NotRepresentable,
    NumericPeriodic,
    PeriodicFunction,
    PiecewiseTrig,
    TrigPoly,
    coeff_distance,
    constant,
    cos_term,
    fit_trigpoly,
    from_json_dict,
    lincomb,
    multiply,
    one_minus_cos,
    refit,
    reduce_angle,
    sin_term,
    sup_diff,
    to_json_dict,
    uniform_grid,
)
from .parser import FieldSyntaxError, NonPeriodicError, format, parse
from .maps import (
    CircleMap,
    ComposedMap,
    InverseMap,
    PiecewiseAffineMap,
    Reflection,
    Rotation,
    SampledMonotoneMap,
    SinePerturbation,
    compose,
    identity,
    map_from_dict,
)
from .fields import (
    HasZero,
    PushforwardFunction,
    VectorField,
    bracket,
    bracket_residual,
    pushforward,
    solve_v_given_w,
)
from .singular import (
    NotAZero,
    NotClassC,
    SingularPoint,
    SingularityReport,
    find_singular,
    is_degenerate,
)
from .homotopy import Homotopy, NotZeroOnInterval, contract_interval, homotopy_apply
from .commutant import (
    DegenerateDecomposition,
    DimensionMismatch,
    TriviallyDependent,
    build_commuting,
    decompose,
    linearly_independent,
)
from .reduction import (
    CanonicalPair,
    ChartMap,
    IntervalChart,
    NoSingularPoints,
    NotARealization,
    OutsideInterval,
    ReductionResult,
    SignChange,
    SingularGrid,
    cyclic_match,
    endpoint_integral,
    interval_chart,
    normalize_singularities,
    reduce,
)
from .verify import (
    CheckResult,
    VerificationReport,
    invariance_suite,
    validate_noncommutative,
)

__version__ = "0.1.0"
