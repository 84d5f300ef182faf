"""Weighted generalized shift operators on finite-dimensional complex l2 spaces."""

from .adjoint import (
    DecompositionResult,
    FiberTable,
    adjoint_decompose,
    adjoint_of_sum,
    build_fibers,
    min_term_count,
    term_bound_from_separation,
)
from .analysis import (
    ClassificationReport,
    classify,
    fiber_norm,
    invertibility_bound,
    is_invertible,
    is_isometry,
    is_self_adjoint,
    is_unitary,
    max_fiber_cardinality,
)
from .core import (
    DomainError,
    ShapeError,
    SumOperator,
    Tolerance,
    WgsError,
    WgsOperator,
    apply,
    apply_sum,
    basis_vector,
    identity,
    inner_product,
    zero_operator,
)
from .oracle import (
    ConvergenceWarning,
    PowerIterationResult,
    conjugate_transpose,
    hermitian_test,
    matvec,
    power_iteration,
    random_operator,
    spectral_norm,
    to_dense,
    to_dense_sum,
    unitary_test,
)
from .semigroup import (
    Annulus,
    FiniteSet,
    NullSequence,
    check_closure,
    counterexample_operator,
    is_conjugate_invariant,
    predict_adjoint_invariance,
    run_truncation_study,
    zero_is_limit_point,
)

__version__ = "0.1.0"
