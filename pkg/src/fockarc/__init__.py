"""fockarc: moments of Jacobi-sequence state spaces, asymptotic
commutativity classification, and arcsine-type limit laws."""

__version__ = "0.1.0"

from .arcsine import (
    DiscreteArcsineLaw,
    TruncationError,
    arcsine_moment,
    c_to_zero_check,
    carleman_bound_check,
    discrete_arcsine,
    discrete_moment,
    discrete_moment_bound,
    fourier_coefficient,
    weight_from_series_formula,
)
from .fock import (
    FockVector,
    RootScaled,
    TwoSidedJacobiSequence,
    apply_X,
    drift_chain,
    free_chain,
    moment,
    normalized_moment,
    normalized_shifted_two_sided,
    shifted_two_sided,
    two_sided_moment,
    variance_fraction,
)
from .jacobi import (
    CatalogError,
    ExactModeError,
    JacobiSequence,
    NonRealizableMomentsError,
    SequenceFileError,
    SequenceRangeError,
    ValidationReport,
    catalog_sequence,
    expression_sequence,
    jacobi_from_moments,
    load_sequence_file,
    tabulated_sequence,
    validate,
)
from .orthopoly import (
    MeasureSpec,
    QuadratureError,
    catalog_measure,
    eval_normalized_poly,
    poly_inner,
    quadrature_moment,
    quadrature_moment_mp,
    rescaled_density_moments,
)
from .rac import (
    LimitTable,
    NoPredictedLimitError,
    RacReport,
    classify,
    limit_table,
    probe,
)
from .seqexpr import ExprEvalError, ExprSyntaxError

__all__ = [name for name in dir() if not name.startswith("_")]
