"""Monomial Borel-Laplace summation of divergent bivariate power series."""

from .errors import (
    ConfigError,
    DimensionMismatchError,
    InsufficientDataError,
    LatticeSizeError,
    MonoborelError,
    NonContractionWarning,
    NotSummableError,
    NumericError,
    PadeDegeneracyError,
    PlaneMismatchError,
    QuadratureAccuracyError,
    ResolventConditionError,
    SingularDirectionError,
    SingularProblemError,
    SupportDomainError,
    WeightMismatchError,
)
from .fixpoint import (
    ConvolutionProblem,
    RayGrid,
    build_convolution_problem,
    chebyshev_ray_grid,
    cross_validate,
    fixpoint_defect,
    kernel_bound_audit,
    picard_solve,
)
from .pde import (
    LinearMonomialPDE,
    PfaffianSystem,
    combine_pfaffian,
    convergence_scan,
    eigenvalue_pairing_check,
    equation_operator,
    equation_residual_series,
    formal_solution,
    integrability_check,
    load_problem,
    singular_directions,
    sum_and_verify,
    summation_weight,
)
from .series import (
    BivariateSeries,
    GevreyEstimate,
    MonomialDecomposition,
    MonomialWeight,
    evaluate_truncated,
    geometric_interpolation,
    gevrey_order_estimate,
    monomial_decompose,
    monomial_recompose,
    series_max_diff,
    series_product,
    stack_series,
)
from .summation import (
    GrowthEstimate,
    PadeContinuation,
    PadePole,
    PipelineConfig,
    RaySeries,
    SectorSpec,
    SumEvaluation,
    borel_sum,
    detect_singular_directions,
    estimate_growth,
    evaluate_continuation,
    evaluate_regular_part,
    laplace_quadrature,
    pade_continue,
    reduce_to_ray,
    wrap_angle,
)
from .transforms import (
    ConvolutionQuad,
    TransformedSeries,
    apply_weighted_derivation,
    formal_borel,
    formal_convolution,
    formal_laplace,
    numerical_convolution,
)

__version__ = "0.1.0"
