"""Certified approximation numbers of weighted composition and restriction
operators on Hardy spaces of the unit disc and of horizontal strips."""

from .numerics import (
    PrecisionContext,
    PowerSeries,
    DenseMatrix,
    QuadratureResult,
    NumericsError,
    NoConvergence,
    DivisionByZeroConstantTerm,
    NotPositiveDefinite,
    BranchCrossing,
)
from .disc_symbols import (
    LensParams,
    DiscMap,
    DiscWeight,
    MinorantOmega,
    BlaschkeSpec,
    EvaluationAtSingularity,
    MinorantFailure,
    lens_map,
    lens_weight,
    lens_minorant,
    dilation_map,
    halfplane_symbol_weight,
    constant_weight,
    series_weight,
    compose_weight,
    boundary_curve,
    power_minorant,
    delta_w0,
    blaschke_spec,
    blaschke,
)
from .operator_core import (
    WeightedCompositionSpec,
    TruncatedOperator,
    ApproxNumbers,
    AssemblyMismatch,
    NonIntegrableTail,
    CertificationFailed,
    InsufficientCertification,
    DIVERGENT,
    assemble,
    approx_numbers,
    hilbert_schmidt_norm,
    beta_estimate,
)
from .bounds import (
    BernsteinConfig,
    CarlesonReport,
    DecayFit,
    bernstein_lower,
    carleson_box,
    carleson_report,
    fit_decay,
    gelfand_upper_blaschke,
    tradeoff_upper,
)
from .strip import (
    OutOfDomain,
    TailTooFat,
    RouteMismatch,
    StripConfig,
    StripFunction,
    ModularWeightParams,
    RestrictionSpec,
    riemann_map,
    riemann_map_inverse,
    riemann_map_derivative,
    strip_kernel,
    modular_weight,
    modular_weight_function,
    strip_norm,
    transfer_weight,
    restriction_matrix,
    restriction_hs_norm,
    embedding_hankel,
    carleson_diameter_box,
    crossing_involution,
)

__version__ = "0.1.0"
