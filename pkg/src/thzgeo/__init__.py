"""Interference, association, and rate-coverage analytics for coexisting
RF/terahertz cellular networks, validated by a built-in Monte Carlo simulator."""

from .analytic import (
    CoverageDiagnostics,
    CoverageResult,
    GilPelaezOptions,
    LtOptions,
    SeriesOptions,
    assoc_prob_thz_asymptotic,
    assoc_prob_thz_quadrature,
    assoc_prob_thz_series,
    cf_omega,
    coverage_coexisting,
    coverage_hybrid,
    coverage_rf_conditional,
    coverage_rf_only,
    coverage_thz_only,
    lt_thz_average,
    lt_thz_conditional,
    mu_correction,
    rf_pdf_raw_mass,
    serving_distance_pdf_rf,
    serving_distance_pdf_thz,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateDistributionError,
    DomainError,
    OverflowRangeError,
    PoleError,
    QuadratureError,
    SeriesDivergenceError,
    ThzGeoError,
)
from .mcsim import (
    McConfig,
    McEstimate,
    TrialOutcome,
    estimate_association,
    estimate_coverage,
    estimate_lt,
    run_trial,
    sample_ppp,
    simulate_batch,
)
from .netmodel import (
    AntennaPattern,
    DerivedConstants,
    GainDistribution,
    NetworkParams,
    default_params,
    derive_constants,
    gain_distribution,
    rf_gain,
    sinr_threshold,
    thz_gain,
)
from .optimize import BiasSearchSpec, optimize_bias
from .specfun import (
    QuadratureSpec,
    exp_integral_en,
    gamma_fn,
    hypergeom_Z,
    parabolic_cylinder_Dneg,
    upper_inc_gamma_2m2l,
)

__version__ = "0.1.0"
