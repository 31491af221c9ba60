"""mbmint: multifractional Brownian motion simulation and discretization-rate
experiments for pathwise integrals with convex integrands."""

from .errors import (
    AssumptionError,
    ConfigError,
    DomainError,
    FactorizationError,
    InvariantError,
    MbmintError,
    QuadratureError,
)
from .hurst import (
    HurstFunction,
    ValidationReport,
    affine_hurst,
    constant_hurst,
    custom_hurst,
    hurst_from_params,
    logistic_hurst,
    sin_hurst,
    validate_assumptions,
)
from .drivers import (
    KernelWeights,
    MovingAverageWeights,
    SamplePath,
    build_kernel_weights,
    build_moving_average_weights,
    cholesky_factor,
    constant_h_covariance,
    covariance_matrix,
    covariance_volterra,
    harmonizable_constant,
    molchan_constant,
    molchan_kernel,
    moving_average_constant,
    moving_average_truncation_deficit,
    simulate_cholesky,
    simulate_moving_average,
    simulate_volterra,
)
from .payoffs import (
    ConvexPayoff,
    convexity_identity_sides,
    discretization_gap,
    exact_integral,
    make_abs_payoff,
    make_call_payoff,
    make_quadratic_payoff,
    payoff_from_params,
    riemann_sum,
)
from .theory import (
    GAUSSIAN_SCALING_BOUND,
    RateExponents,
    gaussian_partial_expectation,
    integral_ratio_limit,
    leading_constant,
    leading_constant_inner,
    lower_bound_conditions,
    rate_exponents,
    verify_gaussian_scaling_bound,
    verify_power_exponential_integral_bound,
)
from .experiments import (
    ExperimentConfig,
    RateReport,
    estimate_l1_error,
    fit_rate,
    run_convergence,
)
from .config import AppConfig, load_config

__version__ = "0.1.0"
