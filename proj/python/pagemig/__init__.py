"""Page migration with predictions: offline optimum, online strategies, sweeps."""

from ._pagemig import (
    CSV_HEADER,
    BoundsError,
    ConfigError,
    DomainError,
    Error,
    Metric,
    ParameterError,
    ReportError,
    ShapeError,
    SizeError,
    StateError,
    brownian_process,
    check_assumption,
    coinflip_expected_cost,
    compare,
    derive_seed,
    evaluate_lower_bound,
    evaluate_robust,
    gaussian_perturb,
    line_process,
    lower_bound_instance,
    optimal_schedule,
    replay,
    simulate,
)

__all__ = [
    "CSV_HEADER",
    "BoundsError",
    "ConfigError",
    "DomainError",
    "Error",
    "Metric",
    "ParameterError",
    "ReportError",
    "ShapeError",
    "SizeError",
    "StateError",
    "brownian_process",
    "check_assumption",
    "coinflip_expected_cost",
    "compare",
    "derive_seed",
    "evaluate_lower_bound",
    "evaluate_robust",
    "gaussian_perturb",
    "line_process",
    "lower_bound_instance",
    "optimal_schedule",
    "replay",
    "simulate",
]
