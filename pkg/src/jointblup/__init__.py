"""Prediction of unobserved failure times from Type-II censored samples.

Given the first r order statistics of n lifetimes from a location-scale
family, this package computes best linear unbiased estimates of
location and scale, marginal best linear unbiased predictors of future
order statistics, and the determinant-optimal joint predictor pair,
together with efficiency measures comparing the two predictor kinds.
"""

from .analysis import (
    AnalysisConfig,
    emit,
    ingest,
    parse_targets,
    reproduce_table1,
    reproduce_table2,
    run_analysis,
)
from .blue import BlueEstimate, CensoredSample, blue_estimate, blue_weights, solve_context
from .efficiency import EfficiencyReport, efficiency_report
from .errors import MomentValidationError, NumericalError
from .families import DistributionModel, Family, exponential_model, get_model, normal_model
from .moments import (
    MomentSet,
    build_moment_set,
    kernel_backend,
    load_or_build_moments,
    moment_residuals,
    order_statistic_cov,
    order_statistic_means,
    save_moments,
    validate_moment_set,
)
from .predict import (
    FeasibilityVerdict,
    JointPrediction,
    PredictorWeights,
    check_joint_feasibility,
    joint_blup,
    joint_predictor_weights,
    marginal_blup,
    predictor_pair_covariance,
    three_target_singularity_diagnostic,
    three_target_system,
)
from .quadrature import QuadratureSettings, unit_rule

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "BlueEstimate",
    "CensoredSample",
    "DistributionModel",
    "EfficiencyReport",
    "Family",
    "FeasibilityVerdict",
    "JointPrediction",
    "MomentSet",
    "MomentValidationError",
    "NumericalError",
    "PredictorWeights",
    "QuadratureSettings",
    "blue_estimate",
    "blue_weights",
    "build_moment_set",
    "check_joint_feasibility",
    "efficiency_report",
    "emit",
    "exponential_model",
    "get_model",
    "ingest",
    "joint_blup",
    "joint_predictor_weights",
    "kernel_backend",
    "load_or_build_moments",
    "marginal_blup",
    "moment_residuals",
    "normal_model",
    "order_statistic_cov",
    "order_statistic_means",
    "parse_targets",
    "predictor_pair_covariance",
    "reproduce_table1",
    "reproduce_table2",
    "run_analysis",
    "save_moments",
    "solve_context",
    "three_target_singularity_diagnostic",
    "three_target_system",
    "unit_rule",
    "validate_moment_set",
]
