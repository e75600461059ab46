"""Sharp nonparametric bounds on vaccine-efficacy estimands under broken blinding."""

from .bounds import (
    BoundsResult,
    Estimand,
    Interval,
    ScenarioSpec,
    all_bounds,
    constructive_bounds,
    lp_bounds,
    monotone_bounds,
)
from .errors import (
    DegenerateDenominator,
    EmptyArm,
    Infeasible,
    MixedSchema,
    PositivityError,
    TooManyFailures,
    VeBoundsError,
    ZeroDenominator,
)
from .inference import BootstrapConfig, bootstrap_ci, coverage_study
from .observed import ObservedDistribution, TrialRecord, estimate_observed, from_counts, point_identified_ve
from .simulate import DgmConfig, generate, true_bounds, true_estimands

__all__ = [
    "BootstrapConfig",
    "BoundsResult",
    "DegenerateDenominator",
    "DgmConfig",
    "EmptyArm",
    "Estimand",
    "Infeasible",
    "Interval",
    "MixedSchema",
    "ObservedDistribution",
    "PositivityError",
    "ScenarioSpec",
    "TooManyFailures",
    "TrialRecord",
    "VeBoundsError",
    "ZeroDenominator",
    "all_bounds",
    "bootstrap_ci",
    "constructive_bounds",
    "coverage_study",
    "estimate_observed",
    "from_counts",
    "generate",
    "lp_bounds",
    "monotone_bounds",
    "point_identified_ve",
    "true_bounds",
    "true_estimands",
]
