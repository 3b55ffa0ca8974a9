"""Models package."""

from .distribution import (
    Family,
    Variant,
    TransformType,
    Branch,
    Regime,
    InputDist,
    SkewTau,
    HeavyTau,
    Theta,
)
from .config import SolverConfig, EstimatorConfig, RunConfig
from .results import (
    Series,
    IgmmFit,
    MleFit,
    HillCurve,
    PowerLawFit,
    HillStudySpec,
    HillStudyResult,
    BootstrapTrace,
    AcfReport,
    tau_names,
    tau_values,
)

__all__ = [
    "Family",
    "Variant",
    "TransformType",
    "Branch",
    "Regime",
    "InputDist",
    "SkewTau",
    "HeavyTau",
    "Theta",
    "SolverConfig",
    "EstimatorConfig",
    "RunConfig",
    "Series",
    "IgmmFit",
    "MleFit",
    "HillCurve",
    "PowerLawFit",
    "HillStudySpec",
    "HillStudyResult",
    "BootstrapTrace",
    "AcfReport",
    "tau_names",
    "tau_values",
]
