"""Tail and resampling diagnostics endpoints."""

from typing import Literal, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from lambertw_tails.models import (
    AcfReport,
    BootstrapTrace,
    EstimatorConfig,
    HillCurve,
    HillStudyResult,
    PowerLawFit,
    TransformType,
)
from lambertw_tails.services import (
    bootstrap_igmm,
    default_study_spec,
    hill_curve,
    hill_study,
    sd_times_sqrt_n,
    select_xmin,
    tail_samples,
    whiteness_report,
)

router = APIRouter(prefix="/api/diagnostics", tags=["diagnostics"])


class SeriesRequest(BaseModel):
    values: list[float] = Field(..., min_length=10)


class HillRequest(SeriesRequest):
    """Hill curves of an observed series, optionally with the simulation study."""

    estimator: Literal["classic", "harmonic"] = "harmonic"
    beta: float = Field(default=1.001, ge=1)
    split: Literal["split", "absolute"] = "split"
    k_grid: Optional[list[int]] = None
    simulate: bool = Field(default=False, description="Include the student-t / Lambert W x t ensemble")
    replications: int = Field(default=100, ge=1, le=1000)
    seed: int = Field(default=42, ge=0)


class HillResponse(BaseModel):
    curves: list[HillCurve]
    study: Optional[HillStudyResult] = None


class PowerLawRequest(SeriesRequest):
    side: Literal["positive", "negative", "absolute"] = "negative"


class WhitenessRequest(SeriesRequest):
    max_lag: int = Field(default=30, ge=1)
    replications: int = Field(default=500, ge=10, le=10000)
    level: float = Field(default=0.95, gt=0, lt=1)
    seed: int = Field(default=42, ge=0)
    gaussianize_type: Optional[TransformType] = None


class BootstrapRequest(SeriesRequest):
    lambertw_type: TransformType = TransformType.S
    n_grid: Optional[list[int]] = None
    replications: int = Field(default=100, ge=2, le=1000)
    config: EstimatorConfig = Field(default_factory=EstimatorConfig)


class BootstrapResponse(BaseModel):
    trace: BootstrapTrace
    sd_times_sqrt_n: list[dict]


@router.post("/hill", response_model=HillResponse)
async def hill(request: HillRequest):
    """Hill curves per tail side of the median-centered series."""
    curves = [
        hill_curve(x, request.k_grid, request.estimator, request.beta, side=side, label="data")
        for side, x in tail_samples(request.values, request.split).items()
    ]
    study = None
    if request.simulate:
        spec = default_study_spec(
            n=len(request.values),
            replications=request.replications,
            estimator=request.estimator,
            split=request.split,
            seed=request.seed,
        )
        study = hill_study(spec)
    return HillResponse(curves=curves, study=study)


@router.post("/powerlaw", response_model=PowerLawFit)
async def powerlaw(request: PowerLawRequest):
    """Power-law fit with KS-selected cutoff on one tail side."""
    mode = "absolute" if request.side == "absolute" else "split"
    return select_xmin(tail_samples(request.values, mode)[request.side])


@router.post("/whiteness", response_model=AcfReport)
async def whiteness(request: WhitenessRequest):
    """ACF with bootstrap band and Ljung-Box statistics."""
    return whiteness_report(
        request.values,
        request.max_lag,
        request.replications,
        request.level,
        request.seed,
        gaussianize_type=request.gaussianize_type,
    )


@router.post("/bootstrap", response_model=BootstrapResponse)
async def bootstrap(request: BootstrapRequest):
    """Bootstrap IGMM estimates and their sd * sqrt(n) per subsample size."""
    trace = bootstrap_igmm(
        request.values, request.lambertw_type, request.n_grid, request.replications, request.config
    )
    return BootstrapResponse(trace=trace, sd_times_sqrt_n=sd_times_sqrt_n(trace).to_dict(orient="records"))
