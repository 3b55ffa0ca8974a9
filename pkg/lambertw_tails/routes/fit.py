"""Estimation endpoints: IGMM, MLE and Gaussianization."""

from typing import Optional, Union

from fastapi import APIRouter
from pydantic import BaseModel, Field

from lambertw_tails.models import (
    EstimatorConfig,
    Family,
    IgmmFit,
    MleFit,
    Theta,
    TransformType,
    Variant,
)
from lambertw_tails.services import gaussianize, igmm, mle

router = APIRouter(prefix="/api/fit", tags=["fit"])


class FitRequest(BaseModel):
    """Request body shared by the fit endpoints."""

    values: list[float] = Field(..., min_length=10, description="Observed series")
    lambertw_type: TransformType = Field(default=TransformType.S)
    config: EstimatorConfig = Field(default_factory=EstimatorConfig)


class MleRequest(FitRequest):
    """Request body for maximum likelihood."""

    family: Family = Field(default=Family.NORMAL)
    variant: Variant = Field(default=Variant.MEAN_VARIANCE)
    init: Optional[Theta] = Field(default=None, description="Start value; IGMM-based when omitted")
    fixed: dict[str, float] = Field(default_factory=dict)


class GaussianizeResponse(BaseModel):
    """Back-transformed series with the fit that produced it."""

    fit: IgmmFit
    values: list[float]


@router.post("/igmm", response_model=IgmmFit)
async def fit_igmm(request: FitRequest):
    """Iterative generalized method of moments."""
    return igmm(request.values, request.lambertw_type, request.config)


@router.post("/mle", response_model=MleFit)
async def fit_mle(request: MleRequest):
    """Maximum likelihood with Wald standard errors."""
    init: Union[Theta, str] = request.init if request.init is not None else "auto"
    return mle(
        request.values,
        request.family,
        request.variant,
        request.lambertw_type,
        init=init,
        cfg=request.config,
        fixed=request.fixed,
    )


@router.post("/gaussianize", response_model=GaussianizeResponse)
async def fit_gaussianize(request: FitRequest):
    """Fit IGMM and return the back-transformed series."""
    fit = igmm(request.values, request.lambertw_type, request.config)
    return GaussianizeResponse(fit=fit, values=gaussianize(request.values, fit).tolist())
