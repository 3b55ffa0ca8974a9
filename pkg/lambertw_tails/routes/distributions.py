"""Distribution endpoints: regime lookup and sampling."""

from fastapi import APIRouter
from pydantic import BaseModel, Field

from lambertw_tails.models import Regime, Theta, TransformType, Variant
from lambertw_tails.services import regime_classify, sample

router = APIRouter(prefix="/api/distributions", tags=["distributions"])


class SampleRequest(BaseModel):
    """Request body for drawing Lambert W x F samples."""

    n: int = Field(default=1000, ge=1, le=1_000_000)
    theta: Theta = Field(default_factory=Theta)
    variant: Variant = Field(default=Variant.MEAN_VARIANCE)
    lambertw_type: TransformType = Field(default=TransformType.S)
    seed: int = Field(default=42, ge=0)


class RegimeResponse(BaseModel):
    alpha: float
    regime: Regime
    finite_mean: bool
    finite_variance: bool


@router.get("/regime/{alpha}", response_model=RegimeResponse)
async def regime(alpha: float):
    """Tail regime of a tail index alpha."""
    result = regime_classify(alpha)
    return RegimeResponse(
        alpha=alpha,
        regime=result,
        finite_mean=result != Regime.III,
        finite_variance=result == Regime.I,
    )


@router.post("/sample")
async def draw(request: SampleRequest):
    """Seeded i.i.d. draws."""
    values = sample(request.n, request.theta, request.variant, request.lambertw_type, seed=request.seed)
    return {"values": values.tolist(), "seed": request.seed}
