"""Solver, estimator and run configuration."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from lambertw_tails.models.distribution import TransformType, Variant


class SolverConfig(BaseModel):
    """Tolerances of the Lambert W root-finder."""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-12, gt=0, description="Residual tolerance |w e^w - z|")
    max_iter: int = Field(default=64, ge=1, description="Halley iterations before giving up")


class EstimatorConfig(BaseModel):
    """Settings shared by IGMM, MLE and the bootstrap."""

    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-6, gt=0, description="Max-norm change of tau that stops IGMM")
    max_iter: int = Field(default=100, ge=1)
    target_skewness: float = Field(default=0.0, description="Skewness IGMM drives the input toward")
    target_kurtosis: float = Field(default=3.0, gt=1.0, description="Kurtosis IGMM drives the input toward")
    gamma_bounds: tuple[float, float] = Field(default=(-2.0, 2.0))
    delta_bounds: tuple[float, float] = Field(default=(0.0, 5.0))
    seed: int = Field(default=42, ge=0)

    @model_validator(mode="after")
    def _check_bounds(self) -> "EstimatorConfig":
        if not self.gamma_bounds[0] < self.gamma_bounds[1]:
            raise ValueError(f"degenerate gamma_bounds {self.gamma_bounds}")
        if not self.delta_bounds[0] < self.delta_bounds[1]:
            raise ValueError(f"degenerate delta_bounds {self.delta_bounds}")
        if self.delta_bounds[0] < 0:
            raise ValueError("delta_bounds lower limit must be >= 0")
        return self


class RunConfig(BaseModel):
    """Command-line settings common to all subcommands."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=42, ge=0)
    tol: float = Field(default=1e-6, gt=0)
    max_iter: int = Field(default=100, ge=1)
    output_format: str = Field(default="json", pattern="^(json|csv)$")
    lambertw_type: TransformType = TransformType.S
    variant: Variant = Variant.MEAN_VARIANCE
    target_skewness: float = 0.0
    strict: bool = False
    jobs: int = Field(default=1, ge=1)

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(
            tol=self.tol,
            max_iter=self.max_iter,
            target_skewness=self.target_skewness,
            seed=self.seed,
        )
