"""Estimator outputs and diagnostic records."""

import math
from typing import Literal, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import stats

from lambertw_tails.models.distribution import (
    HeavyTau,
    SkewTau,
    Theta,
    TransformType,
    Variant,
)


class Series(BaseModel):
    """A univariate data series read from disk."""

    values: list[float] = Field(..., min_length=1)
    label: str = "series"
    source_path: str = ""

    @field_validator("values")
    @classmethod
    def _finite(cls, values: list[float]) -> list[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("series contains non-finite values")
        return values

    def to_numpy(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class IgmmFit(BaseModel):
    """Result of the iterative generalized method of moments."""

    tau: Union[SkewTau, HeavyTau]
    lambertw_type: TransformType
    iterations: int = Field(..., ge=0)
    converged: bool
    trace: list[list[float]] = Field(default_factory=list, description="tau after each iteration")

    @property
    def param_names(self) -> list[str]:
        return tau_names(self.lambertw_type)

    def tau_vector(self) -> list[float]:
        return tau_values(self.tau, self.lambertw_type)


def tau_names(lambertw_type: TransformType) -> list[str]:
    if lambertw_type == TransformType.S:
        return ["mu_x", "sigma_x", "gamma"]
    if lambertw_type == TransformType.H:
        return ["mu_x", "sigma_x", "delta"]
    return ["mu_x", "sigma_x", "delta_l", "delta_r"]


def tau_values(tau: Union[SkewTau, HeavyTau], lambertw_type: TransformType) -> list[float]:
    if lambertw_type == TransformType.S:
        return [tau.mu_x, tau.sigma_x, tau.gamma]
    if lambertw_type == TransformType.H:
        return [tau.mu_x, tau.sigma_x, tau.delta_l]
    return [tau.mu_x, tau.sigma_x, tau.delta_l, tau.delta_r]


class MleFit(BaseModel):
    """Maximum likelihood fit with Wald-type standard errors."""

    theta: Theta
    variant: Variant
    lambertw_type: TransformType
    param_names: list[str]
    estimates: list[float]
    loglik: float
    init_loglik: float
    std_errors: Optional[list[Optional[float]]] = Field(default=None, description="None entries for fixed coordinates")
    t_values: Optional[list[Optional[float]]] = None
    converged: bool
    iterations: int = 0
    fixed: dict[str, float] = Field(default_factory=dict)

    def confidence_intervals(self, level: float = 0.95) -> Optional[dict[str, tuple[float, float]]]:
        """Wald intervals estimate +/- z * se; None when std errors are unavailable."""
        if self.std_errors is None:
            return None
        z = stats.norm.ppf(0.5 + level / 2)
        return {
            name: (est - z * se, est + z * se)
            for name, est, se in zip(self.param_names, self.estimates, self.std_errors)
            if se is not None
        }


class HillCurve(BaseModel):
    """Tail-index estimates over order-statistic counts k for one tail side."""

    label: str = ""
    side: Literal["positive", "negative", "absolute"] = "positive"
    k_values: list[int]
    alpha_hat: list[float]
    replicate: int = 0

    @model_validator(mode="after")
    def _check_grid(self) -> "HillCurve":
        if len(self.k_values) != len(self.alpha_hat):
            raise ValueError("k_values and alpha_hat differ in length")
        if any(b <= a for a, b in zip(self.k_values, self.k_values[1:])):
            raise ValueError("k_values must be strictly increasing")
        return self


class PowerLawFit(BaseModel):
    """Continuous power-law fit above a KS-selected cutoff."""

    alpha: float = Field(..., gt=1)
    x_min: float = Field(..., gt=0)
    ks_distance: float = Field(..., ge=0, le=1)
    n_tail: int = Field(..., ge=2)


class HillStudySpec(BaseModel):
    """Simulation setup for Hill curves of student-t and Lambert W x t samples."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=1413, ge=100)
    replications: int = Field(default=100, ge=1)
    nu_grid: list[float] = Field(default_factory=lambda: [1.0, 1.5, 5.0, 7.09])
    lambert_theta: Optional[Theta] = None
    variant: Variant = Variant.MEAN_VARIANCE
    estimator: Literal["classic", "harmonic"] = "harmonic"
    beta_sim: float = Field(default=2.0, ge=1)
    beta_data: float = Field(default=1.001, ge=1)
    split: Literal["split", "absolute"] = "split"
    seed: int = Field(default=42, ge=0)


class HillStudyResult(BaseModel):
    """Per-replicate curves plus pointwise averages per (label, side)."""

    curves: list[HillCurve]
    averages: list[HillCurve]
    metadata: dict[str, str] = Field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for curve in self.curves:
            rows.extend(_curve_rows(curve, curve.replicate))
        for curve in self.averages:
            rows.extend(_curve_rows(curve, "mean"))
        return pd.DataFrame(rows, columns=["label", "side", "k", "alpha_hat", "replicate"])


def _curve_rows(curve: HillCurve, replicate) -> list[tuple]:
    return [
        (curve.label, curve.side, k, a, replicate)
        for k, a in zip(curve.k_values, curve.alpha_hat)
    ]


class BootstrapTrace(BaseModel):
    """IGMM estimates indexed by (parameter, subsample size, replicate)."""

    model_config = ConfigDict(ser_json_inf_nan="null")

    lambertw_type: TransformType
    param_names: list[str]
    n_grid: list[int]
    estimates: list[list[list[float]]] = Field(..., description="[parameter][n][replicate], NaN if failed")
    converged: list[list[bool]] = Field(..., description="[n][replicate]")
    seed: int

    @field_validator("n_grid")
    @classmethod
    def _increasing(cls, n_grid: list[int]) -> list[int]:
        if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
            raise ValueError("n_grid must be strictly increasing")
        return n_grid

    def array(self) -> np.ndarray:
        return np.asarray(self.estimates, dtype=float)

    def to_frame(self) -> pd.DataFrame:
        est = self.array()
        rows = [
            (name, n, b, est[p, i, b], self.converged[i][b])
            for p, name in enumerate(self.param_names)
            for i, n in enumerate(self.n_grid)
            for b in range(est.shape[2])
        ]
        return pd.DataFrame(rows, columns=["parameter", "n", "replicate", "estimate", "converged"])


class AcfReport(BaseModel):
    """Sample ACF with bootstrap bands and Ljung-Box statistics per lag."""

    lags: list[int]
    rho: list[float]
    band_lo: list[float]
    band_hi: list[float]
    ljung_box_q: list[float]
    ljung_box_p: list[float]
    normal_band: float = Field(..., ge=0, description="Half-width of the normal-approximation band")
    level: float = Field(default=0.95, gt=0, lt=1)
    n: int

    @model_validator(mode="after")
    def _check(self) -> "AcfReport":
        if self.rho and self.rho[0] != 1.0:
            raise ValueError("rho at lag 0 must equal 1")
        if any(not 0.0 <= p <= 1.0 for p in self.ljung_box_p):
            raise ValueError("p-values must lie in [0, 1]")
        return self

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "lag": self.lags,
                "rho": self.rho,
                "band_lo": self.band_lo,
                "band_hi": self.band_hi,
                "ljung_box_q": self.ljung_box_q,
                "ljung_box_p": self.ljung_box_p,
            }
        )
