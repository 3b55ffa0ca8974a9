"""Lambert W x F parameter types: input families, transformation vectors, regimes."""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import stats

from lambertw_tails.errors import MomentRestrictionError


class Family(str, Enum):
    """Supported input distributions F."""
    NORMAL = "normal"
    STUDENT_T = "student_t"
    CAUCHY = "cauchy"
    EXPONENTIAL = "exponential"


class Variant(str, Enum):
    """How center and scale of the transformation are defined."""
    MEAN_VARIANCE = "mean_variance"  # center/scale = mean and sd of X
    LOCATION_SCALE = "location_scale"  # center/scale = location c and scale s of X


class TransformType(str, Enum):
    """Skewed (s), heavy-tailed (h) or two-sided heavy-tailed (hh)."""
    S = "s"
    H = "h"
    HH = "hh"


class Branch(str, Enum):
    PRINCIPAL = "principal"
    NON_PRINCIPAL = "non_principal"


class Regime(str, Enum):
    """Tail regimes by tail index alpha."""
    I = "I"  # finite mean and variance
    II = "II"  # finite mean only
    III = "III"  # no finite mean


class InputDist(BaseModel):
    """Input distribution F with location c, scale s and (student-t only) nu."""

    model_config = ConfigDict(frozen=True)

    family: Family = Field(default=Family.NORMAL)
    c: float = Field(default=0.0, description="Location parameter")
    s: float = Field(default=1.0, gt=0, description="Scale parameter")
    nu: Optional[float] = Field(default=None, gt=0, description="Degrees of freedom (student_t)")

    @model_validator(mode="after")
    def _check_nu(self) -> "InputDist":
        if self.family == Family.STUDENT_T and self.nu is None:
            raise ValueError("student_t input requires nu")
        return self

    def scipy_dist(self):
        """The scipy distribution with this location and scale."""
        if self.family == Family.NORMAL:
            return stats.norm(loc=self.c, scale=self.s)
        if self.family == Family.STUDENT_T:
            return stats.t(df=self.nu, loc=self.c, scale=self.s)
        if self.family == Family.CAUCHY:
            return stats.cauchy(loc=self.c, scale=self.s)
        return stats.expon(loc=self.c, scale=self.s)

    def tail_index(self) -> float:
        """Pareto tail index of F (infinite for light tails)."""
        if self.family == Family.STUDENT_T:
            return float(self.nu)
        if self.family == Family.CAUCHY:
            return 1.0
        return math.inf

    def mean(self) -> float:
        if self.family == Family.CAUCHY or (self.family == Family.STUDENT_T and self.nu <= 1):
            raise MomentRestrictionError(f"{self.family.value} input has no finite mean")
        if self.family == Family.EXPONENTIAL:
            return self.c + self.s
        return self.c

    def std(self) -> float:
        if self.family == Family.CAUCHY:
            raise MomentRestrictionError("cauchy input has no finite variance")
        if self.family == Family.STUDENT_T:
            from lambertw_tails.services.distributions import sigma_from_t_scale

            return sigma_from_t_scale(self.s, self.nu)
        return self.s


class SkewTau(BaseModel):
    """Transformation parameters of a skewed Lambert W x F variable."""

    model_config = ConfigDict(frozen=True)

    mu_x: float = 0.0
    sigma_x: float = Field(default=1.0, gt=0)
    gamma: float = 0.0


class HeavyTau(BaseModel):
    """Transformation parameters of a heavy-tailed Lambert W x F variable.

    The one-sided (type h) case is encoded as delta_l == delta_r.
    """

    model_config = ConfigDict(frozen=True)

    mu_x: float = 0.0
    sigma_x: float = Field(default=1.0, gt=0)
    delta_l: float = Field(default=0.0, ge=0)
    delta_r: float = Field(default=0.0, ge=0)

    @property
    def delta(self) -> float:
        if self.delta_l != self.delta_r:
            raise ValueError("two-sided tau has no single delta")
        return self.delta_l


class Theta(BaseModel):
    """Full parameter vector: input distribution plus gamma or (delta_l, delta_r)."""

    model_config = ConfigDict(frozen=True)

    input: InputDist = Field(default_factory=InputDist)
    gamma: float = 0.0
    delta_l: float = Field(default=0.0, ge=0)
    delta_r: float = Field(default=0.0, ge=0)

    @classmethod
    def heavy(cls, input: InputDist, delta: float) -> "Theta":
        return cls(input=input, delta_l=delta, delta_r=delta)
