"""Lambert W x F distributions: data transforms, densities, sampling and regimes."""

import logging
import math
from typing import Optional, Union

import numpy as np

from lambertw_tails.errors import DomainError, MomentRestrictionError
from lambertw_tails.models import (
    Family,
    HeavyTau,
    InputDist,
    Regime,
    SkewTau,
    SolverConfig,
    Theta,
    TransformType,
    Variant,
)
from lambertw_tails.services.lambertw import (
    BRANCH_POINT,
    forward_heavy,
    forward_skew,
    inverse_heavy,
    inverse_skew,
    log_heavy_derivative,
    log_skew_derivative,
)

logger = logging.getLogger(__name__)

Params = Union[Theta, SkewTau, HeavyTau]


def sigma_from_t_scale(s: float, nu: float) -> float:
    """Standard deviation of a student-t with scale s: s * sqrt(nu / (nu - 2))."""
    if s <= 0:
        raise DomainError(f"scale must be positive, got {s}")
    if nu <= 2:
        raise MomentRestrictionError(f"student-t with nu={nu} <= 2 has no finite variance")
    return s * math.sqrt(nu / (nu - 2.0))


def center_scale(input: InputDist, variant: Variant) -> tuple[float, float]:
    """Center and scale of the transformation for a given input and variant."""
    if variant == Variant.LOCATION_SCALE:
        return input.c, input.s
    return input.mean(), input.std()


def _resolve(params: Params, variant: Variant) -> tuple[float, float, float, float, float]:
    """(center, scale, gamma, delta_l, delta_r) for a Theta or a tau vector."""
    if isinstance(params, Theta):
        center, scale = center_scale(params.input, variant)
        return center, scale, params.gamma, params.delta_l, params.delta_r
    if isinstance(params, SkewTau):
        return params.mu_x, params.sigma_x, params.gamma, 0.0, 0.0
    return params.mu_x, params.sigma_x, 0.0, params.delta_l, params.delta_r


def _check_type(lambertw_type: TransformType, delta_l: float, delta_r: float) -> None:
    if lambertw_type == TransformType.H and delta_l != delta_r:
        raise DomainError("type h requires delta_l == delta_r; use type hh")


def _split_apply(u: np.ndarray, func, delta_l: float, delta_r: float, cfg=None) -> np.ndarray:
    """Apply a heavy-tail map with delta_l on u < 0 and delta_r on u >= 0."""
    out = np.empty_like(u)
    left = u < 0
    args = (cfg,) if cfg is not None else ()
    out[left] = func(u[left], delta_l, *args)
    out[~left] = func(u[~left], delta_r, *args)
    return out


def _finish(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


def admissible_mask(z, gamma: float) -> np.ndarray:
    """Points with a real principal-branch inverse: gamma * z >= -1/e."""
    z = np.asarray(z, dtype=float)
    if gamma == 0.0:
        return np.ones(z.shape, dtype=bool)
    return gamma * z >= BRANCH_POINT


def forward_transform(x, theta: Params, variant: Variant, lambertw_type: TransformType):
    """Map input data x to Lambert W x F data y = g(u) * scale + center."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    center, scale, gamma, delta_l, delta_r = _resolve(theta, variant)
    _check_type(lambertw_type, delta_l, delta_r)

    u = (x - center) / scale
    if lambertw_type == TransformType.S:
        z = forward_skew(u, gamma)
    else:
        z = _split_apply(u, forward_heavy, delta_l, delta_r)
    return _finish(z * scale + center, scalar)


def backward_transform(
    y,
    params: Params,
    variant: Variant,
    lambertw_type: TransformType,
    cfg: Optional[SolverConfig] = None,
):
    """Recover input data x from observed y on the principal branch.

    Raises DomainError listing every inadmissible point for type s.
    """
    scalar = np.ndim(y) == 0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    center, scale, gamma, delta_l, delta_r = _resolve(params, variant)
    _check_type(lambertw_type, delta_l, delta_r)

    z = (y - center) / scale
    if lambertw_type == TransformType.S:
        ok = admissible_mask(z, gamma)
        if not np.all(ok):
            bad = np.flatnonzero(~ok)
            raise DomainError(
                f"{bad.size} point(s) have no principal-branch inverse for gamma={gamma}",
                indices=bad,
            )
        u = inverse_skew(z, gamma, cfg=cfg)
    else:
        u = _split_apply(z, inverse_heavy, delta_l, delta_r, cfg)
    return _finish(u * scale + center, scalar)


def logpdf(y, theta: Theta, variant: Variant, lambertw_type: TransformType):
    """Log density of Y; -inf where y has no principal-branch preimage."""
    scalar = np.ndim(y) == 0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    center, scale, gamma, delta_l, delta_r = _resolve(theta, variant)
    _check_type(lambertw_type, delta_l, delta_r)
    dist = theta.input.scipy_dist()

    z = (y - center) / scale
    out = np.full(z.shape, -np.inf)
    if lambertw_type == TransformType.S:
        ok = admissible_mask(z, gamma)
        u = inverse_skew(z[ok], gamma)
        out[ok] = dist.logpdf(center + scale * u) - log_skew_derivative(u, gamma)
    else:
        u = _split_apply(z, inverse_heavy, delta_l, delta_r)
        log_jac = np.where(u < 0, log_heavy_derivative(u, delta_l), log_heavy_derivative(u, delta_r))
        out = dist.logpdf(center + scale * u) - log_jac
    return _finish(out, scalar)


def pdf(y, theta: Theta, variant: Variant, lambertw_type: TransformType):
    """Density of Y (principal branch only, not renormalized)."""
    values = np.exp(logpdf(y, theta, variant, lambertw_type))
    return float(values) if np.ndim(values) == 0 else values


def cdf(y, theta: Theta, variant: Variant, lambertw_type: TransformType):
    """Distribution function for the bijective heavy-tail types."""
    if lambertw_type == TransformType.S:
        raise DomainError("cdf is provided for types h and hh only")
    x = backward_transform(y, theta, variant, lambertw_type)
    values = theta.input.scipy_dist().cdf(x)
    return float(values) if np.ndim(values) == 0 else values


def quantile(p, theta: Theta, variant: Variant, lambertw_type: TransformType):
    """Quantile function for the bijective heavy-tail types."""
    if lambertw_type == TransformType.S:
        raise DomainError("quantile is provided for types h and hh only")
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise DomainError("probabilities must lie in (0, 1)")
    x = theta.input.scipy_dist().ppf(p)
    return forward_transform(x if x.ndim else float(x), theta, variant, lambertw_type)


def _standard_draws(input: InputDist, n: int, rng: np.random.Generator) -> np.ndarray:
    if input.family == Family.NORMAL:
        return rng.standard_normal(n)
    if input.family == Family.STUDENT_T:
        return rng.standard_t(input.nu, n)
    if input.family == Family.CAUCHY:
        return rng.standard_cauchy(n)
    return rng.standard_exponential(n)


def sample(
    n: int,
    theta: Theta,
    variant: Variant,
    lambertw_type: TransformType,
    seed: Union[int, np.random.SeedSequence] = 42,
) -> np.ndarray:
    """Draw n i.i.d. values: sample X ~ F, then apply forward_transform."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    center_scale(theta.input, variant)
    rng = np.random.default_rng(seed)
    x = theta.input.c + theta.input.s * _standard_draws(theta.input, n, rng)
    return forward_transform(x, theta, variant, lambertw_type)


def theta_to_tau(theta: Theta, variant: Variant, lambertw_type: TransformType) -> Union[SkewTau, HeavyTau]:
    """Transformation vector (center, scale, shape) implied by theta."""
    center, scale = center_scale(theta.input, variant)
    if lambertw_type == TransformType.S:
        return SkewTau(mu_x=center, sigma_x=scale, gamma=theta.gamma)
    _check_type(lambertw_type, theta.delta_l, theta.delta_r)
    return HeavyTau(mu_x=center, sigma_x=scale, delta_l=theta.delta_l, delta_r=theta.delta_r)


def regime_classify(alpha: Union[float, InputDist]) -> Regime:
    """Regime III for alpha <= 1, II for 1 < alpha <= 2, I above.

    An InputDist is classified by its tail index.
    """
    if isinstance(alpha, InputDist):
        alpha = alpha.tail_index()
    if not alpha > 0:
        raise DomainError(f"tail index must be positive, got {alpha}")
    if alpha <= 1:
        return Regime.III
    if alpha <= 2:
        return Regime.II
    return Regime.I


def p_nonprincipal(gamma: float, input: InputDist, variant: Variant = Variant.LOCATION_SCALE) -> float:
    """Probability that U falls beyond the critical point -1/gamma."""
    if gamma == 0.0:
        return 0.0
    center, scale = center_scale(input, variant)
    x_crit = center + scale * (-1.0 / gamma)
    dist = input.scipy_dist()
    if gamma > 0:
        return float(dist.cdf(x_crit))
    return float(dist.sf(x_crit))


def moment_order_bound(delta: float) -> float:
    """Moments of order below 1/delta exist for heavy-tail Lambert W x Gaussian."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    return 1.0 / delta
