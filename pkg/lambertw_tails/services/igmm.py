"""Iterative generalized method of moments (IGMM) for types s, h and hh."""

import logging
from typing import Optional

import numpy as np
from scipy import optimize, stats

from lambertw_tails.errors import DegenerateInputError, InsufficientDataError
from lambertw_tails.models import (
    EstimatorConfig,
    HeavyTau,
    IgmmFit,
    SkewTau,
    TransformType,
    Variant,
)
from lambertw_tails.services.distributions import admissible_mask, backward_transform
from lambertw_tails.services.lambertw import BRANCH_POINT, inverse_heavy, inverse_skew

logger = logging.getLogger(__name__)

MIN_IGMM_SIZE = 10
_XATOL = 1e-10
_DELTA_START = 0.2


def sample_skewness(x: np.ndarray) -> float:
    """m3 / m2^(3/2) with 1/n central moments."""
    return float(stats.skew(x, bias=True))


def sample_kurtosis(x: np.ndarray) -> float:
    """m4 / m2^2 with 1/n central moments (3 for a Gaussian)."""
    return float(stats.kurtosis(x, fisher=False, bias=True))


def _require_spread(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.unique(z).size < 3:
        raise DegenerateInputError("moment matching needs at least 3 distinct values")
    return z


def _bounded_argmin(objective, lo: float, hi: float) -> float:
    """Bounded Brent search; the bracket endpoints are candidates too."""
    res = optimize.minimize_scalar(
        objective, bounds=(lo, hi), method="bounded", options={"xatol": _XATOL, "maxiter": 500}
    )
    candidates = [(objective(lo), lo), (objective(hi), hi), (float(res.fun), float(res.x))]
    return min(candidates, key=lambda c: c[0])[1]


def admissible_gamma_interval(z: np.ndarray, bounds: tuple[float, float]) -> tuple[float, float]:
    """Intersection of bounds with the gammas that keep every z on the principal branch."""
    lo, hi = bounds
    z_max, z_min = float(np.max(z)), float(np.min(z))
    if z_max > 0:
        lo = max(lo, BRANCH_POINT / z_max)
    if z_min < 0:
        hi = min(hi, BRANCH_POINT / z_min)
    if lo >= hi:
        return bounds
    return lo, hi


def gamma_for_target(z, target: float = 0.0, bounds: tuple[float, float] = (-2.0, 2.0)) -> float:
    """Gamma whose principal-branch back-transform of z has the target skewness."""
    z = _require_spread(z)
    lo, hi = admissible_gamma_interval(z, bounds)

    def gap(gamma: float) -> float:
        ok = admissible_mask(z, gamma)
        if ok.sum() < 3:
            return np.inf
        u = inverse_skew(z[ok], gamma)
        return (sample_skewness(u) - target) ** 2

    return _bounded_argmin(gap, lo, hi)


def _match_kurtosis(z: np.ndarray, target: float, bounds: tuple[float, float]) -> float:
    lo, hi = bounds
    if sample_kurtosis(inverse_heavy(z, lo)) <= target:
        # kurtosis only decreases in delta
        return lo

    def gap(delta: float) -> float:
        return (sample_kurtosis(inverse_heavy(z, delta)) - target) ** 2

    return _bounded_argmin(gap, lo, hi)


def delta_for_target(
    z,
    target: float = 3.0,
    bounds: tuple[float, float] = (0.0, 5.0),
    two_sided: bool = False,
) -> tuple[float, float]:
    """(delta_l, delta_r) whose back-transform of z has the target kurtosis.

    Two-sided matching uses each side mirrored around zero.
    """
    z = _require_spread(z)
    if not two_sided:
        delta = _match_kurtosis(z, target, bounds)
        return delta, delta

    deltas = []
    for side in (z[z < 0], z[z > 0]):
        mirrored = _require_spread(np.concatenate([side, -side]))
        deltas.append(_match_kurtosis(mirrored, target, bounds))
    return deltas[0], deltas[1]


def _make_tau(lambertw_type: TransformType, values: list[float]):
    if lambertw_type == TransformType.S:
        return SkewTau(mu_x=values[0], sigma_x=values[1], gamma=values[2])
    if lambertw_type == TransformType.H:
        return HeavyTau(mu_x=values[0], sigma_x=values[1], delta_l=values[2], delta_r=values[2])
    return HeavyTau(mu_x=values[0], sigma_x=values[1], delta_l=values[2], delta_r=values[3])


def _initial_tau(y: np.ndarray, lambertw_type: TransformType, cfg: EstimatorConfig) -> list[float]:
    mu = float(np.median(y))
    sigma = float(stats.median_abs_deviation(y, scale="normal"))
    if sigma <= 0:
        sigma = float(np.std(y, ddof=1))
    if lambertw_type == TransformType.S:
        return [mu, sigma, float(np.clip(sample_skewness(y) / 6.0, *cfg.gamma_bounds))]
    delta0 = float(np.clip(_DELTA_START, *cfg.delta_bounds))
    if lambertw_type == TransformType.H:
        return [mu, sigma, delta0]
    return [mu, sigma, delta0, delta0]


def _inner_step(z: np.ndarray, lambertw_type: TransformType, cfg: EstimatorConfig):
    """Moment-matching step on standardized data; returns (shape, u)."""
    if lambertw_type == TransformType.S:
        gamma = gamma_for_target(z, cfg.target_skewness, cfg.gamma_bounds)
        ok = admissible_mask(z, gamma)
        return [gamma], inverse_skew(z[ok], gamma)
    two_sided = lambertw_type == TransformType.HH
    delta_l, delta_r = delta_for_target(z, cfg.target_kurtosis, cfg.delta_bounds, two_sided)
    u = np.where(z < 0, inverse_heavy(z, delta_l), inverse_heavy(z, delta_r))
    shape = [delta_l, delta_r] if two_sided else [delta_l]
    return shape, u


def igmm(y, lambertw_type: TransformType = TransformType.S, cfg: Optional[EstimatorConfig] = None) -> IgmmFit:
    """Estimate tau by alternating moment matching with mean / sd updates.

    Non-convergence within cfg.max_iter is reported through `converged`.
    """
    cfg = cfg or EstimatorConfig()
    y = np.asarray(y, dtype=float)
    if y.size < MIN_IGMM_SIZE:
        raise InsufficientDataError(f"IGMM needs at least {MIN_IGMM_SIZE} points, got {y.size}")
    _require_spread(y)

    tau = _initial_tau(y, lambertw_type, cfg)
    trace = [tau]
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        mu, sigma = tau[0], tau[1]
        z = (y - mu) / sigma
        shape, u = _inner_step(z, lambertw_type, cfg)
        x = u * sigma + mu
        new_tau = [float(np.mean(x)), float(np.std(x, ddof=1)), *shape]
        change = max(abs(a - b) for a, b in zip(new_tau, tau))
        tau = new_tau
        trace.append(tau)
        logger.debug("IGMM iteration %d: tau=%s change=%.3g", iterations, tau, change)
        if change < cfg.tol:
            converged = True
            break

    if lambertw_type == TransformType.S:
        # the final gamma must keep every point of the final z admissible
        z = (y - tau[0]) / tau[1]
        lo, hi = admissible_gamma_interval(z, cfg.gamma_bounds)
        tau = [tau[0], tau[1], float(np.clip(tau[2], lo, hi))]

    if not converged:
        logger.warning("IGMM (type %s) did not converge in %d iterations", lambertw_type.value, cfg.max_iter)
    logger.info("IGMM type %s: tau=%s after %d iterations", lambertw_type.value, tau, iterations)
    return IgmmFit(
        tau=_make_tau(lambertw_type, tau),
        lambertw_type=lambertw_type,
        iterations=iterations,
        converged=converged,
        trace=trace,
    )


def gaussianize(y, fit: IgmmFit) -> np.ndarray:
    """Back-transform y with the fitted tau."""
    return backward_transform(np.asarray(y, dtype=float), fit.tau, Variant.LOCATION_SCALE, fit.lambertw_type)
