"""Real Lambert W branches and the skew / heavy-tail transforms built on them.

W is computed with Halley's method (Corless et al. 1996, Eq. 5.9) from
piecewise initial guesses: a series in p = sqrt(2(ez + 1)) near the branch
point, a log1p-based guess for moderate z and the asymptotic expansion
log z - log log z for large z. All functions accept scalars or numpy arrays
and return the same shape.
"""

import logging
import math
from typing import Optional

import numpy as np

from lambertw_tails.errors import ConvergenceError, DomainError, InfiniteResultError
from lambertw_tails.models import Branch, SolverConfig

logger = logging.getLogger(__name__)

BRANCH_POINT = -math.exp(-1.0)
_STEP_TOL = 1e-15
_DEFAULT_CFG = SolverConfig()


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def _branch_series(z: np.ndarray, sign: float) -> np.ndarray:
    """Series around z = -1/e; sign +1 gives W0, -1 gives W-1."""
    p = sign * np.sqrt(np.maximum(2.0 * (math.e * z + 1.0), 0.0))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3


def _halley(z: np.ndarray, w: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    for iteration in range(cfg.max_iter):
        ew = np.exp(w)
        f = w * ew - z
        w1 = w + 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        dw = np.where(w1 == 0.0, 0.0, dw)
        w = w - dw
        if np.all(np.abs(dw) <= _STEP_TOL * (1.0 + np.abs(w))):
            logger.debug("Halley converged after %d iterations", iteration + 1)
            break
    residual = np.abs(w * np.exp(w) - z)
    failed = ~(residual <= cfg.abs_tol * np.maximum(1.0, np.abs(z)))
    if np.any(failed):
        raise ConvergenceError(
            f"Lambert W did not converge within {cfg.max_iter} iterations "
            f"for {int(failed.sum())} point(s)"
        )
    return w


def _check_domain(z: np.ndarray, lower: float, upper: float, cfg: SolverConfig, name: str) -> np.ndarray:
    if np.any(~np.isfinite(z)):
        raise DomainError(f"{name} requires finite input")
    bad = (z < lower - cfg.abs_tol) | (z >= upper)
    if np.any(bad):
        raise DomainError(
            f"{name} is undefined for z outside [-1/e, {upper})",
            indices=np.flatnonzero(np.atleast_1d(bad)),
        )
    # inputs within abs_tol below the branch point are clamped onto it
    return np.maximum(z, BRANCH_POINT)


def lambert_w0(z, cfg: Optional[SolverConfig] = None):
    """Principal branch W0(z) for z >= -1/e, w >= -1."""
    cfg = cfg or _DEFAULT_CFG
    arr, scalar = _as_array(z)
    arr = _check_domain(arr, BRANCH_POINT, math.inf, cfg, "lambert_w0")

    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        lp = np.log1p(arr)
        moderate = lp * (1.0 - np.log1p(lp) / (2.0 + lp))
        l1 = np.log(np.where(arr > 3.0, arr, 3.0))
        l2 = np.log(l1)
        large = l1 - l2 + l2 / l1
        near_branch = _branch_series(arr, 1.0)
    w = np.where(arr < -0.25, near_branch, np.where(arr > 3.0, large, moderate))
    w = np.where(arr == 0.0, 0.0, w)
    return _out(_halley(arr, w, cfg), scalar)


def lambert_wm1(z, cfg: Optional[SolverConfig] = None):
    """Non-principal branch W-1(z) for -1/e <= z < 0, w <= -1."""
    cfg = cfg or _DEFAULT_CFG
    arr, scalar = _as_array(z)
    arr = _check_domain(arr, BRANCH_POINT, 0.0, cfg, "lambert_wm1")

    with np.errstate(invalid="ignore", divide="ignore"):
        l1 = np.log(-np.minimum(arr, -1e-300))
        l2 = np.log(-l1)
        asymptotic = l1 - l2 + l2 / l1
    w = np.where(arr < -0.25, _branch_series(arr, -1.0), asymptotic)
    return _out(_halley(arr, w, cfg), scalar)


def _lambert_w0_from_log(log_z: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """W0(e^L) for large L, solving w + log(w) = L."""
    w = log_z - np.log(log_z)
    for _ in range(cfg.max_iter):
        dw = (w + np.log(w) - log_z) / (1.0 + 1.0 / w)
        w = w - dw
        if np.all(np.abs(dw) <= _STEP_TOL * w):
            break
    return w


def forward_skew(u, gamma: float):
    """Skew transform u * exp(gamma * u)."""
    arr, scalar = _as_array(u)
    with np.errstate(over="ignore", invalid="ignore"):
        z = arr * np.exp(gamma * arr)
    overflow = ~np.isfinite(z) & np.isfinite(arr)
    if np.any(overflow):
        raise InfiniteResultError(
            f"forward_skew overflowed for gamma={gamma}",
            indices=np.flatnonzero(np.atleast_1d(overflow)),
        )
    return _out(z, scalar)


def inverse_skew(
    z,
    gamma: float,
    branch: Branch = Branch.PRINCIPAL,
    cfg: Optional[SolverConfig] = None,
):
    """Inverse of forward_skew on the requested branch: W(gamma z) / gamma."""
    cfg = cfg or _DEFAULT_CFG
    arr, scalar = _as_array(z)
    if gamma == 0.0:
        return _out(arr.copy(), scalar)

    gz = gamma * arr
    bad = gz < BRANCH_POINT - cfg.abs_tol
    if np.any(bad):
        raise DomainError(
            f"no real inverse: gamma * z < -1/e for gamma={gamma}",
            indices=np.flatnonzero(np.atleast_1d(bad)),
        )
    if branch == Branch.PRINCIPAL:
        u = lambert_w0(gz, cfg) / gamma
    else:
        positive = gz >= 0.0
        if np.any(positive):
            raise DomainError(
                "non-principal branch requires gamma * z < 0",
                indices=np.flatnonzero(np.atleast_1d(positive)),
            )
        u = lambert_wm1(gz, cfg) / gamma
    return _out(np.asarray(u), scalar)


def forward_heavy(u, delta: float):
    """Heavy-tail transform u * exp(delta * u^2 / 2); odd in u."""
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    arr, scalar = _as_array(u)
    with np.errstate(over="ignore", invalid="ignore"):
        z = arr * np.exp(0.5 * delta * arr * arr)
    overflow = ~np.isfinite(z) & np.isfinite(arr)
    if np.any(overflow):
        raise InfiniteResultError(
            f"forward_heavy overflowed for delta={delta}",
            indices=np.flatnonzero(np.atleast_1d(overflow)),
        )
    return _out(z, scalar)


def inverse_heavy(z, delta: float, cfg: Optional[SolverConfig] = None):
    """Inverse of forward_heavy: sign(z) * sqrt(W0(delta z^2) / delta)."""
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    cfg = cfg or _DEFAULT_CFG
    arr, scalar = _as_array(z)
    if delta == 0.0:
        return _out(arr.copy(), scalar)

    flat = np.atleast_1d(arr)
    a = np.abs(flat)
    with np.errstate(over="ignore"):
        dz2 = delta * a * a
    huge = dz2 > 1e300
    w = np.empty_like(a)
    w[~huge] = lambert_w0(dz2[~huge], cfg)
    if np.any(huge):
        w[huge] = _lambert_w0_from_log(math.log(delta) + 2.0 * np.log(a[huge]), cfg)
    u = np.sign(flat) * np.sqrt(w / delta)
    return _out(u.reshape(arr.shape), scalar)


def log_skew_derivative(u, gamma: float):
    """log |d/du forward_skew| = gamma u + log|1 + gamma u|."""
    arr, scalar = _as_array(u)
    with np.errstate(divide="ignore"):
        d = gamma * arr + np.log(np.abs(1.0 + gamma * arr))
    return _out(d, scalar)


def log_heavy_derivative(u, delta: float):
    """log d/du forward_heavy = delta u^2 / 2 + log(1 + delta u^2)."""
    arr, scalar = _as_array(u)
    u2 = arr * arr
    return _out(0.5 * delta * u2 + np.log1p(delta * u2), scalar)
