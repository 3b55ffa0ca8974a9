"""Maximum likelihood estimation of Lambert W x F distributions."""

import logging
import math
from typing import Optional, Union

import numpy as np
from scipy import optimize, stats

from lambertw_tails.errors import DomainError, LambertWError, MomentRestrictionError
from lambertw_tails.models import (
    EstimatorConfig,
    Family,
    InputDist,
    MleFit,
    Theta,
    TransformType,
    Variant,
)
from lambertw_tails.services.distributions import logpdf
from lambertw_tails.services.igmm import gaussianize, igmm, sample_kurtosis

logger = logging.getLogger(__name__)

_NU_DEFAULT = 30.0
_NU_RANGE = (3.0, 50.0)
_DELTA_FLOOR = 1e-3
_HESSIAN_STEP = 1e-4


def loglik(theta: Theta, y, variant: Variant, lambertw_type: TransformType) -> float:
    """Sum of log densities; -inf when any point has zero density."""
    values = np.atleast_1d(logpdf(np.asarray(y, dtype=float), theta, variant, lambertw_type))
    if not np.all(np.isfinite(values)):
        return -math.inf
    return float(values.sum())


def param_names(family: Family, lambertw_type: TransformType) -> list[str]:
    names = ["c", "s"]
    if family == Family.STUDENT_T:
        names.append("nu")
    if lambertw_type == TransformType.S:
        names.append("gamma")
    elif lambertw_type == TransformType.H:
        names.append("delta")
    else:
        names.extend(["delta_l", "delta_r"])
    return names


def theta_from_values(
    family: Family, lambertw_type: TransformType, values: dict[str, float]
) -> Theta:
    """Build a Theta from a name -> value mapping as produced by param_names."""
    input = InputDist(family=family, c=values["c"], s=values["s"], nu=values.get("nu"))
    if lambertw_type == TransformType.S:
        return Theta(input=input, gamma=values["gamma"])
    if lambertw_type == TransformType.H:
        return Theta.heavy(input, values["delta"])
    return Theta(input=input, delta_l=values["delta_l"], delta_r=values["delta_r"])


def theta_values(theta: Theta, lambertw_type: TransformType) -> dict[str, float]:
    values = {"c": theta.input.c, "s": theta.input.s}
    if theta.input.family == Family.STUDENT_T:
        values["nu"] = theta.input.nu
    if lambertw_type == TransformType.S:
        values["gamma"] = theta.gamma
    elif lambertw_type == TransformType.H:
        values["delta"] = theta.delta_l
    else:
        values["delta_l"] = theta.delta_l
        values["delta_r"] = theta.delta_r
    return values


class _Reparam:
    """Unconstrained coordinates for the simplex search.

    log for s and delta, log(nu - 2) for a mean-variance student-t, log(nu)
    otherwise, identity for c and gamma.
    """

    def __init__(self, variant: Variant):
        self.nu_shift = 2.0 if variant == Variant.MEAN_VARIANCE else 0.0

    def to_free(self, name: str, value: float) -> float:
        if name == "s":
            return math.log(value)
        if name in ("delta", "delta_l", "delta_r"):
            # delta = 0 has no log image
            return math.log(max(value, _DELTA_FLOOR))
        if name == "nu":
            return math.log(value - self.nu_shift)
        return value

    def from_free(self, name: str, value: float) -> float:
        if name in ("s", "delta", "delta_l", "delta_r"):
            return math.exp(value)
        if name == "nu":
            return self.nu_shift + math.exp(value)
        return value


def _moment_start(
    y: np.ndarray,
    family: Family,
    variant: Variant,
    lambertw_type: TransformType,
    cfg: EstimatorConfig,
) -> Theta:
    """IGMM fit mapped to Theta, with family parameters from the Gaussianized data."""
    fit = igmm(y, lambertw_type, cfg)
    tau = fit.tau
    mu, sigma = tau.mu_x, tau.sigma_x
    x = gaussianize(y, fit)

    nu = None
    if family == Family.NORMAL:
        c, s = mu, sigma
    elif family == Family.STUDENT_T:
        kurt = sample_kurtosis(x)
        nu = float(np.clip(4.0 + 6.0 / (kurt - 3.0), *_NU_RANGE)) if kurt > 3.0 else _NU_DEFAULT
        c, s = mu, sigma * math.sqrt((nu - 2.0) / nu)
    elif family == Family.CAUCHY:
        q1, q3 = np.percentile(x, [25, 75])
        c, s = float(np.median(x)), float(q3 - q1) / 2.0
    elif variant == Variant.MEAN_VARIANCE:
        c, s = mu - sigma, sigma
    else:
        c = float(np.min(x)) - 1e-3 * sigma
        s = float(np.mean(x)) - c

    # location-scale shapes act on (x - c) / s instead of (x - mu) / sigma
    ratio = s / sigma if variant == Variant.LOCATION_SCALE else 1.0
    input = InputDist(family=family, c=c, s=s, nu=nu)
    if lambertw_type == TransformType.S:
        return Theta(input=input, gamma=tau.gamma * ratio)
    return Theta(input=input, delta_l=tau.delta_l * ratio**2, delta_r=tau.delta_r * ratio**2)


def _finite_start(theta: Theta, y: np.ndarray, variant: Variant, lambertw_type: TransformType) -> Theta:
    """Shrink gamma toward 0 until every y has positive density."""
    current = theta
    for _ in range(40):
        if math.isfinite(loglik(current, y, variant, lambertw_type)):
            return current
        if lambertw_type != TransformType.S or current.gamma == 0.0:
            break
        gamma = current.gamma / 2.0 if abs(current.gamma) > 1e-8 else 0.0
        current = current.model_copy(update={"gamma": gamma})
    raise DomainError("no starting value with finite log-likelihood")


def _hessian(func, x: np.ndarray) -> np.ndarray:
    """Central-difference Hessian of func at x."""
    k = x.size
    h = _HESSIAN_STEP * np.maximum(1.0, np.abs(x))
    f0 = func(x)
    hess = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        hess[i, i] = (func(x + ei) - 2.0 * f0 + func(x - ei)) / h[i] ** 2
        for j in range(i):
            ej = np.zeros(k)
            ej[j] = h[j]
            value = (
                func(x + ei + ej) - func(x + ei - ej) - func(x - ei + ej) + func(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
            hess[i, j] = hess[j, i] = value
    return hess


def _std_errors(func, x: np.ndarray) -> Optional[np.ndarray]:
    """sqrt of the diagonal of the inverse observed information; None if singular."""
    info = -_hessian(func, x)
    if not np.all(np.isfinite(info)):
        logger.warning("observed information is not finite; std errors unavailable")
        return None
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        logger.warning("observed information is singular; std errors unavailable")
        return None
    diag = np.diag(cov)
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        logger.warning("observed information is not positive definite; std errors unavailable")
        return None
    return np.sqrt(diag)


def require_finite_moments(family: Family, variant: Variant) -> None:
    """Mean-variance needs an input family with finite mean and variance."""
    if family == Family.CAUCHY and variant == Variant.MEAN_VARIANCE:
        raise MomentRestrictionError("cauchy input has no mean or variance; use location_scale")


def mle(
    y,
    family: Family = Family.NORMAL,
    variant: Variant = Variant.MEAN_VARIANCE,
    lambertw_type: TransformType = TransformType.S,
    init: Union[Theta, str] = "auto",
    cfg: Optional[EstimatorConfig] = None,
    fixed: Optional[dict[str, float]] = None,
) -> MleFit:
    """Maximize the log-likelihood with a Nelder-Mead simplex.

    `init="auto"` starts from IGMM. Coordinates listed in `fixed` are held at
    the given values and get no standard error.
    """
    cfg = cfg or EstimatorConfig()
    y = np.asarray(y, dtype=float)
    require_finite_moments(family, variant)

    names = param_names(family, lambertw_type)
    fixed = dict(fixed or {})
    unknown = set(fixed) - set(names)
    if unknown:
        raise DomainError(f"cannot fix unknown parameter(s) {sorted(unknown)}; expected {names}")

    start = _moment_start(y, family, variant, lambertw_type, cfg) if init == "auto" else init
    if not isinstance(start, Theta):
        raise DomainError(f"init must be a Theta or 'auto', got {init!r}")
    start_values = {**theta_values(start, lambertw_type), **fixed}
    start = theta_from_values(family, lambertw_type, start_values)
    if "gamma" not in fixed:
        start = _finite_start(start, y, variant, lambertw_type)
    init_loglik = loglik(start, y, variant, lambertw_type)
    if not math.isfinite(init_loglik):
        raise DomainError("fixed parameters give zero density to some observations")
    start_values = theta_values(start, lambertw_type)

    free = [name for name in names if name not in fixed]
    reparam = _Reparam(variant)

    def values_of(point: np.ndarray) -> dict[str, float]:
        values = dict(fixed)
        values.update({name: reparam.from_free(name, v) for name, v in zip(free, point)})
        return values

    def neg_loglik(point: np.ndarray) -> float:
        try:
            theta = theta_from_values(family, lambertw_type, values_of(point))
            value = loglik(theta, y, variant, lambertw_type)
        except (LambertWError, ValueError, OverflowError):
            return math.inf
        return -value if math.isfinite(value) else math.inf

    x0 = np.array([reparam.to_free(name, start_values[name]) for name in free])
    iterations = 0
    converged = True
    estimates = dict(start_values)
    if free:
        options = {"maxiter": max(2000, 400 * len(free)), "xatol": 1e-8, "fatol": 1e-10, "adaptive": True}
        point = x0
        # restarted once from the first optimum
        for attempt in range(2):
            res = optimize.minimize(neg_loglik, point, method="Nelder-Mead", options=options)
            iterations += int(res.nit)
            logger.debug("Nelder-Mead pass %d: -loglik=%.10g nit=%d", attempt + 1, res.fun, res.nit)
            point = res.x
        converged = bool(res.success)
        estimates = values_of(point)

    theta = theta_from_values(family, lambertw_type, estimates)
    value = loglik(theta, y, variant, lambertw_type)
    if value < init_loglik:
        theta, value, estimates = start, init_loglik, dict(start_values)

    std_errors = t_values = None
    if free:

        def loglik_free(point: np.ndarray) -> float:
            values = dict(fixed)
            values.update(zip(free, point))
            try:
                return loglik(theta_from_values(family, lambertw_type, values), y, variant, lambertw_type)
            except (LambertWError, ValueError, OverflowError):
                return -math.inf

        se = _std_errors(loglik_free, np.array([estimates[name] for name in free]))
        if se is not None:
            by_name = dict(zip(free, se))
            std_errors = [float(by_name[name]) if name in by_name else None for name in names]
            t_values = [
                estimates[name] / by_name[name] if name in by_name else None for name in names
            ]

    if not converged:
        logger.warning("MLE (%s, %s, type %s) did not converge", family.value, variant.value, lambertw_type.value)
    logger.info("MLE %s: loglik=%.6f (start %.6f)", family.value, value, init_loglik)
    return MleFit(
        theta=theta,
        variant=variant,
        lambertw_type=lambertw_type,
        param_names=names,
        estimates=[float(estimates[name]) for name in names],
        loglik=value,
        init_loglik=init_loglik,
        std_errors=std_errors,
        t_values=t_values,
        converged=converged,
        iterations=iterations,
        fixed=fixed,
    )


def wald_pvalues(fit: MleFit) -> Optional[list[Optional[float]]]:
    """Two-sided normal p-values for the t values."""
    if fit.t_values is None:
        return None
    return [None if t is None else float(2.0 * stats.norm.sf(abs(t))) for t in fit.t_values]
