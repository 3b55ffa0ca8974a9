"""Hill estimators, continuous power-law MLE and KS-based cutoff selection."""

import logging
from typing import Callable, Literal

import numpy as np

from lambertw_tails.errors import DegenerateInputError, DomainError, InsufficientDataError
from lambertw_tails.models import HillCurve, PowerLawFit

logger = logging.getLogger(__name__)

SplitMode = Literal["split", "absolute"]

MAX_XMIN_CANDIDATES = 250
MIN_TAIL_POINTS = 10
K_GRID_POINTS = 400


def split_tails(y) -> tuple[np.ndarray, np.ndarray]:
    """Median-center y; positive values and magnitudes of negative values (zeros dropped)."""
    y = np.asarray(y, dtype=float)
    if y.size < 4:
        raise InsufficientDataError(f"splitting tails needs at least 4 points, got {y.size}")
    centered = y - np.median(y)
    pos = centered[centered > 0]
    neg = -centered[centered < 0]
    if pos.size == 0 or neg.size == 0:
        raise DegenerateInputError("one tail is empty after median centering")
    return pos, neg


def tail_samples(y, mode: SplitMode = "split") -> dict[str, np.ndarray]:
    """Samples per side: {"positive", "negative"} or pooled {"absolute"}."""
    if mode == "split":
        pos, neg = split_tails(y)
        return {"positive": pos, "negative": neg}
    if mode != "absolute":
        raise DomainError(f"unknown split mode {mode!r}")
    y = np.asarray(y, dtype=float)
    if y.size < 4:
        raise InsufficientDataError(f"tail samples need at least 4 points, got {y.size}")
    absolute = np.abs(y - np.median(y))
    absolute = absolute[absolute > 0]
    if absolute.size < 2:
        raise DegenerateInputError("no spread around the median")
    return {"absolute": absolute}


def _descending_logs(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or np.any(~(x > 0)) or np.any(~np.isfinite(x)):
        raise DomainError("tail estimators need finite positive values")
    return np.log(np.sort(x))[::-1]


def _check_k(k: int, n: int) -> None:
    if not 2 <= k <= n - 1:
        raise DomainError(f"k must lie in [2, {n - 1}], got {k}")


def _alpha_from_h(h: np.ndarray) -> np.ndarray:
    if np.any(~(h > 0)):
        raise DegenerateInputError("top order statistics are tied; tail index undefined")
    return 1.0 / h


def _classic_curve(logs: np.ndarray, k_values: np.ndarray) -> np.ndarray:
    cum = np.cumsum(logs)
    h = cum[k_values - 1] / k_values - logs[k_values]
    return _alpha_from_h(h)


def _harmonic_curve(logs: np.ndarray, k_values: np.ndarray, beta: float) -> np.ndarray:
    if beta == 1.0:
        return _classic_curve(logs, k_values)
    b = beta - 1.0
    h = np.empty(k_values.size)
    for j, k in enumerate(k_values):
        excess = logs[:k] - logs[k]
        m = np.mean(np.expm1(-b * excess))
        h[j] = -m / ((1.0 + m) * b)
    return _alpha_from_h(h)


def hill_classic(x, k: int) -> float:
    """Classic Hill tail index 1 / H from the k largest log-excesses."""
    logs = _descending_logs(x)
    _check_k(k, logs.size)
    return float(_classic_curve(logs, np.array([k]))[0])


def hill_harmonic(x, k: int, beta: float = 2.0) -> float:
    """Harmonic-moment tail index; reduces to hill_classic as beta -> 1.

    With L_i the log-excesses over x_(n-k), the extreme-value index is
    ((mean exp(-(beta - 1) L_i))^-1 - 1) / (beta - 1); alpha is its inverse.
    """
    if beta < 1:
        raise DomainError(f"beta must be >= 1, got {beta}")
    logs = _descending_logs(x)
    _check_k(k, logs.size)
    return float(_harmonic_curve(logs, np.array([k]), beta)[0])


HILL_ESTIMATORS: dict[str, Callable[[np.ndarray, np.ndarray, float], np.ndarray]] = {
    "classic": lambda logs, ks, beta: _classic_curve(logs, ks),
    "harmonic": _harmonic_curve,
}


def default_k_grid(n: int) -> list[int]:
    """Integers in [10, n // 2] thinned to at most 400 points."""
    upper = n // 2
    if upper < 10:
        raise InsufficientDataError(f"default k grid needs n >= 20, got {n}")
    grid = np.unique(np.round(np.linspace(10, upper, K_GRID_POINTS)).astype(int))
    return [int(k) for k in grid]


def hill_curve(
    x,
    k_grid=None,
    estimator: str = "classic",
    beta: float = 2.0,
    side: str = "positive",
    label: str = "",
    replicate: int = 0,
) -> HillCurve:
    """Evaluate a registered Hill estimator over k_grid."""
    if estimator not in HILL_ESTIMATORS:
        raise DomainError(f"unknown Hill estimator {estimator!r}; choose from {sorted(HILL_ESTIMATORS)}")
    if beta < 1:
        raise DomainError(f"beta must be >= 1, got {beta}")
    logs = _descending_logs(x)
    n = logs.size
    k_values = np.asarray(k_grid if k_grid is not None else default_k_grid(n), dtype=int)
    if k_values.size == 0 or k_values.min() < 2 or k_values.max() > n - 1:
        raise DomainError(f"k grid must lie in [2, {n - 1}]")
    alpha = HILL_ESTIMATORS[estimator](logs, k_values, beta)
    return HillCurve(
        label=label,
        side=side,
        k_values=k_values.tolist(),
        alpha_hat=alpha.tolist(),
        replicate=replicate,
    )


def powerlaw_alpha(x, x_min: float) -> float:
    """Continuous power-law MLE 1 + n_tail / sum(log(x / x_min)) over x >= x_min."""
    if not x_min > 0:
        raise DomainError(f"x_min must be positive, got {x_min}")
    x = np.asarray(x, dtype=float)
    tail = x[x >= x_min]
    if tail.size < 2:
        raise InsufficientDataError(f"only {tail.size} point(s) at or above x_min={x_min}")
    log_sum = float(np.sum(np.log(tail / x_min)))
    if log_sum <= 0:
        raise InsufficientDataError("all tail points equal x_min")
    return 1.0 + tail.size / log_sum


def _ks_distance(tail: np.ndarray, x_min: float, alpha: float) -> float:
    """Two-sided KS distance between the sorted tail and the fitted power-law CDF."""
    n = tail.size
    fitted = 1.0 - (tail / x_min) ** (1.0 - alpha)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(n) / n
    return float(max(np.max(upper - fitted), np.max(fitted - lower)))


def xmin_candidates(xs: np.ndarray, min_tail: int = MIN_TAIL_POINTS) -> np.ndarray:
    """Unique values leaving at least min_tail points, thinned to 250 evenly indexed."""
    unique = np.unique(xs)
    n_tail = xs.size - np.searchsorted(xs, unique, side="left")
    unique = unique[n_tail >= min_tail]
    if unique.size > MAX_XMIN_CANDIDATES:
        idx = np.unique(np.round(np.linspace(0, unique.size - 1, MAX_XMIN_CANDIDATES)).astype(int))
        unique = unique[idx]
    return unique


def select_xmin(x, min_tail: int = MIN_TAIL_POINTS) -> PowerLawFit:
    """Scan candidate cutoffs and keep the power-law fit with the smallest KS distance.

    Ties go to the smaller x_min.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 10:
        raise InsufficientDataError(f"cutoff selection needs at least 10 points, got {x.size}")
    if np.any(~(x > 0)):
        raise DomainError("power-law fitting needs positive values")
    xs = np.sort(x)
    candidates = xmin_candidates(xs, min(min_tail, xs.size))

    best = None
    for x_min in candidates:
        tail = xs[np.searchsorted(xs, x_min, side="left"):]
        try:
            alpha = powerlaw_alpha(tail, x_min)
        except InsufficientDataError:
            continue
        ks = _ks_distance(tail, x_min, alpha)
        if best is None or ks < best[0]:
            best = (ks, float(x_min), alpha, tail.size)
    if best is None:
        raise InsufficientDataError("no cutoff leaves a usable tail")

    ks, x_min, alpha, n_tail = best
    logger.info("power-law cutoff x_min=%.6g alpha=%.4f KS=%.4f (n_tail=%d)", x_min, alpha, ks, n_tail)
    return PowerLawFit(alpha=alpha, x_min=x_min, ks_distance=min(ks, 1.0), n_tail=n_tail)
