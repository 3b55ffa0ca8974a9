"""Bootstrap IGMM convergence analysis and whiteness diagnostics."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

from lambertw_tails.errors import DegenerateInputError, DomainError, InsufficientDataError, LambertWError
from lambertw_tails.models import (
    AcfReport,
    BootstrapTrace,
    EstimatorConfig,
    TransformType,
    tau_names,
)
from lambertw_tails.services.defaults import load_defaults
from lambertw_tails.services.igmm import MIN_IGMM_SIZE, gaussianize, igmm

logger = logging.getLogger(__name__)


def default_n_grid(N: int, points: Optional[int] = None, min_size: Optional[int] = None) -> list[int]:
    """Log-spaced subsample sizes from max(min_size, N / 16) up to N.

    `points` and `min_size` default to the bundled bootstrap settings
    (`grid_points`, `min_size`).
    """
    settings = load_defaults()["bootstrap"]
    points = points if points is not None else settings["grid_points"]
    min_size = min_size if min_size is not None else settings["min_size"]
    if points < 1:
        raise DomainError(f"grid needs at least one point, got {points}")
    if N < MIN_IGMM_SIZE:
        raise InsufficientDataError(f"bootstrap needs at least {MIN_IGMM_SIZE} points, got {N}")
    low = min(max(min_size, N / 16.0), N)
    grid = np.unique(np.round(np.geomspace(low, N, points)).astype(int))
    return [int(n) for n in grid]


def bootstrap_igmm(
    y,
    lambertw_type: TransformType = TransformType.S,
    n_grid: Optional[list[int]] = None,
    B: int = 100,
    cfg: Optional[EstimatorConfig] = None,
    jobs: int = 1,
) -> BootstrapTrace:
    """IGMM estimates on B resamples (with replacement) per subsample size.

    Replicate (i, b) draws from SeedSequence([seed, i, b]). Failed replicates
    are stored as NaN with converged=False.
    """
    cfg = cfg or EstimatorConfig()
    y = np.asarray(y, dtype=float)
    if B < 2:
        raise DomainError(f"need at least 2 bootstrap replicates, got {B}")
    n_grid = list(n_grid) if n_grid is not None else default_n_grid(y.size)
    if not n_grid or min(n_grid) < MIN_IGMM_SIZE or max(n_grid) > y.size:
        raise DomainError(f"n_grid must lie in [{MIN_IGMM_SIZE}, {y.size}]")

    names = tau_names(lambertw_type)
    tasks = [(i, b) for i in range(len(n_grid)) for b in range(B)]
    logger.info("bootstrap IGMM type %s: %d sizes x %d replicates", lambertw_type.value, len(n_grid), B)

    def run(task: tuple[int, int]) -> tuple[list[float], bool]:
        i, b = task
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, i, b]))
        resample = y[rng.integers(0, y.size, n_grid[i])]
        try:
            fit = igmm(resample, lambertw_type, cfg)
        except LambertWError as exc:
            logger.debug("replicate (n=%d, b=%d) failed: %s", n_grid[i], b, exc)
            return [math.nan] * len(names), False
        return fit.tau_vector(), fit.converged

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(run, tasks))

    est = np.full((len(names), len(n_grid), B), np.nan)
    converged = [[False] * B for _ in n_grid]
    for (i, b), (values, ok) in zip(tasks, results):
        est[:, i, b] = values
        converged[i][b] = ok
    failed = len(tasks) - sum(map(sum, converged))
    if failed:
        logger.warning("%d of %d bootstrap replicates did not converge", failed, len(tasks))

    return BootstrapTrace(
        lambertw_type=lambertw_type,
        param_names=names,
        n_grid=n_grid,
        estimates=est.tolist(),
        converged=converged,
        seed=cfg.seed,
    )


def sd_times_sqrt_n(trace: BootstrapTrace) -> pd.DataFrame:
    """Sample sd of converged estimates times sqrt(n) per (parameter, n)."""
    est = trace.array()
    ok = np.asarray(trace.converged, dtype=bool)
    rows = []
    for p, name in enumerate(trace.param_names):
        for i, n in enumerate(trace.n_grid):
            values = est[p, i][ok[i] & np.isfinite(est[p, i])]
            if values.size < 2:
                raise InsufficientDataError(
                    f"fewer than 2 converged replicates for {name} at n={n}"
                )
            rows.append(
                {
                    "parameter": name,
                    "n": n,
                    "value": float(np.std(values, ddof=1) * math.sqrt(n)),
                    "n_converged": int(values.size),
                    "n_excluded": int(est.shape[2] - values.size),
                }
            )
    return pd.DataFrame(rows, columns=["parameter", "n", "value", "n_converged", "n_excluded"])


def _check_lag(y: np.ndarray, max_lag: int) -> None:
    if not 0 <= max_lag < y.size:
        raise DomainError(f"max_lag must lie in [0, {y.size - 1}], got {max_lag}")


def acf(y, max_lag: int) -> np.ndarray:
    """Sample autocorrelations rho_0 .. rho_max_lag (rho_0 = 1)."""
    y = np.asarray(y, dtype=float)
    _check_lag(y, max_lag)
    d = y - y.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise DegenerateInputError("autocorrelation of a constant series is undefined")
    rho = np.array([np.dot(d[: y.size - k], d[k:]) / denom for k in range(max_lag + 1)])
    rho[0] = 1.0
    return rho


def acf_normal_band(n: int, level: float = 0.95) -> float:
    """Half-width z_{(1 + level) / 2} / sqrt(n) of the white-noise band."""
    return float(stats.norm.ppf(0.5 + level / 2.0) / math.sqrt(n))


def acf_bootstrap_band(
    y, max_lag: int, B: int = 500, level: float = 0.95, seed: int = 42
) -> tuple[np.ndarray, np.ndarray]:
    """Per-lag quantiles of ACFs of i.i.d. resamples of y."""
    y = np.asarray(y, dtype=float)
    _check_lag(y, max_lag)
    if not 0 < level < 1:
        raise DomainError(f"level must lie in (0, 1), got {level}")
    rng = np.random.default_rng(seed)
    draws = np.empty((B, max_lag + 1))
    for b in range(B):
        resample = y[rng.integers(0, y.size, y.size)]
        try:
            draws[b] = acf(resample, max_lag)
        except DegenerateInputError:
            draws[b] = np.nan
    tail = (1.0 - level) / 2.0
    lo, hi = np.nanquantile(draws, [tail, 1.0 - tail], axis=0)
    return lo, hi


def ljung_box(y, max_lag: int) -> tuple[np.ndarray, np.ndarray]:
    """Q(h) = n(n + 2) sum_{k <= h} rho_k^2 / (n - k) and chi2(h) upper-tail p-values, h = 1..max_lag."""
    y = np.asarray(y, dtype=float)
    if max_lag < 1:
        raise DomainError(f"max_lag must be >= 1, got {max_lag}")
    rho = acf(y, max_lag)[1:]
    n = y.size
    lags = np.arange(1, max_lag + 1)
    q = n * (n + 2.0) * np.cumsum(rho**2 / (n - lags))
    p = stats.chi2.sf(q, lags)
    return q, p


def whiteness_report(
    y,
    max_lag: int = 30,
    B: int = 500,
    level: float = 0.95,
    seed: int = 42,
    gaussianize_type: Optional[TransformType] = None,
    cfg: Optional[EstimatorConfig] = None,
) -> AcfReport:
    """ACF, bootstrap band and Ljung-Box per lag; lag 0 carries Q = 0, p = 1.

    With gaussianize_type set, the series is first back-transformed with its
    IGMM fit of that type.
    """
    y = np.asarray(y, dtype=float)
    if gaussianize_type is not None:
        fit = igmm(y, gaussianize_type, cfg or EstimatorConfig(seed=seed))
        y = gaussianize(y, fit)
    rho = acf(y, max_lag)
    lo, hi = acf_bootstrap_band(y, max_lag, B, level, seed)
    q, p = ljung_box(y, max_lag) if max_lag >= 1 else (np.array([]), np.array([]))
    return AcfReport(
        lags=list(range(max_lag + 1)),
        rho=rho.tolist(),
        band_lo=lo.tolist(),
        band_hi=hi.tolist(),
        ljung_box_q=[0.0, *q.tolist()],
        ljung_box_p=[1.0, *np.clip(p, 0.0, 1.0).tolist()],
        normal_band=acf_normal_band(y.size, level),
        level=level,
        n=int(y.size),
    )
