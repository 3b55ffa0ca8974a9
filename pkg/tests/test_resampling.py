"""Tests for bootstrap IGMM traces, ACF bands and Ljung-Box."""

import math

import numpy as np
import pytest
from scipy import stats

from lambertw_tails.errors import DegenerateInputError, DomainError, InsufficientDataError
from lambertw_tails.models import BootstrapTrace, EstimatorConfig, TransformType
from lambertw_tails.services.defaults import load_defaults
from lambertw_tails.services.resampling import (
    acf,
    acf_bootstrap_band,
    acf_normal_band,
    bootstrap_igmm,
    default_n_grid,
    ljung_box,
    sd_times_sqrt_n,
    whiteness_report,
)


def ar1(n: int, phi: float, seed: int) -> np.ndarray:
    eps = np.random.default_rng(seed).standard_normal(n)
    y = np.empty(n)
    y[0] = eps[0]
    for t in range(1, n):
        y[t] = phi * y[t - 1] + eps[t]
    return y


def test_default_n_grid():
    grid = default_n_grid(1413)
    assert grid[0] == 100
    assert grid[-1] == 1413
    assert len(grid) == 8
    assert default_n_grid(50) == [50]
    assert default_n_grid(3200)[0] == 200
    with pytest.raises(InsufficientDataError):
        default_n_grid(5)


def test_default_n_grid_reads_bundled_settings(monkeypatch):
    settings = load_defaults()["bootstrap"]
    grid = default_n_grid(1413)
    assert len(grid) == settings["grid_points"]
    assert grid[0] == settings["min_size"]

    monkeypatch.setattr(
        "lambertw_tails.services.resampling.load_defaults",
        lambda: {"bootstrap": {"replications": 100, "grid_points": 3, "min_size": 400}},
    )
    assert default_n_grid(1600) == [400, 800, 1600]
    assert default_n_grid(1600, points=2, min_size=100) == [100, 1600]
    with pytest.raises(DomainError):
        default_n_grid(1600, points=0)


def test_bootstrap_igmm_shape_and_determinism():
    y = np.random.default_rng(0).standard_normal(300)
    cfg = EstimatorConfig(seed=3)
    trace = bootstrap_igmm(y, TransformType.S, n_grid=[50, 100, 200], B=4, cfg=cfg)
    assert trace.array().shape == (3, 3, 4)
    assert trace.param_names == ["mu_x", "sigma_x", "gamma"]
    assert trace.seed == 3
    assert bootstrap_igmm(y, TransformType.S, n_grid=[50, 100, 200], B=4, cfg=cfg, jobs=4) == trace


def test_bootstrap_igmm_rejects_bad_setup():
    y = np.random.default_rng(1).standard_normal(100)
    with pytest.raises(DomainError):
        bootstrap_igmm(y, B=1)
    with pytest.raises(DomainError):
        bootstrap_igmm(y, n_grid=[50, 200], B=2)
    with pytest.raises(DomainError):
        bootstrap_igmm(y, n_grid=[5], B=2)


def test_bootstrap_records_failed_replicates():
    """Resamples of a two-valued series are degenerate and become NaN rows."""
    y = np.array([0.0, 1.0] * 30)
    trace = bootstrap_igmm(y, TransformType.S, n_grid=[20], B=3)
    assert np.all(np.isnan(trace.array()))
    assert trace.converged == [[False, False, False]]
    with pytest.raises(InsufficientDataError):
        sd_times_sqrt_n(trace)


def test_bootstrap_trace_serializes_nan_as_null():
    trace = BootstrapTrace(
        lambertw_type=TransformType.H,
        param_names=["mu_x", "sigma_x", "delta"],
        n_grid=[10],
        estimates=[[[math.nan, 1.0]], [[1.0, 1.0]], [[0.1, 0.2]]],
        converged=[[False, True]],
        seed=0,
    )
    assert "null" in trace.model_dump_json()
    frame = trace.to_frame()
    assert list(frame.columns) == ["parameter", "n", "replicate", "estimate", "converged"]
    assert len(frame) == 6


def test_bootstrap_trace_requires_increasing_grid():
    with pytest.raises(ValueError):
        BootstrapTrace(
            lambertw_type=TransformType.S,
            param_names=["mu_x", "sigma_x", "gamma"],
            n_grid=[200, 100],
            estimates=[[[0.0, 0.0]] * 2] * 3,
            converged=[[True, True]] * 2,
            seed=0,
        )


def test_sd_times_sqrt_n_constant_estimates():
    trace = BootstrapTrace(
        lambertw_type=TransformType.S,
        param_names=["mu_x", "sigma_x", "gamma"],
        n_grid=[100, 400],
        estimates=[[[1.0] * 3] * 2, [[2.0] * 3] * 2, [[0.0] * 3] * 2],
        converged=[[True] * 3] * 2,
        seed=0,
    )
    table = sd_times_sqrt_n(trace)
    assert list(table.columns) == ["parameter", "n", "value", "n_converged", "n_excluded"]
    assert len(table) == 6
    assert np.all(table["value"] == 0.0)
    assert np.all(table["n_excluded"] == 0)


def test_sd_times_sqrt_n_excludes_non_converged():
    estimates = [[[0.0, 2.0, 100.0]], [[1.0, 1.0, 1.0]], [[0.0, 0.0, 0.0]]]
    trace = BootstrapTrace(
        lambertw_type=TransformType.S,
        param_names=["mu_x", "sigma_x", "gamma"],
        n_grid=[100],
        estimates=estimates,
        converged=[[True, True, False]],
        seed=0,
    )
    row = sd_times_sqrt_n(trace).iloc[0]
    assert row["value"] == pytest.approx(math.sqrt(2.0) * 10.0)
    assert row["n_converged"] == 2
    assert row["n_excluded"] == 1


def test_acf_basics():
    y = np.random.default_rng(2).standard_normal(200)
    rho = acf(y, 5)
    assert rho[0] == 1.0
    assert np.all(np.abs(rho) <= 1.0)
    assert np.allclose(acf(-3.0 * y + 7.0, 5), rho)


def test_acf_alternating_series():
    n = 100
    y = np.array([1.0, -1.0] * (n // 2))
    assert acf(y, 1)[1] == pytest.approx(-(n - 1) / n)


def test_acf_errors():
    with pytest.raises(DegenerateInputError):
        acf(np.ones(10), 2)
    with pytest.raises(DomainError):
        acf(np.arange(5.0), 5)


def test_acf_normal_band():
    assert acf_normal_band(1413) == pytest.approx(1.959964 / math.sqrt(1413), rel=1e-6)


def test_acf_bootstrap_band():
    y = np.random.default_rng(3).standard_normal(1413)
    lo, hi = acf_bootstrap_band(y, 30, B=200, seed=4)
    width = acf_normal_band(y.size)
    assert np.mean(hi[1:]) == pytest.approx(width, rel=0.15)
    assert np.mean(lo[1:]) == pytest.approx(-width, rel=0.15)
    assert lo[0] == hi[0] == 1.0
    lo2, hi2 = acf_bootstrap_band(y, 30, B=200, seed=4)
    assert np.array_equal(lo, lo2) and np.array_equal(hi, hi2)
    narrow_lo, narrow_hi = acf_bootstrap_band(y, 30, B=200, level=0.5, seed=4)
    assert np.all(narrow_lo >= lo) and np.all(narrow_hi <= hi)


def test_ljung_box_matches_formula():
    y = np.random.default_rng(5).standard_normal(300)
    q, p = ljung_box(y, 10)
    rho = acf(y, 10)[1:]
    k = np.arange(1, 11)
    expected = 300 * 302 * np.cumsum(rho**2 / (300 - k))
    assert np.allclose(q, expected)
    assert np.allclose(p, stats.chi2.sf(expected, k))
    assert np.all(np.diff(q) >= 0)


def test_ljung_box_rejects_ar1():
    q, p = ljung_box(ar1(500, 0.8, seed=6), 10)
    assert p[9] < 0.001


def test_ljung_box_errors():
    with pytest.raises(DomainError):
        ljung_box(np.arange(10.0), 0)
    with pytest.raises(DegenerateInputError):
        ljung_box(np.ones(20), 3)


def test_whiteness_report():
    y = np.random.default_rng(7).standard_normal(500)
    report = whiteness_report(y, max_lag=10, B=100, seed=1)
    assert report.lags == list(range(11))
    assert report.rho[0] == 1.0
    assert report.ljung_box_q[0] == 0.0
    assert report.ljung_box_p[0] == 1.0
    assert report.n == 500
    frame = report.to_frame()
    assert list(frame.columns) == ["lag", "rho", "band_lo", "band_hi", "ljung_box_q", "ljung_box_p"]
    assert len(frame) == 11


def test_whiteness_report_after_gaussianizing():
    y = np.random.default_rng(8).standard_cauchy(1000)
    report = whiteness_report(y, max_lag=5, B=100, gaussianize_type=TransformType.H)
    assert report.n == 1000
    assert all(0.0 <= p <= 1.0 for p in report.ljung_box_p)


@pytest.mark.slow
def test_ljung_box_pvalues_are_uniform_under_the_null():
    p_values = [ljung_box(np.random.default_rng(seed).standard_normal(500), 30)[1][-1] for seed in range(1000)]
    assert stats.kstest(p_values, "uniform").statistic < 0.05


@pytest.mark.slow
def test_bootstrap_regime_separation():
    """Gaussian sd * sqrt(n) is flat in n; a Cauchy location estimate does not tighten."""
    cfg = EstimatorConfig(seed=11)
    gauss = np.random.default_rng(12).standard_normal(1413)
    table = sd_times_sqrt_n(bootstrap_igmm(gauss, TransformType.S, B=100, cfg=cfg, jobs=4))
    for _, rows in table.groupby("parameter"):
        assert rows["value"].max() / rows["value"].min() < 2.0

    cauchy = np.random.default_rng(13).standard_cauchy(1413)
    table = sd_times_sqrt_n(bootstrap_igmm(cauchy, TransformType.S, B=100, cfg=cfg, jobs=4))
    mu = table[table["parameter"] == "mu_x"].sort_values("n")
    sd = mu["value"].to_numpy() / np.sqrt(mu["n"].to_numpy())
    assert sd[-1] >= 0.5 * sd[0]
