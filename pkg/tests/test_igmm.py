"""Tests for IGMM moment matching and Gaussianization."""

import numpy as np
import pytest

from lambertw_tails.errors import DegenerateInputError, InsufficientDataError
from lambertw_tails.models import (
    EstimatorConfig,
    Family,
    InputDist,
    SkewTau,
    Theta,
    TransformType,
    Variant,
)
from lambertw_tails.services.distributions import sample
from lambertw_tails.services.igmm import (
    admissible_gamma_interval,
    delta_for_target,
    gamma_for_target,
    gaussianize,
    igmm,
    sample_kurtosis,
    sample_skewness,
)
from lambertw_tails.services.lambertw import forward_heavy, forward_skew


def skewed_normal_sample(n: int, gamma: float, seed: int) -> np.ndarray:
    theta = Theta(input=InputDist(family=Family.NORMAL), gamma=gamma)
    return sample(n, theta, Variant.MEAN_VARIANCE, TransformType.S, seed=seed)


def test_moment_conventions():
    """1/n central moments: a symmetric grid has zero skew; normal kurtosis is 3."""
    assert sample_skewness(np.linspace(-1, 1, 11)) == pytest.approx(0.0, abs=1e-12)
    draws = np.random.default_rng(0).standard_normal(200_000)
    assert sample_kurtosis(draws) == pytest.approx(3.0, abs=0.05)


def test_gamma_for_target_symmetric_data():
    z = np.linspace(-3, 3, 101)
    assert gamma_for_target(z, 0.0) == pytest.approx(0.0, abs=1e-4)


def test_gamma_for_target_recovers_skew():
    u = np.random.default_rng(5).standard_normal(10_000)
    gamma = gamma_for_target(forward_skew(u, -0.2), 0.0)
    assert -0.25 <= gamma <= -0.15


def test_gamma_for_target_clamps_to_bounds():
    u = np.random.default_rng(6).standard_normal(10_000)
    assert gamma_for_target(forward_skew(u, -0.5), 0.0, bounds=(-0.1, 0.1)) == pytest.approx(-0.1)


def test_gamma_for_target_rejects_constant_input():
    with pytest.raises(DegenerateInputError):
        gamma_for_target(np.ones(20), 0.0)


def test_admissible_gamma_interval():
    """Every point stays on the principal branch inside the interval."""
    z = np.array([-2.0, 0.5, 4.0])
    lo, hi = admissible_gamma_interval(z, (-2.0, 2.0))
    assert lo == pytest.approx(-1 / (np.e * 4.0))
    assert hi == pytest.approx(1 / (np.e * 2.0))


def test_delta_for_target_gaussian_data():
    z = np.random.default_rng(7).standard_normal(10_000)
    delta_l, delta_r = delta_for_target(z, 3.0)
    assert delta_l == delta_r
    assert delta_l < 0.05


def test_delta_for_target_recovers_heavy_tails():
    u = np.random.default_rng(8).standard_normal(10_000)
    delta, _ = delta_for_target(forward_heavy(u, 0.25), 3.0)
    assert 0.15 <= delta <= 0.35


def test_delta_for_target_two_sided():
    """Only the left tail is heavy."""
    u = np.random.default_rng(9).standard_normal(10_000)
    z = np.where(u < 0, forward_heavy(u, 0.3), u)
    delta_l, delta_r = delta_for_target(z, 3.0, two_sided=True)
    assert delta_l > delta_r + 0.1


def test_igmm_rejects_short_or_constant_input():
    with pytest.raises(InsufficientDataError):
        igmm(np.arange(5.0))
    with pytest.raises(DegenerateInputError):
        igmm(np.full(50, 2.0))


def test_igmm_symmetric_data_is_a_fixed_point():
    y = np.linspace(-2, 2, 201)
    fit = igmm(y, TransformType.S)
    assert fit.converged
    assert fit.tau.gamma == pytest.approx(0.0, abs=1e-4)
    assert fit.tau.mu_x == pytest.approx(y.mean(), abs=1e-6)
    assert fit.tau.sigma_x == pytest.approx(y.std(ddof=1), rel=1e-4)


def test_igmm_recovers_skew_parameters():
    y = skewed_normal_sample(5000, -0.2, seed=11)
    fit = igmm(y, TransformType.S)
    assert fit.converged
    assert fit.tau.mu_x == pytest.approx(0.0, abs=0.1)
    assert fit.tau.sigma_x == pytest.approx(1.0, abs=0.1)
    assert fit.tau.gamma == pytest.approx(-0.2, abs=0.1)
    assert fit.param_names == ["mu_x", "sigma_x", "gamma"]


def test_igmm_zeroes_skewness_at_convergence():
    cfg = EstimatorConfig(tol=1e-6)
    y = skewed_normal_sample(3000, 0.15, seed=12)
    fit = igmm(y, TransformType.S, cfg)
    assert fit.converged
    assert abs(sample_skewness(gaussianize(y, fit))) < 10 * cfg.tol


def test_igmm_trace_stops_below_tolerance():
    cfg = EstimatorConfig(tol=1e-6)
    fit = igmm(skewed_normal_sample(2000, -0.1, seed=13), TransformType.S, cfg)
    assert fit.converged
    last, previous = np.array(fit.trace[-1]), np.array(fit.trace[-2])
    assert np.max(np.abs(last - previous)) < cfg.tol
    assert len(fit.trace) == fit.iterations + 1


def test_igmm_scale_equivariance():
    """Affine maps with a > 0 move mu and sigma, gamma is unchanged."""
    y = skewed_normal_sample(2000, -0.15, seed=14)
    base = igmm(y, TransformType.S)
    moved = igmm(3.0 * y + 2.0, TransformType.S)
    assert moved.tau.mu_x == pytest.approx(3.0 * base.tau.mu_x + 2.0, abs=1e-4)
    assert moved.tau.sigma_x == pytest.approx(3.0 * base.tau.sigma_x, abs=1e-4)
    assert moved.tau.gamma == pytest.approx(base.tau.gamma, abs=1e-4)


def test_igmm_is_deterministic():
    y = skewed_normal_sample(1000, 0.1, seed=15)
    assert igmm(y, TransformType.S) == igmm(y, TransformType.S)


def test_igmm_two_sided_heavy_tails():
    theta = Theta(input=InputDist(), delta_l=0.3, delta_r=0.0)
    y = sample(5000, theta, Variant.MEAN_VARIANCE, TransformType.HH, seed=16)
    fit = igmm(y, TransformType.HH)
    assert fit.tau.delta_l > fit.tau.delta_r
    assert fit.param_names == ["mu_x", "sigma_x", "delta_l", "delta_r"]


def test_gaussianize_cauchy_sample():
    """Type-h IGMM turns a Cauchy sample into data with Gaussian kurtosis."""
    y = np.random.default_rng(17).standard_cauchy(1413)
    fit = igmm(y, TransformType.H)
    x = gaussianize(y, fit)
    assert 0.5 < fit.tau.delta < 2.0
    assert 2.5 <= sample_kurtosis(x) <= 3.5


def test_gaussianize_uses_fitted_tau():
    y = skewed_normal_sample(500, 0.0, seed=18)
    fit = igmm(y, TransformType.S)
    fit = fit.model_copy(update={"tau": SkewTau(mu_x=0.0, sigma_x=1.0, gamma=0.0)})
    assert np.allclose(gaussianize(y, fit), y)


@pytest.mark.slow
def test_igmm_recovery_rate_over_seeds():
    """At least 90% of seeds recover each parameter within 0.1."""
    skew_hits, heavy_hits = 0, 0
    for seed in range(50):
        s = igmm(skewed_normal_sample(5000, -0.2, seed), TransformType.S).tau
        skew_hits += abs(s.mu_x) < 0.1 and abs(s.sigma_x - 1) < 0.1 and abs(s.gamma + 0.2) < 0.1
        heavy = sample(5000, Theta.heavy(InputDist(), 0.25), Variant.MEAN_VARIANCE, TransformType.H, seed=seed)
        h = igmm(heavy, TransformType.H).tau
        heavy_hits += abs(h.mu_x) < 0.1 and abs(h.sigma_x - 1) < 0.1 and abs(h.delta - 0.25) < 0.1
    assert skew_hits >= 45
    assert heavy_hits >= 45


@pytest.mark.slow
def test_gaussianize_cauchy_over_seeds():
    hits = 0
    for seed in range(20):
        y = np.random.default_rng(seed).standard_cauchy(1413)
        fit = igmm(y, TransformType.H)
        kurt = sample_kurtosis(gaussianize(y, fit))
        hits += fit.converged and 0.7 <= fit.tau.delta <= 1.6 and 2.5 <= kurt <= 3.5
    assert hits >= 18
