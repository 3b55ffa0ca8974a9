"""Tests for Lambert W x F transforms, densities, sampling and regimes."""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import integrate, stats

from lambertw_tails.errors import DomainError, MomentRestrictionError
from lambertw_tails.models import (
    Family,
    HeavyTau,
    InputDist,
    Regime,
    SkewTau,
    Theta,
    TransformType,
    Variant,
)
from lambertw_tails.services.distributions import (
    admissible_mask,
    backward_transform,
    cdf,
    forward_transform,
    logpdf,
    moment_order_bound,
    p_nonprincipal,
    pdf,
    quantile,
    regime_classify,
    sample,
    sigma_from_t_scale,
    theta_to_tau,
)
from lambertw_tails.services.igmm import sample_kurtosis, sample_skewness
from lambertw_tails.services.lambertw import forward_heavy

MV = Variant.MEAN_VARIANCE
LS = Variant.LOCATION_SCALE


def normal_theta(gamma: float = 0.0, c: float = 0.0, s: float = 1.0) -> Theta:
    return Theta(input=InputDist(family=Family.NORMAL, c=c, s=s), gamma=gamma)


def t_theta(nu: float, gamma: float = 0.0, c: float = 0.0, s: float = 1.0) -> Theta:
    return Theta(input=InputDist(family=Family.STUDENT_T, c=c, s=s, nu=nu), gamma=gamma)


def test_sigma_from_t_scale():
    """sd of a t(5) with unit scale is sqrt(5/3)."""
    assert sigma_from_t_scale(1.0, 5.0) == pytest.approx(1.29099, abs=1e-5)
    assert sigma_from_t_scale(2.0, 5.0) == pytest.approx(2 * math.sqrt(5 / 3))


def test_sigma_from_t_scale_needs_finite_variance():
    with pytest.raises(MomentRestrictionError):
        sigma_from_t_scale(1.0, 2.0)
    with pytest.raises(DomainError):
        sigma_from_t_scale(0.0, 5.0)


def test_student_t_requires_nu():
    with pytest.raises(ValidationError):
        InputDist(family=Family.STUDENT_T)


def test_input_moments():
    """Means and standard deviations per family."""
    assert InputDist(family=Family.EXPONENTIAL, c=1.0, s=2.0).mean() == 3.0
    assert InputDist(family=Family.STUDENT_T, s=1.0, nu=5.0).std() == pytest.approx(math.sqrt(5 / 3))
    with pytest.raises(MomentRestrictionError):
        InputDist(family=Family.CAUCHY).mean()
    with pytest.raises(MomentRestrictionError):
        InputDist(family=Family.STUDENT_T, nu=1.0).mean()


def test_forward_backward_round_trip():
    """backward_transform undoes forward_transform for mean-variance t input."""
    theta = t_theta(6.0, gamma=0.05, c=0.5, s=2.0)
    x = 0.5 + 2.0 * np.random.default_rng(3).standard_t(6.0, 1000)
    y = forward_transform(x, theta, MV, TransformType.S)
    assert np.allclose(backward_transform(y, theta, MV, TransformType.S), x, atol=1e-10)


def test_forward_with_zero_gamma_is_identity():
    x = np.array([-1.0, 0.3, 4.0])
    assert np.allclose(forward_transform(x, normal_theta(), MV, TransformType.S), x)


def test_backward_transform_lists_inadmissible_points():
    """Points with gamma * z < -1/e are reported by index."""
    with pytest.raises(DomainError) as exc_info:
        backward_transform(np.array([-10.0, 0.0, 1.0, -20.0]), normal_theta(0.5), MV, TransformType.S)
    assert exc_info.value.indices == [0, 3]


def test_backward_transform_accepts_tau():
    """A tau vector sets center and scale directly."""
    tau = SkewTau(mu_x=1.0, sigma_x=2.0, gamma=0.0)
    assert backward_transform(5.0, tau, LS, TransformType.S) == pytest.approx(5.0)
    heavy = HeavyTau(mu_x=0.0, sigma_x=1.0, delta_l=0.5, delta_r=0.5)
    y = forward_heavy(1.5, 0.5)
    assert backward_transform(y, heavy, LS, TransformType.H) == pytest.approx(1.5)


def test_two_sided_heavy_uses_side_specific_delta():
    """delta_l acts on the left of the center, delta_r on the right."""
    theta = Theta(input=InputDist(), delta_l=0.5, delta_r=0.0)
    y = forward_transform(np.array([-2.0, 2.0]), theta, MV, TransformType.HH)
    assert y[0] == pytest.approx(forward_heavy(-2.0, 0.5))
    assert y[1] == pytest.approx(2.0)


def test_type_h_requires_equal_deltas():
    theta = Theta(input=InputDist(), delta_l=0.5, delta_r=0.1)
    with pytest.raises(DomainError):
        forward_transform(1.0, theta, MV, TransformType.H)


def test_location_scale_skew_is_shifted_scaled_exponential_tilt():
    """Y = (U exp(-bU)) c + a with gamma = -b, scale c and center a."""
    a, b, c = 0.3, 0.1, 1.7
    x = np.linspace(-4.0, 6.0, 41)
    u = (x - a) / c
    theta = Theta(input=InputDist(c=a, s=c), gamma=-b)
    y = forward_transform(x, theta, LS, TransformType.S)
    assert np.allclose(y, u * np.exp(-b * u) * c + a, rtol=0, atol=1e-12)


def test_variants_agree_for_normal_input():
    x = np.random.default_rng(5).normal(1.0, 2.0, 200)
    for lambertw_type, theta in [
        (TransformType.S, normal_theta(0.1, c=1.0, s=2.0)),
        (TransformType.H, Theta.heavy(InputDist(c=1.0, s=2.0), 0.3)),
    ]:
        mv = forward_transform(x, theta, MV, lambertw_type)
        ls = forward_transform(x, theta, LS, lambertw_type)
        assert np.array_equal(mv, ls)


def test_variants_differ_for_student_t():
    """u = 1 under location-scale; mean-variance standardizes by the t(5) sd."""
    theta = t_theta(5.0, gamma=-0.05)
    assert forward_transform(1.0, theta, LS, TransformType.S) == pytest.approx(0.951229, abs=1e-6)
    sigma = math.sqrt(5.0 / 3.0)
    expected = (1.0 / sigma) * math.exp(-0.05 / sigma) * sigma
    assert forward_transform(1.0, theta, MV, TransformType.S) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.962, abs=1e-3)


@pytest.mark.parametrize(
    "lambertw_type, theta",
    [
        (TransformType.H, Theta.heavy(InputDist(family=Family.STUDENT_T, c=0.2, s=1.24, nu=7.09), 0.3)),
        (TransformType.HH, Theta(input=InputDist(c=-0.5, s=0.8), delta_l=0.6, delta_r=0.1)),
    ],
)
def test_heavy_round_trip(lambertw_type, theta):
    x = theta.input.c + theta.input.s * np.random.default_rng(8).standard_normal(1000) * 2.0
    for variant in (MV, LS):
        y = forward_transform(x, theta, variant, lambertw_type)
        assert np.allclose(backward_transform(y, theta, variant, lambertw_type), x, rtol=0, atol=1e-10)


def test_skewed_sample_back_transforms_to_zero_mean():
    n = 100_000
    theta = normal_theta(-0.2)
    y = sample(n, theta, LS, TransformType.S, seed=11)
    assert sample_skewness(y) < 0
    x = backward_transform(y, theta, LS, TransformType.S)
    assert abs(x.mean()) < 4.0 / math.sqrt(n)


def test_cauchy_sample_gaussianized_by_heavy_tau():
    """One-sided heavy tau (-0.23, 0.88, 1.21) brings Cauchy data close to normal kurtosis."""
    y = np.random.default_rng(2).standard_cauchy(5000)
    tau = HeavyTau(mu_x=-0.23, sigma_x=0.88, delta_l=1.21, delta_r=1.21)
    x = backward_transform(y, tau, LS, TransformType.H)
    assert np.all(np.isfinite(x))
    assert 2.0 < sample_kurtosis(x) < 3.5


def test_logpdf_reduces_to_input_density():
    """gamma = 0 gives the input log density."""
    y = np.linspace(-3, 3, 13)
    assert np.allclose(logpdf(y, normal_theta(c=1.0, s=2.0), MV, TransformType.S), stats.norm.logpdf(y, 1.0, 2.0))


def test_logpdf_outside_support():
    """Inadmissible y get zero density."""
    values = logpdf(np.array([-10.0, 0.0]), normal_theta(0.5), MV, TransformType.S)
    assert values[0] == -np.inf
    assert np.isfinite(values[1])


def test_heavy_pdf_integrates_to_one():
    theta = Theta.heavy(InputDist(), 0.2)
    total, _ = integrate.quad(lambda v: pdf(v, theta, MV, TransformType.H), -np.inf, np.inf)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_skew_pdf_integrates_to_principal_mass():
    """Principal-branch density integrates to 1 - p_nonprincipal."""
    theta = normal_theta(0.1)
    total, _ = integrate.quad(lambda v: pdf(v, theta, MV, TransformType.S), -3.6, 60.0, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_cdf_and_quantile_are_inverse():
    theta = Theta(input=InputDist(family=Family.STUDENT_T, nu=5.0), delta_l=0.3, delta_r=0.1)
    y = np.array([-4.0, -0.5, 0.0, 2.0, 7.0])
    assert np.allclose(quantile(cdf(y, theta, LS, TransformType.HH), theta, LS, TransformType.HH), y)
    assert cdf(0.0, Theta.heavy(InputDist(), 0.4), MV, TransformType.H) == pytest.approx(0.5)


def test_cdf_quantile_not_offered_for_skew():
    with pytest.raises(DomainError):
        cdf(0.0, normal_theta(0.1), MV, TransformType.S)
    with pytest.raises(DomainError):
        quantile(0.5, normal_theta(0.1), MV, TransformType.S)
    with pytest.raises(DomainError):
        quantile(1.0, Theta.heavy(InputDist(), 0.4), MV, TransformType.H)


def test_sample_is_seeded():
    theta = normal_theta(-0.2)
    a = sample(500, theta, MV, TransformType.S, seed=9)
    b = sample(500, theta, MV, TransformType.S, seed=9)
    c = sample(500, theta, MV, TransformType.S, seed=10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_moments_without_skew():
    """gamma = 0 reproduces the input moments."""
    y = sample(100_000, normal_theta(c=2.0, s=3.0), MV, TransformType.S, seed=1)
    assert y.mean() == pytest.approx(2.0, abs=0.05)
    assert y.std() == pytest.approx(3.0, rel=0.02)


def test_sample_rejects_bad_requests():
    with pytest.raises(DomainError):
        sample(0, normal_theta(), MV, TransformType.S)
    with pytest.raises(MomentRestrictionError):
        sample(10, t_theta(1.0), MV, TransformType.S)
    assert sample(10, t_theta(1.0), LS, TransformType.S).shape == (10,)


def test_theta_to_tau_uses_t_standard_deviation():
    tau = theta_to_tau(t_theta(5.0, gamma=-0.05, c=0.2, s=1.24), MV, TransformType.S)
    assert tau.mu_x == pytest.approx(0.2)
    assert tau.sigma_x == pytest.approx(1.24 * math.sqrt(5 / 3))
    assert tau.gamma == -0.05
    with pytest.raises(MomentRestrictionError):
        theta_to_tau(t_theta(2.0), MV, TransformType.S)


@pytest.mark.parametrize(
    "alpha,regime",
    [(0.5, Regime.III), (1.0, Regime.III), (1.5, Regime.II), (2.0, Regime.II), (7.09, Regime.I)],
)
def test_regime_classify(alpha, regime):
    assert regime_classify(alpha) == regime


def test_regime_classify_rejects_non_positive():
    with pytest.raises(DomainError):
        regime_classify(0.0)


def test_regime_of_input_tail_index():
    assert regime_classify(InputDist(family=Family.CAUCHY).tail_index()) == Regime.III
    assert regime_classify(InputDist().tail_index()) == Regime.I
    assert regime_classify(InputDist(family=Family.STUDENT_T, nu=1.5)) == Regime.II


def test_p_nonprincipal():
    """Mass of U beyond -1/gamma."""
    normal = InputDist()
    assert p_nonprincipal(0.0, normal) == 0.0
    assert p_nonprincipal(0.1, normal) == pytest.approx(stats.norm.cdf(-10.0))
    assert p_nonprincipal(-0.5, normal) == pytest.approx(stats.norm.sf(2.0))


def test_admissible_mask():
    assert admissible_mask(np.array([-0.5, 0.0, 1.0]), 0.5).tolist() == [True, True, True]
    assert admissible_mask(np.array([-0.5, 0.0, 1.0]), 1.0).tolist() == [False, True, True]


def test_moment_order_bound():
    assert moment_order_bound(0.25) == 4.0
    with pytest.raises(DomainError):
        moment_order_bound(0.0)
