"""Services package."""

from .lambertw import (
    lambert_w0,
    lambert_wm1,
    forward_skew,
    inverse_skew,
    forward_heavy,
    inverse_heavy,
)
from .distributions import (
    sigma_from_t_scale,
    forward_transform,
    backward_transform,
    logpdf,
    pdf,
    cdf,
    quantile,
    sample,
    theta_to_tau,
    regime_classify,
    p_nonprincipal,
    moment_order_bound,
)
from .igmm import igmm, gaussianize, gamma_for_target, delta_for_target
from .mle import loglik, mle
from .tails import (
    split_tails,
    tail_samples,
    hill_classic,
    hill_harmonic,
    hill_curve,
    default_k_grid,
    powerlaw_alpha,
    select_xmin,
)
from .hill_study import hill_study
from .resampling import (
    bootstrap_igmm,
    default_n_grid,
    sd_times_sqrt_n,
    acf,
    acf_bootstrap_band,
    acf_normal_band,
    ljung_box,
    whiteness_report,
)
from .ingest import ingest_csv
from .defaults import load_defaults, default_study_spec

__all__ = [
    "lambert_w0",
    "lambert_wm1",
    "forward_skew",
    "inverse_skew",
    "forward_heavy",
    "inverse_heavy",
    "sigma_from_t_scale",
    "forward_transform",
    "backward_transform",
    "logpdf",
    "pdf",
    "cdf",
    "quantile",
    "sample",
    "theta_to_tau",
    "regime_classify",
    "p_nonprincipal",
    "moment_order_bound",
    "igmm",
    "gaussianize",
    "gamma_for_target",
    "delta_for_target",
    "loglik",
    "mle",
    "split_tails",
    "tail_samples",
    "hill_classic",
    "hill_harmonic",
    "hill_curve",
    "default_k_grid",
    "powerlaw_alpha",
    "select_xmin",
    "hill_study",
    "bootstrap_igmm",
    "default_n_grid",
    "sd_times_sqrt_n",
    "acf",
    "acf_bootstrap_band",
    "acf_normal_band",
    "ljung_box",
    "whiteness_report",
    "ingest_csv",
    "load_defaults",
    "default_study_spec",
]
