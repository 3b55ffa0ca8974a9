"""Command-line front end.

Subcommands: fit, gaussianize, hill, bootstrap, whiteness, simulate. Exit codes:
0 success, 1 usage error, 2 domain or dataset error, 3 non-convergence under
--strict (or a Lambert W solver failure).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from lambertw_tails import __version__
from lambertw_tails.errors import LambertWError
from lambertw_tails.models import (
    Family,
    InputDist,
    RunConfig,
    Theta,
    TransformType,
    Variant,
)
from lambertw_tails.services import (
    bootstrap_igmm,
    default_study_spec,
    forward_transform,
    gaussianize,
    hill_study,
    igmm,
    ingest_csv,
    load_defaults,
    mle,
    sample,
    sd_times_sqrt_n,
    whiteness_report,
)
from lambertw_tails.services.mle import require_finite_moments, wald_pvalues

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 3
ROUND_TRIP_TOL = 1e-8


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _variant(value: str) -> Variant:
    try:
        return Variant(value.replace("-", "_"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid variant {value!r}") from None


def _fixed_pair(value: str) -> tuple[str, float]:
    name, sep, number = value.partition("=")
    try:
        if not sep:
            raise ValueError
        return name.strip(), float(number)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {value!r}") from None


def _int_list(value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--max-iter", type=int, default=100)
    common.add_argument("--type", dest="lambertw_type", choices=[t.value for t in TransformType], default="s")
    common.add_argument(
        "--variant", type=_variant, default=Variant.MEAN_VARIANCE, help="mean-variance or location-scale"
    )
    common.add_argument("--target-skewness", type=float, default=0.0)
    common.add_argument("--format", dest="output_format", choices=["json", "csv"], default=None)
    common.add_argument("--strict", action="store_true", help="exit 3 when an estimator does not converge")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for replicates")
    common.add_argument("--out", type=Path, default=None, help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    data = _Parser(add_help=False)
    data.add_argument("csv", type=Path)
    data.add_argument("--column", default="0", help="column name or 0-based index")
    data.add_argument("--header", action="store_true", help="first line holds column names")

    parser = _Parser(prog="lambertw-tails", description="Lambert W x F estimation and tail diagnostics")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", parents=[common, data], help="IGMM or MLE fit")
    fit.add_argument("--method", choices=["igmm", "mle"], default="igmm")
    fit.add_argument("--family", choices=[f.value for f in Family], default="normal")
    fit.add_argument("--fix", type=_fixed_pair, action="append", default=[], metavar="NAME=VALUE")

    gauss = sub.add_parser("gaussianize", parents=[common, data], help="back-transform with the IGMM fit")
    gauss.add_argument("--report", type=Path, default=None, help="fit report path")

    hill = sub.add_parser("hill", parents=[common], help="Hill-curve simulation study")
    hill.add_argument("csv", type=Path, nargs="?", default=None, help="optional observed series")
    hill.add_argument("--column", default="0")
    hill.add_argument("--header", action="store_true")
    hill.add_argument("--n", type=int, default=None)
    hill.add_argument("--replications", type=int, default=None)
    hill.add_argument("--nu", type=float, action="append", default=None)
    hill.add_argument("--estimator", choices=["classic", "harmonic"], default=None)
    hill.add_argument("--beta-sim", type=float, default=None)
    hill.add_argument("--beta-data", type=float, default=None)
    hill.add_argument("--split", choices=["split", "absolute"], default=None)
    hill.add_argument("--no-lambert", action="store_true", help="omit the Lambert W x t cell")

    boot = sub.add_parser("bootstrap", parents=[common, data], help="bootstrap IGMM over subsample sizes")
    boot.add_argument("--replications", type=int, default=None)
    boot.add_argument("--n-grid", type=_int_list, default=None)
    boot.add_argument("--sd-out", type=Path, default=None, help="sd * sqrt(n) table path")

    white = sub.add_parser("whiteness", parents=[common, data], help="ACF bands and Ljung-Box")
    white.add_argument("--max-lag", type=int, default=None)
    white.add_argument("--replications", type=int, default=None)
    white.add_argument("--level", type=float, default=None)
    white.add_argument("--gaussianize", action="store_true", help="analyse the IGMM back-transformed series")

    sim = sub.add_parser("simulate", parents=[common], help="draw from a Lambert W x F distribution")
    sim.add_argument("--n", type=int, default=1000)
    sim.add_argument("--family", choices=[f.value for f in Family], default="normal")
    sim.add_argument("--c", type=float, default=0.0)
    sim.add_argument("--s", type=float, default=1.0)
    sim.add_argument("--nu", type=float, default=None)
    sim.add_argument("--gamma", type=float, default=0.0)
    sim.add_argument("--delta", type=float, default=None)
    sim.add_argument("--delta-l", type=float, default=0.0)
    sim.add_argument("--delta-r", type=float, default=0.0)
    return parser


def _run_config(args, default_format: str) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
        output_format=args.output_format or default_format,
        lambertw_type=TransformType(args.lambertw_type),
        variant=args.variant,
        target_skewness=args.target_skewness,
        strict=args.strict,
        jobs=args.jobs,
    )


def _write(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.12g", lineterminator="\n")


def _companion(out: Optional[Path], suffix: str) -> Optional[Path]:
    return None if out is None else out.with_name(out.stem + suffix)


def _series(args):
    return ingest_csv(args.csv, args.column, args.header).to_numpy()


def igmm_report(fit, cfg: RunConfig) -> dict:
    return {
        "method": "igmm",
        "type": fit.lambertw_type.value,
        "variant": Variant.MEAN_VARIANCE.value,
        "param_names": fit.param_names,
        "estimates": fit.tau_vector(),
        "iterations": fit.iterations,
        "converged": fit.converged,
        "seed": cfg.seed,
    }


def mle_report(fit, cfg: RunConfig) -> dict:
    return {
        "method": "mle",
        "family": fit.theta.input.family.value,
        "type": fit.lambertw_type.value,
        "variant": fit.variant.value,
        "param_names": fit.param_names,
        "estimates": fit.estimates,
        "std_errors": fit.std_errors,
        "t_values": fit.t_values,
        "p_values": wald_pvalues(fit),
        "fixed": fit.fixed,
        "loglik": fit.loglik,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "seed": cfg.seed,
    }


def _report_frame(report: dict) -> pd.DataFrame:
    n = len(report["param_names"])
    return pd.DataFrame(
        {
            "parameter": report["param_names"],
            "estimate": report["estimates"],
            "std_error": report.get("std_errors") or [None] * n,
            "t_value": report.get("t_values") or [None] * n,
        }
    )


def cmd_fit(args) -> int:
    cfg = _run_config(args, "json")
    y = _series(args)
    if args.method == "igmm":
        require_finite_moments(Family(args.family), cfg.variant)
        fit = igmm(y, cfg.lambertw_type, cfg.estimator_config())
        report = igmm_report(fit, cfg)
    else:
        fit = mle(
            y,
            Family(args.family),
            cfg.variant,
            cfg.lambertw_type,
            cfg=cfg.estimator_config(),
            fixed=dict(args.fix),
        )
        report = mle_report(fit, cfg)
    _write(_json(report) if cfg.output_format == "json" else _csv(_report_frame(report)), args.out)
    return _strict_exit(cfg, fit.converged)


def cmd_gaussianize(args) -> int:
    cfg = _run_config(args, "csv")
    y = _series(args)
    fit = igmm(y, cfg.lambertw_type, cfg.estimator_config())
    x = gaussianize(y, fit)
    back = forward_transform(x, fit.tau, Variant.LOCATION_SCALE, fit.lambertw_type)
    error = float(np.max(np.abs(back - y) / np.maximum(1.0, np.abs(y))))
    report = {**igmm_report(fit, cfg), "round_trip_ok": error <= ROUND_TRIP_TOL, "round_trip_error": error}

    if cfg.output_format == "json":
        _write(_json({**report, "values": x.tolist()}), args.out)
    else:
        _write(_csv(pd.DataFrame({"x": x})), args.out)
        report_path = args.report or _companion(args.out, ".fit.json")
        if report_path is not None:
            report_path.write_text(_json(report), encoding="utf-8")
    return _strict_exit(cfg, fit.converged)


def cmd_hill(args) -> int:
    cfg = _run_config(args, "csv")
    overrides = {
        key: value
        for key, value in {
            "n": args.n,
            "replications": args.replications,
            "nu_grid": args.nu,
            "estimator": args.estimator,
            "beta_sim": args.beta_sim,
            "beta_data": args.beta_data,
            "split": args.split,
        }.items()
        if value is not None
    }
    overrides["seed"] = cfg.seed
    if args.no_lambert:
        overrides["lambert_theta"] = None
    data = None
    if args.csv is not None:
        data = ingest_csv(args.csv, args.column, args.header).to_numpy()
        overrides.setdefault("n", data.size)
    spec = default_study_spec(**overrides)
    result = hill_study(spec, data=data, jobs=cfg.jobs)
    if cfg.output_format == "json":
        _write(_json(result.model_dump(mode="json")), args.out)
    else:
        _write(_csv(result.to_frame()), args.out)
    return EXIT_OK


def cmd_bootstrap(args) -> int:
    cfg = _run_config(args, "csv")
    y = _series(args)
    B = args.replications or load_defaults()["bootstrap"]["replications"]
    trace = bootstrap_igmm(y, cfg.lambertw_type, args.n_grid, B, cfg.estimator_config(), jobs=cfg.jobs)
    sd_table = sd_times_sqrt_n(trace)
    if cfg.output_format == "json":
        # NaN estimates serialize as null
        payload = {**json.loads(trace.model_dump_json()), "sd_times_sqrt_n": sd_table.to_dict(orient="records")}
        _write(_json(payload), args.out)
    else:
        _write(_csv(trace.to_frame()), args.out)
        sd_path = args.sd_out or _companion(args.out, ".sd.csv")
        if sd_path is not None:
            sd_path.write_text(_csv(sd_table), encoding="utf-8")
    return _strict_exit(cfg, all(all(row) for row in trace.converged))


def cmd_whiteness(args) -> int:
    cfg = _run_config(args, "csv")
    defaults = load_defaults()["whiteness"]
    y = _series(args)
    report = whiteness_report(
        y,
        max_lag=args.max_lag if args.max_lag is not None else defaults["max_lag"],
        B=args.replications or defaults["replications"],
        level=args.level or defaults["level"],
        seed=cfg.seed,
        gaussianize_type=cfg.lambertw_type if args.gaussianize else None,
        cfg=cfg.estimator_config(),
    )
    if cfg.output_format == "json":
        _write(_json(report.model_dump(mode="json")), args.out)
    else:
        _write(_csv(report.to_frame()), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _run_config(args, "csv")
    input = InputDist(family=Family(args.family), c=args.c, s=args.s, nu=args.nu)
    if args.delta is not None:
        theta = Theta.heavy(input, args.delta)
    else:
        theta = Theta(input=input, gamma=args.gamma, delta_l=args.delta_l, delta_r=args.delta_r)
    y = sample(args.n, theta, cfg.variant, cfg.lambertw_type, seed=cfg.seed)
    if cfg.output_format == "json":
        _write(_json({"theta": theta.model_dump(mode="json"), "values": y.tolist()}), args.out)
    else:
        _write(_csv(pd.DataFrame({"y": y})), args.out)
    return EXIT_OK


def _strict_exit(cfg: RunConfig, converged: bool) -> int:
    if not converged and cfg.strict:
        logger.error("estimator did not converge (--strict)")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "gaussianize": cmd_gaussianize,
    "hill": cmd_hill,
    "bootstrap": cmd_bootstrap,
    "whiteness": cmd_whiteness,
    "simulate": cmd_simulate,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LambertWError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
