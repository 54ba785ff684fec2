"""Command-line entry point: one subcommand per experiment, JSON or CSV out."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import asymptotics, regularity, report, series, tuples
from .errors import DomainError, ErdosError
from .primes import CACHE_ENV, cached_sieve, chebyshev, limit_for_count
from .stieltjes import DAMPINGS, TestFunction, split_main_error

SUBCOMMANDS = ("sum", "gap-series", "integral", "asymptotic-fit", "holder", "tuples", "report")
ACCEL = {"none": "none", "pair": "pair-average", "iterated": "iterated-average"}


def _count(text: str) -> int:
    """Integer flag that also accepts forms like 1e7."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    output_format: str = "json"
    output_path: str | None = None
    cache_path: str | None = None
    threads: int = 1
    skip: tuple[str, ...] = field(default=())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--output", dest="output_path", help="write here instead of stdout")
    common.add_argument("--cache", dest="cache_path",
                        help=f"prime-table cache file (default: ${CACHE_ENV}/primes.txt when set)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = argparse.ArgumentParser(prog="erdos-stieltjes", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("sum", parents=[common], help="alternating Erdos series")
    s.add_argument("--terms", type=_count, default=10**6)
    s.add_argument("--accelerate", choices=tuple(ACCEL), default="iterated")
    s.add_argument("--rounds", type=int, default=series.DEFAULT_ROUNDS)

    g = sub.add_parser("gap-series", parents=[common], help="sum (-1)^n / (n^theta gap_n)")
    g.add_argument("--theta", type=float, default=0.6)
    g.add_argument("--terms", type=_count, default=10**6)
    g.add_argument("--accelerate", choices=tuple(ACCEL), default="iterated")
    g.add_argument("--rounds", type=int, default=series.DEFAULT_ROUNDS)

    i = sub.add_parser("integral", parents=[common], help="integral of g dpsi with main/error split")
    i.add_argument("--lambda", dest="lam", type=float, required=True)
    i.add_argument("--X", type=float, required=True)
    i.add_argument("--damping", choices=DAMPINGS, default="exponential")

    a = sub.add_parser("asymptotic-fit", parents=[common], help="fit |I2(lambda)| ~ lambda^-slope")
    a.add_argument("--X", type=_count, default=10**7)
    a.add_argument("--lambda-max", type=float, default=1.0)
    a.add_argument("--lambda-min", type=float, default=0.05)
    a.add_argument("--points", type=int, default=8)
    a.add_argument("--planted", type=float, help="use a synthetic remainder of this exponent instead of psi")

    h = sub.add_parser("holder", parents=[common], help="coarse Holder constant and scaling profile of psi - x")
    h.add_argument("--beta", type=float, default=0.5)
    h.add_argument("--x-min", type=float, default=100.0)
    h.add_argument("--x-max", type=_count, default=10**6)
    h.add_argument("--grid-step", type=float, default=1.0)
    h.add_argument("--min-separation", type=float, default=1.0)

    t = sub.add_parser("tuples", parents=[common], help="prime-tuple counts against the singular series")
    t.add_argument("--offsets", type=str, default="0,2")
    t.add_argument("--x", type=_count, nargs="+", default=[10**6])
    t.add_argument("--cutoff", type=_count, default=tuples.DEFAULT_CUTOFF)
    t.add_argument("--form", choices=tuples.FORMS, default="standard")

    r = sub.add_parser("report", parents=[common], help="run every experiment into one JSON document")
    r.add_argument("--skip", action="append", choices=report.SECTIONS, default=[])
    r.add_argument("--terms", type=_count, default=10**6)
    r.add_argument("--fit-X", type=_count, default=10**7)
    r.add_argument("--holder-x-max", type=_count, default=10**6)
    r.add_argument("--tuple-x", type=_count, nargs="+", default=[10**4, 10**5, 10**6])
    r.add_argument("--timestamp", help="fixed value for the generated_at field")
    return p


def _validate(cfg: RunConfig) -> None:
    """Check parameters against module preconditions before any sieving."""
    q = cfg.params
    if cfg.threads < 1:
        raise DomainError("--threads must be >= 1")
    if cfg.subcommand in ("sum", "gap-series"):
        if q["terms"] < 2:
            raise DomainError("--terms must be >= 2")
        if q["rounds"] < 1 or (q["accelerate"] == "iterated" and q["terms"] < q["rounds"] + 1):
            raise DomainError("--rounds must be >= 1 and below --terms")
        if cfg.subcommand == "gap-series" and q["theta"] <= 0:
            raise DomainError("--theta must be positive")
    elif cfg.subcommand == "integral":
        TestFunction(q["lam"], q["damping"])
        if q["X"] < 1:
            raise DomainError("--X must be >= 1")
    elif cfg.subcommand == "asymptotic-fit":
        asymptotics.check_grid(asymptotics.geometric_grid(q["lambda_max"], q["lambda_min"], q["points"]))
    elif cfg.subcommand == "holder":
        if not 0 < q["beta"] <= 1 or q["min_separation"] < 1 or q["x_max"] <= q["x_min"]:
            raise DomainError("need 0 < beta <= 1, min-separation >= 1, x-max > x-min")
    elif cfg.subcommand == "tuples":
        tuples.TupleSpec.parse(q["offsets"])
        if any(b <= a for a, b in zip(q["x"], q["x"][1:])) or min(q["x"]) < 3:
            raise DomainError("--x values must be increasing and >= 3")


def _series_payload(cfg: RunConfig, sums_fn):
    q = cfg.params
    method = ACCEL[q["accelerate"]]
    N = q["terms"]
    table = cached_sieve(limit_for_count(N + 2), cfg.cache_path, cfg.threads)
    sums = sums_fn(table, N)
    res = series.accelerate(sums, method, q["rounds"])
    res = series.SeriesResult(N, res.raw_partial_sum, res.accelerated_value, res.method,
                              res.estimated_uncertainty, res.rounds)
    checkpoints = sorted({n for n in (N // 8, N // 4, N // 2) if n > q["rounds"]} | {N})
    rows = series.convergence_table(sums, checkpoints, method, q["rounds"])
    if cfg.output_format == "csv":
        return series.results_csv(rows)
    payload = series.as_dict(res)
    payload["drift"] = [series.as_dict(r) for r in rows]
    return payload


def run(cfg: RunConfig) -> str:
    """Execute one subcommand and return the rendered document."""
    _validate(cfg)
    q = cfg.params
    csv_out = cfg.output_format == "csv"
    if cfg.subcommand == "sum":
        out = _series_payload(cfg, series.erdos_partial_sums)
    elif cfg.subcommand == "gap-series":
        out = _series_payload(cfg, lambda t, N: series.gap_series_partial_sums(t, q["theta"], N))
        if not csv_out:
            out["theta"] = q["theta"]
    elif cfg.subcommand == "integral":
        limit = max(2, math.ceil(q["X"]))
        acc = chebyshev(limit, cached_sieve(limit, cfg.cache_path, cfg.threads))
        rep = split_main_error(acc, TestFunction(q["lam"], q["damping"]), q["X"])
        out = rep.to_json()
        if csv_out:
            out = ("lambda,damping,X,total_re,total_im,main_re,main_im,error_re,error_im,truncation_bound\n"
                   + ",".join([repr(rep.lam), rep.damping, repr(rep.truncation_X),
                               *[repr(v) for z in (rep.total, rep.main_term, rep.error_term) for v in (z.real, z.imag)],
                               repr(rep.truncation_bound)]) + "\n")
    elif cfg.subcommand == "asymptotic-fit":
        grid = asymptotics.geometric_grid(q["lambda_max"], q["lambda_min"], q["points"])
        if q["planted"] is not None:
            acc = asymptotics.planted_remainder(q["planted"], q["X"])
        else:
            acc = chebyshev(q["X"], cached_sieve(q["X"], cfg.cache_path, cfg.threads))
        fit = asymptotics.fit_error_exponent(acc, grid, q["X"])
        out = fit.to_csv() if csv_out else fit.summary()
    elif cfg.subcommand == "holder":
        acc = chebyshev(q["x_max"], cached_sieve(q["x_max"], cfg.cache_path, cfg.threads))
        est = regularity.holder_constant(acc, q["beta"], (q["x_min"], q["x_max"]), q["grid_step"],
                                         q["min_separation"])
        profile = regularity.scaling_profile(acc, q["x_max"], regularity.dyadic_windows(q["x_max"] / 4),
                                             grid_step=q["grid_step"])
        if csv_out:
            out = regularity.profile_csv(profile)
        else:
            out = {**est.to_json(), "profile": [list(p) for p in profile],
                   "profile_slope": regularity.profile_slope(profile).slope}
    elif cfg.subcommand == "tuples":
        H = tuples.TupleSpec.parse(q["offsets"])
        table = cached_sieve(max(q["x"]) + H.offsets[-1], cfg.cache_path, cfg.threads)
        scan = tuples.discrepancy_scan(table, H, q["x"], q["cutoff"], q["form"])
        out = scan.to_csv() if csv_out else scan.to_json()
    else:
        if csv_out:
            raise DomainError("report is emitted as JSON only")
        rc = report.ReportConfig(series_terms=q["terms"], fit_X=q["fit_X"], holder_x_max=float(q["holder_x_max"]),
                                 tuple_x=tuple(q["tuple_x"]), skip=tuple(cfg.skip), cache_path=cfg.cache_path,
                                 workers=cfg.threads)
        out = report.build_report(rc, q.get("timestamp"))
    return out if isinstance(out, str) else report.dumps(out)


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items()
              if k not in ("subcommand", "output_format", "output_path", "cache_path", "threads", "skip")}
    return RunConfig(ns.subcommand, params, ns.output_format, ns.output_path, ns.cache_path, ns.threads,
                     tuple(getattr(ns, "skip", ()) or ()))


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)  # exits 2 on bad flags
    cfg = config_from_args(ns)
    try:
        text = run(cfg)
    except DomainError as exc:
        return _fail(exc.kind, str(exc), 2)
    except ErdosError as exc:
        return _fail(exc.kind, str(exc), 1)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
