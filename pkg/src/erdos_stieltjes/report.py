"""Composite experiment report and the JSON conventions shared with the CLI."""

from __future__ import annotations

import datetime as _dt
import json
import math
import random
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import asymptotics, regularity, series, tuples
from .primes import ChebyshevAccumulator, PrimeTable, cached_sieve, chebyshev, limit_for_count
from .stieltjes import TestFunction, integral_by_parts, stieltjes_integral

SECTIONS = ("series", "integral_identity", "exponent_fit", "holder_profile", "tuples")
PSI_NOTE = "psi(x) = sum of log p over prime powers p^k <= x"


def _exact(v: float) -> str:
    return format(v, ".17g")


def jsonable(obj: Any) -> Any:
    """Plain JSON types, with a parallel ``<key>_exact`` string for every float.

    Complex numbers become [re, im]; non-finite floats become null (their
    ``_exact`` twin keeps "inf"/"nan").
    """
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            v = jsonable(v)
            out[k] = v
            raw = obj[k]
            if isinstance(raw, (float, np.floating)):
                out[f"{k}_exact"] = _exact(float(raw))
            elif isinstance(raw, complex):
                out[f"{k}_exact"] = [_exact(raw.real), _exact(raw.imag)]
            elif isinstance(raw, (list, tuple)) and raw and all(isinstance(x, (float, np.floating)) for x in raw):
                out[f"{k}_exact"] = [_exact(float(x)) for x in raw]
        return out
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


@dataclass
class ReportConfig:
    series_terms: int = 10**6
    rounds: int = series.DEFAULT_ROUNDS
    identity_cases: int = 100
    identity_seed: int = 0
    identity_X_max: float = 1e5
    fit_X: int = 10**7
    fit_lambda_max: float = 1.0
    fit_lambda_min: float = 0.05
    fit_points: int = 8
    holder_x_min: float = 100.0
    holder_x_max: float = 1e6
    holder_beta: float = 0.5
    tuple_offsets: str = "0,2"
    tuple_x: tuple[int, ...] = (10**4, 10**5, 10**6)
    tuple_cutoff: int = tuples.DEFAULT_CUTOFF
    skip: tuple[str, ...] = ()
    cache_path: str | None = None
    workers: int = 1
    _tables: dict = field(default_factory=dict, repr=False)

    def table(self, limit: int) -> PrimeTable:
        for lim, t in self._tables.items():
            if lim >= limit:
                return t
        t = cached_sieve(limit, self.cache_path, self.workers)
        self._tables[limit] = t
        return t

    def accumulator(self, limit: int) -> ChebyshevAccumulator:
        return chebyshev(limit, self.table(limit))


def series_section(cfg: ReportConfig) -> dict:
    N = cfg.series_terms
    table = cfg.table(limit_for_count(N + 1))
    sums = series.erdos_partial_sums(table, N)
    res = series.accelerate(sums, "iterated-average", cfg.rounds)
    even, odd = series.parity_estimates(sums, "iterated-average", cfg.rounds)
    checkpoints = sorted({n for n in (10**3, 10**4, 10**5, 10**6, 10**7, 10**8) if n < N} | {N})
    table_rows = series.convergence_table(sums, checkpoints, "iterated-average", cfg.rounds)
    return {
        "result": series.as_dict(series.SeriesResult(N, res.raw_partial_sum, res.accelerated_value,
                                                     res.method, res.estimated_uncertainty, res.rounds)),
        "even_estimate": even.accelerated_value,
        "odd_estimate": odd.accelerated_value,
        "checkpoints": [series.as_dict(r) for r in table_rows],
        "reference_value": -0.052161,
    }


def identity_cases(n: int, seed: int, X_max: float) -> list[tuple[float, float]]:
    """(lambda, X) draws: lambda uniform in [0.1, 3], X log-uniform in [10, X_max]."""
    rng = random.Random(seed)
    return [(rng.uniform(0.1, 3.0), 10 ** rng.uniform(1.0, math.log10(X_max))) for _ in range(n)]


def identity_section(cfg: ReportConfig) -> dict:
    acc = cfg.accumulator(int(cfg.identity_X_max))
    worst = 0.0
    rows = []
    for lam, X in identity_cases(cfg.identity_cases, cfg.identity_seed, cfg.identity_X_max):
        f = TestFunction(lam)
        a, b = stieltjes_integral(acc, f, X), integral_by_parts(acc, f, X)
        rel = abs(a - b) / (1 + abs(a))
        worst = max(worst, rel)
        rows.append({"lambda": lam, "X": X, "jump_sum": a, "by_parts": b, "scaled_difference": rel})
    return {"cases": rows, "max_scaled_difference": worst, "tolerance": 1e-10, "psi": PSI_NOTE}


def exponent_fit_section(cfg: ReportConfig) -> dict:
    acc = cfg.accumulator(cfg.fit_X)
    grid = asymptotics.geometric_grid(cfg.fit_lambda_max, cfg.fit_lambda_min, cfg.fit_points)
    fit = asymptotics.fit_error_exponent(acc, grid, cfg.fit_X)
    out = fit.summary()
    out["magnitudes"] = list(fit.magnitudes)
    out["main_magnitudes"] = list(fit.main_magnitudes)
    out["psi"] = PSI_NOTE
    return out


def holder_section(cfg: ReportConfig) -> dict:
    acc = cfg.accumulator(int(cfg.holder_x_max))
    est = regularity.holder_constant(acc, cfg.holder_beta, (cfg.holder_x_min, cfg.holder_x_max))
    windows = regularity.dyadic_windows(cfg.holder_x_max / 4)
    profile = regularity.scaling_profile(acc, cfg.holder_x_max, windows)
    fit = regularity.profile_slope(profile)
    return {"holder": est.to_json(), "profile": [list(p) for p in profile],
            "profile_slope": fit.slope, "profile_residual": fit.residual}


def tuples_section(cfg: ReportConfig) -> dict:
    H = tuples.TupleSpec.parse(cfg.tuple_offsets)
    table = cfg.table(max(cfg.tuple_x) + H.offsets[-1])
    return tuples.discrepancy_scan(table, H, cfg.tuple_x, cfg.tuple_cutoff).to_json()


BUILDERS = {
    "series": series_section,
    "integral_identity": identity_section,
    "exponent_fit": exponent_fit_section,
    "holder_profile": holder_section,
    "tuples": tuples_section,
}


def build_report(cfg: ReportConfig, timestamp: str | None = None) -> dict:
    doc: dict[str, Any] = {}
    for name in SECTIONS:
        if name not in cfg.skip:
            doc[name] = BUILDERS[name](cfg)
    doc["generated_at"] = timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat()
    return doc
