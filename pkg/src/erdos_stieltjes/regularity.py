"""Coarse-scale Holder estimates for the centred remainder R(x) = psi(x) - x.

psi itself jumps by log p over zero distance, so no pointwise Holder bound
holds; every ratio here is taken on R, between grid points at least
``min_separation`` apart.  Pairs are (x, x + h) with h on a dyadic ladder
in units of the grid step, plus the full span of the range.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError
from .numeric import loglog_fit
from .primes import ChebyshevAccumulator, remainder

Remainder = Union[ChebyshevAccumulator, Callable[[np.ndarray], np.ndarray]]

NOTE = "ratios computed on R(x) = psi(x) - x at separations >= min_separation; psi is not pointwise Holder"


def _evaluate(r: Remainder, xs: np.ndarray) -> np.ndarray:
    if isinstance(r, ChebyshevAccumulator):
        return remainder(r, xs)
    return np.asarray(r(xs), dtype=np.float64)


@dataclass(frozen=True)
class HolderEstimate:
    beta: float
    best_constant: float
    min_separation: float
    sample_count: int
    argmax_pair: tuple[float, float]
    grid_step: float = 1.0

    def to_json(self) -> dict:
        return {"beta": self.beta, "constant": self.best_constant, "argmax_pair": list(self.argmax_pair),
                "min_separation": self.min_separation, "grid_step": self.grid_step,
                "sample_count": self.sample_count, "note": NOTE}


def _ladder(span_steps: int) -> list[int]:
    out, h = [], 1
    while h < span_steps:
        out.append(h)
        h *= 2
    out.append(span_steps)
    return out


def holder_constant(r: Remainder, beta: float, x_range: tuple[float, float], grid_step: float = 1.0,
                    min_separation: float = 1.0) -> HolderEstimate:
    """max |R(x) - R(y)| / |x - y|^beta over sampled pairs with |x - y| >= min_separation.

    The value is exact over the sample and a lower bound for the true supremum.
    """
    if not 0 < beta <= 1:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if min_separation < 1:
        raise DomainError(f"min_separation must be >= 1, got {min_separation}")
    if grid_step <= 0:
        raise DomainError("grid_step must be positive")
    lo, hi = x_range
    k0, k1 = int(np.ceil(lo / grid_step)), int(np.floor(hi / grid_step))
    if k1 - k0 + 1 < 2:
        raise DomainError("fewer than two grid points in range")
    xs = np.arange(k0, k1 + 1, dtype=np.float64) * grid_step
    vals = _evaluate(r, xs)
    best, pair, count = 0.0, (float(xs[0]), float(xs[0])), 0
    for h in _ladder(xs.size - 1):
        sep = h * grid_step
        if sep < min_separation:
            continue
        ratios = np.abs(vals[h:] - vals[:-h]) / sep**beta
        count += ratios.size
        i = int(np.argmax(ratios))
        if ratios[i] > best:
            best, pair = float(ratios[i]), (float(xs[i]), float(xs[i + h]))
    if count == 0:
        raise DomainError("no grid pair reaches min_separation")
    return HolderEstimate(beta, best, float(min_separation), count, pair, float(grid_step))


def scaling_profile(r: Remainder, x_max: float, window_sizes: Sequence[float], x_min: float = 1.0,
                    grid_step: float = 1.0) -> list[tuple[float, float]]:
    """For each window width h, max over grid x in [x_min, x_max - h] of |R(x + h) - R(x)|.

    A width reaching past x_max collapses to the single window [x_min, x_max].
    """
    k0, k1 = int(np.ceil(x_min / grid_step)), int(np.floor(x_max / grid_step))
    xs = np.arange(k0, k1 + 1, dtype=np.float64) * grid_step
    vals = _evaluate(r, xs)
    out = []
    for h in window_sizes:
        if h < 1:
            raise DomainError(f"window widths must be >= 1, got {h}")
        steps = int(round(h / grid_step))
        if steps >= xs.size - 1:
            out.append((float(h), float(abs(vals[-1] - vals[0]))))
        else:
            out.append((float(h), float(np.max(np.abs(vals[steps:] - vals[:-steps])))))
    return out


def profile_slope(profile: Sequence[tuple[float, float]]):
    """Log-log OLS fit of max increment against window width."""
    h, m = zip(*[(a, b) for a, b in profile if b > 0])
    return loglog_fit(h, m)


def dyadic_windows(h_max: float) -> list[float]:
    out, h = [], 1.0
    while h <= h_max:
        out.append(h)
        h *= 2
    return out


def profile_csv(profile: Sequence[tuple[float, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["h", "max_increment"])
    for h, m in profile:
        w.writerow([repr(h), repr(m)])
    return buf.getvalue()
