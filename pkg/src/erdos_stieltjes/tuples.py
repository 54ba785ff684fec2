"""Both sides of the quantitative Hardy-Littlewood prime-tuples discrepancy.

Two singular-series normalisations are offered.  ``standard`` is the usual
prod_p (1 - nu(p)/p)(1 - 1/p)^{-k}, which converges.  ``paper`` is
prod_p (1 - nu(p)/p)^k, which tends to 0 as the cutoff grows for every
nonempty tuple; it exists for comparison only.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import CapacityError, DomainError
from .numeric import loglog_fit
from .primes import PrimeTable, _is_prime, sieve

log = logging.getLogger(__name__)

FORMS = ("standard", "paper")
DEFAULT_CUTOFF = 10**6


@dataclass(frozen=True)
class TupleSpec:
    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        if not offs:
            raise DomainError("a tuple needs at least one offset")
        if any(h < 0 for h in offs) or any(b <= a for a, b in zip(offs, offs[1:])):
            raise DomainError(f"offsets must be strictly increasing and nonnegative: {offs}")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def parse(cls, text: str) -> "TupleSpec":
        """From a comma-separated list such as ``"0,2,6"``."""
        try:
            return cls(tuple(int(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise DomainError(f"bad offsets {text!r}: {exc}") from None

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def span(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def is_admissible(self) -> bool:
        return all(nu(self, p) < p for p in range(2, self.k + 1) if _is_prime(p))


def nu(H: TupleSpec, p: int) -> int:
    """Number of residue classes mod p hit by the offsets."""
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    return len({h % p for h in H.offsets})


def singular_series(H: TupleSpec, prime_cutoff: int = DEFAULT_CUTOFF, form: str = "standard") -> float:
    """Euler product over p <= prime_cutoff, summed in log space; 0 if some nu(p) = p."""
    if form not in FORMS:
        raise DomainError(f"form must be one of {FORMS}, got {form!r}")
    if prime_cutoff < 2:
        raise DomainError(f"cutoff must be >= 2, got {prime_cutoff}")
    k = H.k
    primes = sieve(prime_cutoff).primes
    # nu(p) = k once p exceeds the span, no residue computation needed there
    small = primes[primes <= H.span]
    nus = np.full(primes.size, k, dtype=np.float64)
    nus[: small.size] = [len({h % int(p) for h in H.offsets}) for p in small]
    pf = primes.astype(np.float64)
    if np.any(nus >= pf):
        return 0.0
    if form == "standard":
        logs = np.log1p(-nus / pf) - k * np.log1p(-1.0 / pf)
    else:
        logs = k * np.log1p(-nus / pf)
    return math.exp(math.fsum(logs))


def tuple_count(table: PrimeTable, H: TupleSpec, x: int) -> int:
    """#{1 <= n <= x : n + h prime for every offset h}."""
    x = int(x)
    top = x + H.offsets[-1]
    if top > table.limit:
        raise CapacityError(f"counting to x={x} needs primes up to {top}, table has {table.limit}")
    if x < 1:
        return 0
    mask = table.is_prime_mask(top)
    hit = np.ones(x, dtype=bool)
    for h in H.offsets:
        hit &= mask[1 + h : x + 1 + h]
    return int(np.count_nonzero(hit))


def log_power_integral(x: float, k: int) -> float:
    """integral_2^x dy / log(y)^k, relative tolerance 1e-10.

    Integrated in t = log y, where the integrand e^t / t^k is smooth.
    """
    if x <= 2:
        raise DomainError(f"x must exceed 2, got {x}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    a, b = math.log(2.0), math.log(x)
    val, _ = integrate.quad(lambda t: math.exp(t) / t**k, a, b, epsabs=0.0, epsrel=1e-12, limit=500)
    return val


@dataclass(frozen=True)
class DiscrepancyRecord:
    x: int
    lhs_count: int
    singular_series: float
    integral_term: float

    @property
    def discrepancy(self) -> float:
        return self.lhs_count - self.singular_series * self.integral_term


def regime_flags(H: TupleSpec, x: float) -> dict:
    """Whether (H, x) sits inside the conjecture's stated range."""
    ll = math.log(math.log(x)) if x > math.e else 0.0
    return {
        "x_at_least_10": x >= 10,
        "k_within_loglog5": H.k <= ll**5,
        "offsets_within_log2": H.offsets[-1] <= math.log(x) ** 2,
    }


@dataclass(frozen=True)
class DiscrepancyScan:
    offsets: tuple[int, ...]
    form: str
    records: tuple[DiscrepancyRecord, ...]
    slope: float | None
    residual: float | None
    excluded_zero: int

    def to_json(self) -> dict:
        return {
            "offsets": list(self.offsets),
            "singular_series_form": self.form,
            "slope": self.slope,
            "residual": self.residual,
            "excluded_zero_discrepancies": self.excluded_zero,
            "records": [
                {"x": r.x, "lhs_count": r.lhs_count, "singular_series": r.singular_series,
                 "integral_term": r.integral_term, "discrepancy": r.discrepancy,
                 "regime": regime_flags(TupleSpec(self.offsets), r.x)}
                for r in self.records
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "lhs_count", "singular_series", "integral_term", "discrepancy"])
        for r in self.records:
            w.writerow([r.x, r.lhs_count, repr(r.singular_series), repr(r.integral_term), repr(r.discrepancy)])
        return buf.getvalue()


def discrepancy_scan(table: PrimeTable, H: TupleSpec, x_grid: Sequence[int], prime_cutoff: int = DEFAULT_CUTOFF,
                     form: str = "standard") -> DiscrepancyScan:
    """Records at each x plus the least-squares slope of log|discrepancy| against log x."""
    xs = [int(v) for v in x_grid]
    if not xs or any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("x grid must be nonempty and increasing")
    if xs[-1] + H.offsets[-1] > table.limit:
        raise CapacityError(f"x grid reaches {xs[-1]}, table limit {table.limit} too small")
    S = singular_series(H, prime_cutoff, form)
    records = tuple(DiscrepancyRecord(x, tuple_count(table, H, x), S, log_power_integral(x, H.k)) for x in xs)
    keep = [r for r in records if r.discrepancy != 0]
    excluded = len(records) - len(keep)
    if excluded:
        log.info("excluded %d zero discrepancies from the slope fit", excluded)
    slope = residual = None
    if len(keep) >= 2:
        fit = loglog_fit([r.x for r in keep], [abs(r.discrepancy) for r in keep])
        slope, residual = fit.slope, fit.residual
    return DiscrepancyScan(H.offsets, form, records, slope, residual, excluded)
