"""Partial sums of sum (-1)^n n / p_n and of the prime-gap series, plus averaging acceleration."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .numeric import compensated_prefix_sums
from .primes import PrimeTable

METHODS = ("none", "pair-average", "iterated-average")
DEFAULT_ROUNDS = 10


@dataclass(frozen=True)
class SeriesResult:
    terms_used: int
    raw_partial_sum: float
    accelerated_value: float
    method: str
    estimated_uncertainty: float
    rounds: int = 0


def _signs(n: np.ndarray) -> np.ndarray:
    return np.where(n % 2 == 0, 1.0, -1.0)


def erdos_terms(table: PrimeTable, N: int) -> np.ndarray:
    """(-1)^n n / p_n for n = 1..N."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if N > len(table):
        raise CapacityError(f"{N} terms requested but only {len(table)} primes up to {table.limit}")
    n = np.arange(1, N + 1, dtype=np.int64)
    return _signs(n) * n.astype(np.float64) / table.primes[:N].astype(np.float64)


def erdos_partial_sum(table: PrimeTable, N: int) -> float:
    """Correctly rounded sum_{n<=N} (-1)^n n / p_n."""
    return math.fsum(erdos_terms(table, N))


def erdos_partial_sums(table: PrimeTable, N: int) -> np.ndarray:
    """All partial sums S_1..S_N (compensated, index-ordered)."""
    return compensated_prefix_sums(erdos_terms(table, N))


def gap_terms(table: PrimeTable, theta: float, N: int) -> np.ndarray:
    """(-1)^n / (n^theta (p_{n+1} - p_n)) for n = 1..N."""
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if N + 1 > len(table):
        raise CapacityError(f"gap series to N={N} needs {N + 1} primes, have {len(table)}")
    n = np.arange(1, N + 1, dtype=np.int64)
    gaps = np.diff(table.primes[: N + 1]).astype(np.float64)
    return _signs(n) / (n.astype(np.float64) ** theta * gaps)


def gap_series_partial(table: PrimeTable, theta: float, N: int) -> float:
    return math.fsum(gap_terms(table, theta, N))


def gap_series_partial_sums(table: PrimeTable, theta: float, N: int) -> np.ndarray:
    return compensated_prefix_sums(gap_terms(table, theta, N))


def accelerate(partial_sums: Sequence[float], method: str = "iterated-average",
               rounds: int = DEFAULT_ROUNDS) -> SeriesResult:
    """Average the tail of a partial-sum sequence toward its limit.

    One round replaces s_i by (s_i + s_{i+1}) / 2.  ``pair-average`` does a
    single round, ``iterated-average`` does ``rounds`` of them, ``none``
    leaves the sequence alone.  Only the last ``rounds + 1`` entries are used.
    The uncertainty is the change of the final value in the last round.
    """
    if method not in METHODS:
        raise DomainError(f"unknown acceleration method {method!r}")
    if rounds < 1:
        raise DomainError(f"rounds must be >= 1, got {rounds}")
    s = np.asarray(partial_sums, dtype=np.float64)
    if s.size < 2 or s.size < rounds + 1:
        raise DomainError(f"need at least max(2, rounds + 1) = {max(2, rounds + 1)} partial sums, got {s.size}")
    applied = {"none": 0, "pair-average": 1, "iterated-average": rounds}[method]
    raw = float(s[-1])
    if applied == 0:
        return SeriesResult(int(s.size), raw, raw, method, abs(raw - float(s[-2])), 0)
    tail = s[-(applied + 1):].copy()
    previous = raw
    for _ in range(applied):
        previous = float(tail[-1])
        tail = 0.5 * (tail[:-1] + tail[1:])
    value = float(tail[-1])
    return SeriesResult(int(s.size), raw, value, method, abs(value - previous), applied)


def erdos_series(table: PrimeTable, N: int, method: str = "iterated-average",
                 rounds: int = DEFAULT_ROUNDS) -> SeriesResult:
    """Accelerated estimate of the alternating Erdos series from its first N terms."""
    k = {"none": 1, "pair-average": 1}.get(method, rounds)
    if N < k + 1:
        raise DomainError(f"N={N} too small for {k} averaging rounds")
    sums = erdos_partial_sums(table, N)
    res = accelerate(sums[-(k + 1):], method, rounds)
    # terms_used counts series terms, not the tail slice handed to accelerate
    return SeriesResult(N, res.raw_partial_sum, res.accelerated_value, res.method,
                        res.estimated_uncertainty, res.rounds)


def convergence_table(partial_sums: np.ndarray, checkpoints: Sequence[int],
                      method: str = "iterated-average", rounds: int = DEFAULT_ROUNDS) -> list[SeriesResult]:
    """Accelerated estimates at each checkpoint N (1-indexed prefix lengths)."""
    out = []
    for N in checkpoints:
        res = accelerate(partial_sums[:N], method, rounds)
        out.append(SeriesResult(int(N), res.raw_partial_sum, res.accelerated_value,
                                res.method, res.estimated_uncertainty, res.rounds))
    return out


def parity_estimates(partial_sums: np.ndarray, method: str = "iterated-average",
                     rounds: int = DEFAULT_ROUNDS) -> tuple[SeriesResult, SeriesResult]:
    """Accelerated estimates ending on the last even and the last odd N."""
    N = partial_sums.size
    even = N if N % 2 == 0 else N - 1
    odd = N if N % 2 == 1 else N - 1
    a, b = convergence_table(partial_sums, [even, odd], method, rounds)
    return a, b


def results_csv(results: Sequence[SeriesResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "raw_partial_sum", "accelerated_value", "uncertainty"])
    for r in results:
        w.writerow([r.terms_used, repr(r.raw_partial_sum), repr(r.accelerated_value),
                    repr(r.estimated_uncertainty)])
    return buf.getvalue()


def as_dict(result: SeriesResult) -> dict:
    return asdict(result)
