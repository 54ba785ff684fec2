"""Prime tables and the Chebyshev step functions built on them.

``psi`` here is the prime-power sum  sum_{p^k <= x} log p.  The prime-only
sum theta(x) is available through ``chebyshev(..., prime_only=True)``; every
accumulator records which of the two it holds in ``kind``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError, DomainError, RangeError
from .numeric import compensated_prefix_sums

DEFAULT_SEGMENT = 1 << 22  # odd candidates per segment (4 MiB of bool)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def is_prime_mask(self, upto: int | None = None) -> np.ndarray:
        """Boolean array ``m`` with ``m[n]`` true iff n is prime, for n <= upto."""
        upto = self.limit if upto is None else upto
        if upto > self.limit:
            raise CapacityError(f"mask up to {upto} requested, table covers {self.limit}")
        mask = np.zeros(upto + 1, dtype=bool)
        mask[self.primes[self.primes <= upto]] = True
        return mask


def _small_primes(n: int) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return np.flatnonzero(mask)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    # segment holds odd numbers 2k+1 for k in [lo, hi)
    seg = np.ones(hi - lo, dtype=bool)
    first, last = 2 * lo + 1, 2 * hi - 1
    for p in base:
        p = int(p)
        if p * p > last:
            break
        start = max(p * p, -(-first // p) * p)
        if start % 2 == 0:
            start += p
        if start <= last:
            seg[(start - 1) // 2 - lo :: p] = False
    return 2 * (np.flatnonzero(seg) + lo) + 1


def sieve(limit: int, segment_size: int = DEFAULT_SEGMENT, workers: int = 1) -> PrimeTable:
    """Segmented odd-only sieve of Eratosthenes.

    ``segment_size`` bounds memory (bytes per segment, roughly); ``workers``
    sieves segments concurrently, the output is the same for any value.
    """
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    limit = int(limit)
    base = _small_primes(math.isqrt(limit))[1:]  # odd base primes
    kmax = (limit - 1) // 2  # largest k with 2k+1 <= limit
    bounds = [(lo, min(lo + segment_size, kmax + 1)) for lo in range(1, kmax + 1, segment_size)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _sieve_segment(b[0], b[1], base), bounds))
    else:
        parts = [_sieve_segment(lo, hi, base) for lo, hi in bounds]
    primes = np.concatenate([np.array([2], dtype=np.int64), *[p.astype(np.int64) for p in parts]])
    return PrimeTable(limit, primes)


def limit_for_count(n: int) -> int:
    """An integer x with pi(x) >= n (Rosser's bound p_n < n(log n + log log n), n >= 6)."""
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 1


def nth_prime(table: PrimeTable, n: int) -> int:
    """p_n, 1-indexed."""
    if n < 1 or n > len(table):
        raise IndexError(f"prime index {n} outside 1..{len(table)}")
    return int(table.primes[n - 1])


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def von_mangoldt(n: int) -> float:
    """log p if n = p^k, else 0."""
    if n < 1:
        raise DomainError(f"von_mangoldt needs n >= 1, got {n}")
    if n == 1:
        return 0.0
    p = next((d for d in range(2, math.isqrt(n) + 1) if n % d == 0), n)
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


@dataclass(frozen=True)
class ChebyshevAccumulator:
    """Right-continuous pure-jump function given by its jump locations and weights.

    Built by :func:`chebyshev` it holds psi (``kind="psi"``) or theta
    (``kind="theta"``).  :func:`jump_function` builds synthetic ones
    (``kind="synthetic"``) used as planted oracles.
    """

    limit: float
    locations: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    kind: str = "psi"
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.locations.shape != self.weights.shape:
            raise DomainError("locations and weights differ in length")
        if self.locations.size > 1 and np.any(np.diff(self.locations) <= 0):
            raise DomainError("jump locations must be strictly increasing")
        object.__setattr__(self, "cumulative", compensated_prefix_sums(self.weights))
        for a in (self.locations, self.weights, self.cumulative):
            a.setflags(write=False)

    def jumps_upto(self, x: float) -> int:
        """Number of jumps located at or below x."""
        return int(np.searchsorted(self.locations, x, side="right"))


def chebyshev(limit: int, table: PrimeTable | None = None, prime_only: bool = False) -> ChebyshevAccumulator:
    """psi (default) or theta jump data up to ``limit``.

    Each weight is log p computed once per prime and reused for every power.
    """
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"accumulator limit must be >= 2, got {limit}")
    if table is None or table.limit < limit:
        table = sieve(limit)
    primes = table.primes[table.primes <= limit]
    logs = np.log(primes.astype(np.float64))
    if prime_only:
        return ChebyshevAccumulator(limit, primes.copy(), logs, kind="theta")
    locs, wts = [primes], [logs]
    root = primes[primes <= math.isqrt(limit)]
    root_logs = logs[: root.size]
    power = root.copy()
    while root.size:
        power = power * root
        keep = power <= limit
        if not keep.any():
            break
        # once p^k > limit, higher powers of p are too; trim from the right
        n = int(np.flatnonzero(keep)[-1]) + 1
        root, root_logs, power = root[:n], root_logs[:n], power[:n]
        locs.append(power[keep[:n]])
        wts.append(root_logs[keep[:n]])
    loc = np.concatenate(locs)
    order = np.argsort(loc, kind="stable")
    return ChebyshevAccumulator(limit, loc[order], np.concatenate(wts)[order], kind="psi")


def jump_function(locations, weights, limit: float | None = None) -> ChebyshevAccumulator:
    """Synthetic accumulator from explicit jumps (locations must increase)."""
    loc = np.asarray(locations, dtype=np.float64).copy()
    w = np.asarray(weights, dtype=np.float64).copy()
    lim = float(loc[-1]) if limit is None else float(limit)
    return ChebyshevAccumulator(lim, loc, w, kind="synthetic")


def _check_range(acc: ChebyshevAccumulator, x) -> np.ndarray:
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs > acc.limit) or np.any(xs < 0):
        raise RangeError(f"x outside [0, {acc.limit}]")
    return xs


def psi(acc: ChebyshevAccumulator, x):
    """Sum of weights at locations <= x.  Accepts scalars or arrays."""
    xs = _check_range(acc, x)
    idx = np.searchsorted(acc.locations, xs, side="right")
    padded = np.concatenate(([0.0], acc.cumulative))
    out = padded[idx]
    return float(out) if out.ndim == 0 else out


def remainder(acc: ChebyshevAccumulator, x):
    """R(x) = psi(x) - x."""
    xs = _check_range(acc, x)
    out = psi(acc, xs) - xs
    return float(out) if np.ndim(out) == 0 else out


# -- prime-table cache --------------------------------------------------------

CACHE_ENV = "ERDOS_STIELTJES_CACHE_DIR"


def default_cache_path() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) / "primes.txt" if d else None


def save_table(table: PrimeTable, path: str | Path) -> None:
    """Newline-delimited decimals: the limit, then the primes in order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(f"{table.limit}\n")
        np.savetxt(fh, table.primes, fmt="%d")
    tmp.replace(path)


def load_table(path: str | Path, limit: int) -> PrimeTable | None:
    """Table restricted to ``limit`` if the cached header covers it, else None."""
    path = Path(path)
    if not path.exists():
        return None
    with open(path) as fh:
        header = int(fh.readline())
        if header < limit:
            return None
        primes = np.loadtxt(fh, dtype=np.int64, ndmin=1)
    return PrimeTable(limit, primes[primes <= limit].copy())


def cached_sieve(limit: int, cache_path: str | Path | None = None, workers: int = 1) -> PrimeTable:
    """Sieve, reading from / writing to a cache file when one is configured."""
    path = cache_path if cache_path is not None else default_cache_path()
    if path is not None:
        table = load_table(path, limit)
        if table is not None:
            return table
    table = sieve(limit, workers=workers)
    if path is not None:
        save_table(table, path)
    return table
