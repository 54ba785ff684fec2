"""Closed-form main terms, Laplace tails, and fitted small-lambda exponents.

Throughout, c = i*pi - lambda so that g(x) = e^{c x}.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, PrecisionError
from .numeric import loglog_fit
from .primes import ChebyshevAccumulator, jump_function
from .stieltjes import TestFunction, stieltjes_integral, truncation_bound

GAMMA_TOL = 1e-12
GAMMA_MAX_ITER = 10_000


def _check_lambda(lam: float) -> None:
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")


def main_term_I1(lam: float) -> complex:
    """integral_1^inf e^{(i pi - lam) x} dx = -e^{-lam} / (lam - i pi)."""
    _check_lambda(lam)
    return -math.exp(-lam) / complex(lam, -math.pi)


def main_term_after_parts(lam: float) -> complex:
    """The post-parts main term as the closed form e^{i pi - lam} / (lam - i pi)^2.

    This expression is *not* the value of (i pi - lam) * integral_1^inf x e^{c x} dx;
    that integral is given by :func:`main_term_after_parts_exact`.
    """
    _check_lambda(lam)
    return -math.exp(-lam) / complex(lam, -math.pi) ** 2


def main_term_after_parts_exact(lam: float) -> complex:
    """(i pi - lam) * integral_1^inf x e^{c x} dx = e^c (1 - c) / c."""
    _check_lambda(lam)
    c = complex(-lam, math.pi)
    return -math.exp(-lam) * (1 - c) / c


# -- incomplete gamma ---------------------------------------------------------

def _lower_gamma_series(a: float, x: float) -> float:
    # gamma(a, x) = x^a e^{-x} sum_n x^n / (a (a+1) ... (a+n))
    term = 1.0 / a
    total = term
    for n in range(1, GAMMA_MAX_ITER):
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * GAMMA_TOL:
            return total * math.exp(a * math.log(x) - x)
    raise PrecisionError(f"incomplete gamma series did not converge for a={a}, x={x}")


def _upper_gamma_cf(a: float, x: float) -> float:
    # modified Lentz on Gamma(a, x) = e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - ...))
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < GAMMA_TOL:
            return h * math.exp(a * math.log(x) - x)
    raise PrecisionError(f"incomplete gamma fraction did not converge for a={a}, x={x}")


def upper_incomplete_gamma(a: float, x: float) -> float:
    """Gamma(a, x) = integral_x^inf t^{a-1} e^{-t} dt, for a > 0, x >= 0."""
    if a <= 0 or x < 0:
        raise DomainError(f"need a > 0 and x >= 0, got a={a}, x={x}")
    if x == 0:
        return math.gamma(a)
    if x < a + 1.0:
        return math.gamma(a) - _lower_gamma_series(a, x)
    return _upper_gamma_cf(a, x)


class LaplaceTail(NamedTuple):
    exact: float
    asymptotic: float

    @property
    def ratio(self) -> float:
        return self.exact / self.asymptotic


def laplace_tail(theta: float, lam: float) -> LaplaceTail:
    """integral_1^inf x^theta e^{-lam x} dx = Gamma(theta+1, lam) / lam^{theta+1},
    alongside its small-lambda form Gamma(theta+1) / lam^{theta+1}."""
    if theta < 0:
        raise DomainError(f"theta must be >= 0, got {theta}")
    _check_lambda(lam)
    a = theta + 1.0
    scale = lam ** (-a)
    return LaplaceTail(upper_incomplete_gamma(a, lam) * scale, math.gamma(a) * scale)


# -- exponent fits ------------------------------------------------------------

@dataclass(frozen=True)
class ExponentFit:
    lambda_grid: tuple[float, ...]
    magnitudes: tuple[float, ...]
    fitted_slope: float
    residual: float
    main_magnitudes: tuple[float, ...] = ()
    error_terms: tuple[complex, ...] = field(default=(), repr=False)
    totals: tuple[complex, ...] = field(default=(), repr=False)
    X: float = math.nan
    kind: str = "psi"

    @property
    def crossover_lambda(self) -> float | None:
        """Largest grid lambda where |I2| already exceeds |I1|, if any."""
        hits = [lam for lam, e, m in zip(self.lambda_grid, self.magnitudes, self.main_magnitudes) if e > m]
        return max(hits) if hits else None

    def summary(self) -> dict:
        return {"slope": self.fitted_slope, "residual": self.residual, "grid": list(self.lambda_grid),
                "X": self.X, "kind": self.kind, "crossover_lambda": self.crossover_lambda}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "abs_I", "abs_I1", "abs_I2", "re_I", "im_I", "re_I2", "im_I2"])
        for lam, tot, err, m in zip(self.lambda_grid, self.totals, self.error_terms, self.main_magnitudes):
            w.writerow([repr(lam), repr(abs(tot)), repr(m), repr(abs(err)),
                        repr(tot.real), repr(tot.imag), repr(err.real), repr(err.imag)])
        return buf.getvalue()


def check_grid(lambda_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(v) for v in lambda_grid)
    if len(grid) < 6:
        raise DomainError(f"lambda grid needs at least 6 points, got {len(grid)}")
    if any(not 0 < v <= 3 for v in grid):
        raise DomainError("lambda grid must lie in (0, 3]")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError("lambda grid must be strictly decreasing")
    return grid


def geometric_grid(lam_max: float, lam_min: float, n: int = 8) -> tuple[float, ...]:
    """n points from lam_max down to lam_min, evenly spaced in log."""
    return tuple(float(v) for v in np.geomspace(lam_max, lam_min, n))


def fit_error_exponent(acc: ChebyshevAccumulator, lambda_grid: Sequence[float], X: float) -> ExponentFit:
    """Fit |I2(lam)| ~ lam^{-slope} where I2 = (jump sum to X) - main_term_I1(lam).

    Raises PrecisionError when the truncation bound reaches 1% of |I2| anywhere on
    the grid.
    """
    grid = check_grid(lambda_grid)
    totals, errors, mains = [], [], []
    for lam in grid:
        f = TestFunction(lam)
        total = stieltjes_integral(acc, f, X)
        main = main_term_I1(lam)
        err = total - main
        bound = truncation_bound(f, X)
        if not bound < 0.01 * abs(err):
            raise PrecisionError(f"truncation bound {bound:.3g} at lambda={lam} is not below 1% of "
                                 f"|I2|={abs(err):.3g}; increase X beyond {X}")
        totals.append(total)
        errors.append(err)
        mains.append(abs(main))
    mags = [abs(e) for e in errors]
    fit = loglog_fit([1.0 / lam for lam in grid], mags)
    return ExponentFit(grid, tuple(mags), fit.slope, fit.residual, tuple(mains), tuple(errors),
                       tuple(totals), float(X), acc.kind)


def planted_remainder(exponent: float, limit: int) -> ChebyshevAccumulator:
    """Synthetic integrator dx + dR with R(x) ~ x^exponent phase-locked to g.

    Jumps of 1 at every integer stand in for dx; R adds 2a n^{a-1} at each even
    n, so R(x) ~ x^a and g dR carries no cancelling sign.  The error term then
    grows like Gamma(a+1) lam^{-a} as lam -> 0.
    """
    if exponent <= 0:
        raise DomainError(f"planted exponent must be positive, got {exponent}")
    n = np.arange(2, int(limit) + 1, dtype=np.float64)
    w = 1.0 + np.where(n % 2 == 0, 2.0 * exponent * n ** (exponent - 1.0), 0.0)
    return jump_function(n, w, limit)


# -- power-law threshold ------------------------------------------------------

class ProbeRow(NamedTuple):
    lam: float
    convergent: bool
    value: float
    ratio: float  # measured increment ratio over one T-doubling


def _dyadic_increments(theta: float, lam: float, doublings: int) -> np.ndarray:
    s = theta - lam - 1.0
    out = np.empty(doublings)
    for j in range(doublings):
        a, b = 2.0**j, 2.0 ** (j + 1)
        # substitute x = a e^u so the integrand stays O(1) on every block
        val, _ = integrate.quad(lambda u: lam * math.exp((s + 1.0) * u), 0.0, math.log(b / a),
                                epsabs=0, epsrel=1e-13)
        out[j] = val * a ** (s + 1.0)
    return out


def power_law_threshold_probe(theta: float = 0.5, lambda_grid: Sequence[float] = (0.4, 0.6, 1.0, 1.5, 2.0),
                              doublings: int = 40) -> tuple[list[ProbeRow], float | None]:
    """Classify integral_1^inf lam x^{theta - lam - 1} dx as convergent or divergent.

    The integral is split on [2^j, 2^{j+1}] and integrated numerically; it counts
    as convergent when the block increments shrink geometrically.  Returns the
    rows and the empirical threshold (midpoint between the largest divergent and
    smallest convergent lambda, None if the grid does not straddle it).
    """
    rows = []
    for lam in sorted(float(v) for v in lambda_grid):
        _check_lambda(lam)
        inc = _dyadic_increments(theta, lam, doublings)
        ratios = inc[1:] / inc[:-1]
        r = float(ratios[-1])
        convergent = bool(np.all(ratios < 1.0 - 1e-9))
        partial = math.fsum(inc)
        value = partial + float(inc[-1]) * r / (1.0 - r) if convergent else math.inf
        rows.append(ProbeRow(lam, convergent, value, r))
    div = [row.lam for row in rows if not row.convergent]
    conv = [row.lam for row in rows if row.convergent]
    threshold = None
    if div and conv and max(div) < min(conv):
        threshold = 0.5 * (max(div) + min(conv))
    return rows, threshold
