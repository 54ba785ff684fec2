"""Riemann-Stieltjes integrals of the damped oscillation g against a jump function.

Against a pure-jump integrator the integral is the weighted sum of g at the
jump locations, so nothing here uses quadrature except the power-law main
term, which has no elementary antiderivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, RangeError
from .numeric import fsum_complex
from .primes import ChebyshevAccumulator, psi

DAMPINGS = ("exponential", "power-law")

# absolute tolerance handed to QAWO for the power-law main term
POWER_LAW_QUAD_TOL = 1e-10


@dataclass(frozen=True)
class TestFunction:
    """g(x) = e^{i pi x} * damping(x), damping e^{-lam x} or x^{-lam}."""

    __test__ = False  # not a pytest class

    lam: float
    damping: str = "exponential"

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lambda must be positive, got {self.lam}")
        if self.damping not in DAMPINGS:
            raise DomainError(f"damping must be one of {DAMPINGS}, got {self.damping!r}")

    @property
    def rate(self) -> complex:
        """c with g(x) = e^{c x} (exponential damping only)."""
        return complex(-self.lam, math.pi)


def oscillation(x):
    """e^{i pi x}; exactly (-1)^x at integers, whatever their size."""
    xs = np.asarray(x, dtype=np.float64)
    r = np.fmod(xs, 2.0)  # exact
    out = np.exp(1j * np.pi * r)
    ints = r == np.round(r)
    out = np.where(ints, np.where(np.abs(r) == 1.0, -1.0 + 0j, 1.0 + 0j), out)
    return complex(out) if out.ndim == 0 else out


def evaluate_g(f: TestFunction, x):
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs < 1):
        raise DomainError("g is defined for x >= 1")
    if f.damping == "exponential":
        damp = np.exp(-f.lam * xs)
    else:
        damp = xs ** (-f.lam)
    out = oscillation(xs) * damp
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class IntegralReport:
    total: complex
    main_term: complex
    error_term: complex
    truncation_X: float
    truncation_bound: float
    lam: float
    damping: str

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "damping": self.damping,
            "X": self.truncation_X,
            "total": [self.total.real, self.total.imag],
            "main": [self.main_term.real, self.main_term.imag],
            "error": [self.error_term.real, self.error_term.imag],
            "truncation_bound": self.truncation_bound,
        }


def _check_X(acc: ChebyshevAccumulator, X: float) -> None:
    if X > acc.limit:
        raise RangeError(f"X={X} exceeds accumulator limit {acc.limit}")
    if X < 1:
        raise DomainError(f"X must be >= 1, got {X}")


def _jumps(acc: ChebyshevAccumulator, X: float) -> slice:
    # jumps in (1, X]
    lo = int(np.searchsorted(acc.locations, 1.0, side="right"))
    return slice(lo, acc.jumps_upto(X))


def stieltjes_integral(acc: ChebyshevAccumulator, f: TestFunction, X: float) -> complex:
    """integral over (1, X] of g d(acc), as the exact jump sum."""
    _check_X(acc, X)
    sl = _jumps(acc, X)
    if sl.start >= sl.stop:
        return 0j
    return fsum_complex(acc.weights[sl] * evaluate_g(f, acc.locations[sl]))


def integral_by_parts(acc: ChebyshevAccumulator, f: TestFunction, X: float) -> complex:
    """g(X)psi(X) - g(1)psi(1) - integral_1^X psi g' dx.

    psi is constant between jumps, so each piece of the last integral is
    psi * (g(b) - g(a)) exactly.
    """
    if f.damping != "exponential":
        raise DomainError("integration by parts is implemented for exponential damping only")
    _check_X(acc, X)
    sl = _jumps(acc, X)
    pts = np.concatenate(([1.0], acc.locations[sl].astype(np.float64), [float(X)]))
    levels = np.concatenate(([psi(acc, 1.0)], acc.cumulative[sl]))
    gp = evaluate_g(f, pts)
    psi_X = float(levels[-1])
    pieces = levels * (gp[1:] - gp[:-1])
    boundary = [gp[-1] * psi_X, -gp[0] * float(levels[0])]
    return fsum_complex(np.concatenate((boundary, -pieces)))


def main_term(f: TestFunction, X: float) -> complex:
    """integral_1^X g(x) dx."""
    if X < 1:
        raise DomainError(f"X must be >= 1, got {X}")
    if f.damping == "exponential":
        return (evaluate_g(f, X) - evaluate_g(f, 1.0)) / f.rate
    if X == 1:
        return 0j
    def damp(x):
        return x ** (-f.lam)

    kw = dict(wvar=math.pi, epsabs=POWER_LAW_QUAD_TOL, epsrel=1e-12, limit=2000)
    re, _ = integrate.quad(damp, 1.0, X, weight="cos", **kw)
    im, _ = integrate.quad(damp, 1.0, X, weight="sin", **kw)
    return complex(re, im)


def truncation_bound(f: TestFunction, X: float) -> float:
    """Upper bound on |integral_X^inf g dpsi|, from psi(t) <= 2t.

    Parts give |.| <= integral_X^inf psi(t) |d damping(t)|, then
    exponential: 2 e^{-lam X} (X + 1/lam); power-law: 2 lam X^{1-lam} / (lam - 1)
    (infinite for lam <= 1, where the tail need not converge absolutely).
    """
    lam = f.lam
    if f.damping == "exponential":
        return 2.0 * math.exp(-lam * X) * (X + 1.0 / lam)
    if lam <= 1:
        return math.inf
    return 2.0 * lam * X ** (1.0 - lam) / (lam - 1.0)


def split_main_error(acc: ChebyshevAccumulator, f: TestFunction, X: float) -> IntegralReport:
    """Total jump sum, the dx main term over [1, X], and their difference (the dR part)."""
    total = stieltjes_integral(acc, f, X)
    main = main_term(f, X)
    return IntegralReport(total, main, total - main, float(X), truncation_bound(f, X), f.lam, f.damping)


class YoungResult(NamedTuple):
    satisfied: bool
    margin: float


def young_criterion(alpha: float, beta: float) -> YoungResult:
    """Holder exponents alpha, beta admit a Young integral iff alpha + beta > 1."""
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not 0 < v <= 1:
            raise DomainError(f"{name} must lie in (0, 1], got {v}")
    margin = alpha + beta - 1.0
    return YoungResult(margin > 0, margin)


def p_variation(samples: Sequence[tuple[float, float]], p: float) -> float:
    """Exact p-variation over partitions drawn from the sample points.

    best[j] is the largest sum of |increment|^p over chains 0 = i_0 < ... < i_m = j;
    O(n^2) dynamic programming.
    """
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    pts = list(samples)
    if len(pts) < 2:
        raise DomainError("p-variation needs at least two samples")
    x = np.array([float(a) for a, _ in pts])
    v = np.array([b for _, b in pts])
    if np.any(np.diff(x) <= 0):
        raise DomainError("sample abscissae must be strictly increasing")
    best = np.zeros(v.size)
    for j in range(1, v.size):
        best[j] = np.max(best[:j] + np.abs(v[j] - v[:j]) ** p)
    return float(best[-1] ** (1.0 / p))
