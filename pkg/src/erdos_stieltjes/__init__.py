"""Numerics for the alternating Erdos series sum (-1)^n n / p_n and its Stieltjes form against psi."""

from .errors import CapacityError, DomainError, ErdosError, PrecisionError, RangeError
from .primes import ChebyshevAccumulator, PrimeTable, chebyshev, limit_for_count, nth_prime, psi, remainder, sieve, von_mangoldt
from .series import SeriesResult, accelerate, erdos_partial_sum, erdos_series, gap_series_partial
from .stieltjes import (IntegralReport, TestFunction, evaluate_g, integral_by_parts, p_variation,
                        split_main_error, stieltjes_integral, young_criterion)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DomainError", "ErdosError", "PrecisionError", "RangeError",
    "ChebyshevAccumulator", "PrimeTable", "chebyshev", "limit_for_count", "nth_prime", "psi", "remainder", "sieve", "von_mangoldt",
    "SeriesResult", "accelerate", "erdos_partial_sum", "erdos_series", "gap_series_partial",
    "IntegralReport", "TestFunction", "evaluate_g", "integral_by_parts", "p_variation", "split_main_error",
    "stieltjes_integral", "young_criterion",
]
