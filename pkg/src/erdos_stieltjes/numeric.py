"""Small numerical kernels: compensated prefix sums and log-log fits."""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np


def compensated_prefix_sums(terms: np.ndarray) -> np.ndarray:
    """Prefix sums of ``terms`` with the rounding error of every addition folded back in.

    The plain ``np.cumsum`` is followed by an exact TwoSum recovery of each
    step's rounding error; the running sum of those errors is added as a
    correction.  Element ``i`` depends only on ``terms[:i + 1]``, so extending
    the input never changes earlier entries.
    """
    t = np.asarray(terms, dtype=np.float64)
    if t.size == 0:
        return t.copy()
    s = np.cumsum(t)
    prev = np.empty_like(s)
    prev[0] = 0.0
    prev[1:] = s[:-1]
    # TwoSum(prev, t) = s + err, exactly
    bv = s - prev
    av = s - bv
    err = (prev - av) + (t - bv)
    return s + np.cumsum(err)


def fsum_complex(values: Iterable[complex]) -> complex:
    vals = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                      dtype=np.complex128)
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


class LineFit(NamedTuple):
    slope: float
    intercept: float
    residual: float  # RMS of the fit residuals


def loglog_fit(x, y) -> LineFit:
    """Ordinary least squares of log(y) against log(x), equal weights."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    if lx.size < 2:
        raise ValueError("need at least two points for a slope")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return LineFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))))
