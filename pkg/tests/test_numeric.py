import math

import numpy as np
from hypothesis import given, settings, strategies as st

from erdos_stieltjes.numeric import compensated_prefix_sums, loglog_fit


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=200))
def test_prefix_sums_match_exact_sums(xs):
    got = compensated_prefix_sums(np.array(xs))
    for i in range(len(xs)):
        exact = math.fsum(xs[: i + 1])
        scale = math.fsum(abs(v) for v in xs[: i + 1]) or 1.0
        assert abs(got[i] - exact) <= 4e-16 * scale


def test_prefix_sums_beat_naive_on_ill_conditioned_input():
    terms = np.array([1.0, 1e-16] * 50_000)
    got = compensated_prefix_sums(terms)[-1]
    assert got == math.fsum(terms)
    assert np.cumsum(terms)[-1] != got


def test_prefix_sums_are_prefix_stable():
    rng = np.random.default_rng(1)
    t = rng.normal(size=5000)
    assert np.array_equal(compensated_prefix_sums(t[:3000]), compensated_prefix_sums(t)[:3000])


def test_loglog_fit_recovers_power():
    x = np.geomspace(1, 1e4, 20)
    fit = loglog_fit(x, 3.0 * x**1.25)
    assert abs(fit.slope - 1.25) < 1e-12
    assert fit.residual < 1e-12
