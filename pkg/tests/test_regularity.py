import numpy as np
import pytest

from erdos_stieltjes.errors import DomainError
from erdos_stieltjes.primes import jump_function
from erdos_stieltjes.regularity import dyadic_windows, holder_constant, profile_csv, profile_slope, scaling_profile


def sqrt_r(x):
    return np.sqrt(x)


def test_zero_remainder():
    acc = jump_function(np.arange(1, 2001), np.ones(2000))
    est = holder_constant(acc, 0.5, (1, 2000))
    assert est.best_constant == 0.0


def test_sqrt_remainder_constant():
    est = holder_constant(sqrt_r, 0.5, (1, 10_000))
    assert 0.9 <= est.best_constant <= 1.0


def test_linear_remainder_beta_one():
    for c in (-2.5, 0.75):
        est = holder_constant(lambda x, c=c: c * x, 1.0, (0, 5000), grid_step=0.5)
        assert est.best_constant == pytest.approx(abs(c), rel=1e-13)


def test_monotone_in_min_separation(acc_1e5):
    values = [holder_constant(acc_1e5, 0.5, (100, 1e5), min_separation=s).best_constant for s in (1, 2, 8, 100, 5000)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_reproducible(acc_1e5):
    a = holder_constant(acc_1e5, 0.5, (100, 1e5))
    b = holder_constant(acc_1e5, 0.5, (100, 1e5))
    assert a == b
    x, y = a.argmax_pair
    assert y - x >= a.min_separation


def test_constant_recomputable_from_pair(acc_1e5):
    from erdos_stieltjes.primes import remainder
    est = holder_constant(acc_1e5, 0.5, (100, 1e5))
    x, y = est.argmax_pair
    assert abs(remainder(acc_1e5, y) - remainder(acc_1e5, x)) / (y - x) ** 0.5 == pytest.approx(est.best_constant)


def test_holder_errors(acc_1e5):
    with pytest.raises(DomainError):
        holder_constant(acc_1e5, 0.5, (10, 10.5))
    with pytest.raises(DomainError):
        holder_constant(acc_1e5, 0.5, (10, 100), min_separation=0.5)
    with pytest.raises(DomainError):
        holder_constant(acc_1e5, 1.5, (10, 100))


def test_holder_stable_under_refinement(acc_1e7):
    coarse = holder_constant(acc_1e7, 0.5, (100, 1e6), grid_step=1.0)
    fine = holder_constant(acc_1e7, 0.5, (100, 1e6), grid_step=0.5)
    assert np.isfinite(coarse.best_constant)
    assert abs(fine.best_constant - coarse.best_constant) < 0.5 * coarse.best_constant


def test_degenerate_window():
    prof = scaling_profile(sqrt_r, 100, [1000])
    assert prof == [(1000.0, pytest.approx(10 - 1))]


def test_sqrt_profile_slope_from_origin():
    prof = scaling_profile(sqrt_r, 10_000, dyadic_windows(100) + [100], x_min=0)
    assert abs(profile_slope(prof).slope - 0.5) < 0.05


def test_sqrt_profile_anchored_at_one_is_steeper():
    # the maximal increment sits at the left end: sqrt(1 + h) - 1, not sqrt(h)
    prof = scaling_profile(sqrt_r, 10_000, dyadic_windows(100) + [100], x_min=1)
    assert profile_slope(prof).slope > 0.6


def test_profile_on_psi(acc_1e5):
    prof = scaling_profile(acc_1e5, 1e5, dyadic_windows(1e4))
    assert all(m >= 0 for _, m in prof)
    assert profile_csv(prof).splitlines()[0] == "h,max_increment"
    with pytest.raises(DomainError):
        scaling_profile(acc_1e5, 1e5, [0.5])
