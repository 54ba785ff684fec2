import math

import numpy as np
import pytest

from erdos_stieltjes.errors import CapacityError, DomainError
from erdos_stieltjes.primes import sieve
from erdos_stieltjes.tuples import (TupleSpec, discrepancy_scan, log_power_integral, nu, regime_flags,
                                    singular_series, tuple_count)

from conftest import trial_division_primes

TWIN = TupleSpec((0, 2))
TRIPLE = TupleSpec((0, 2, 4))
SINGLE = TupleSpec((0,))


def test_tuple_spec():
    assert TupleSpec.parse("0, 2,6").offsets == (0, 2, 6)
    for bad in ((), (2, 0), (0, 0), (-1, 3)):
        with pytest.raises(DomainError):
            TupleSpec(bad)
    with pytest.raises(DomainError):
        TupleSpec.parse("0,x")
    assert TWIN.is_admissible() and not TRIPLE.is_admissible()


def test_nu():
    assert nu(TWIN, 3) == 2
    assert nu(TWIN, 2) == 1
    assert nu(TRIPLE, 3) == 3
    with pytest.raises(DomainError):
        nu(TWIN, 4)


@pytest.mark.parametrize("H", [TWIN, TRIPLE, TupleSpec((0, 2, 6, 8)), TupleSpec((0, 4, 6, 10, 12))])
def test_nu_saturates_beyond_span(H):
    for p in trial_division_primes(200):
        assert 1 <= nu(H, p) <= min(H.k, p)
        if p > H.span:
            assert nu(H, p) == H.k


def test_singular_series_twin():
    # independent oracle: plain product loop over primes up to 10^6
    prod = 1.0
    for p in sieve(10**6).primes.tolist():
        prod *= (1 - nu(TWIN, p) / p) / (1 - 1 / p) ** 2
    got = singular_series(TWIN, 10**6)
    assert got == pytest.approx(prod, rel=1e-11)
    assert got == pytest.approx(1.32032, abs=1e-5)
    assert got == pytest.approx(2 * 0.6601618158468696, rel=1e-6)


def test_singular_series_special_cases():
    assert singular_series(TRIPLE, 1000) == 0
    assert singular_series(TRIPLE, 1000, "paper") == 0
    assert singular_series(SINGLE, 10**5) == 1.0


def test_paper_form_decays_with_cutoff():
    vals = [singular_series(TWIN, c, "paper") for c in (10, 100, 1000, 10**4)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.01


def test_standard_form_is_cauchy():
    H = TupleSpec((0, 2, 6))
    cs = [16 * 2**j for j in range(8)]
    vals = [singular_series(H, c) for c in cs]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def brute_count(H, x):
    primes = set(trial_division_primes(x + H.offsets[-1]))
    return sum(all(n + h in primes for h in H.offsets) for n in range(1, x + 1))


def test_tuple_count_examples(table_small):
    assert tuple_count(table_small, SINGLE, 10) == 4
    assert tuple_count(table_small, TWIN, 10) == 2


@pytest.mark.parametrize("H", [SINGLE, TWIN, TRIPLE, TupleSpec((0, 2, 6)), TupleSpec((0, 4, 6))])
def test_tuple_count_against_brute_force(table_small, H):
    for x in (1, 2, 50, 777, 3000):
        assert tuple_count(table_small, H, x) == brute_count(H, x)


def test_tuple_count_monotone_and_bounded(table_small):
    H = TupleSpec((0, 2, 6))
    counts = [tuple_count(table_small, H, x) for x in range(0, 20_000, 500)]
    assert counts == sorted(counts)
    pi = lambda y: int(np.searchsorted(table_small.primes, y, side="right"))  # noqa: E731
    assert all(c <= pi(x + 6) for c, x in zip(counts, range(0, 20_000, 500)))


def test_tuple_count_capacity():
    with pytest.raises(CapacityError):
        tuple_count(sieve(100), TWIN, 99)


def trapezoid_oracle(x, k, n=2**20):
    y = np.linspace(2.0, x, n + 1)
    f = 1.0 / np.log(y) ** k
    h = (x - 2.0) / n
    t1 = h * (f.sum() - 0.5 * (f[0] + f[-1]))
    y2 = np.linspace(2.0, x, 2 * n + 1)
    f2 = 1.0 / np.log(y2) ** k
    t2 = h / 2 * (f2.sum() - 0.5 * (f2[0] + f2[-1]))
    return t2 + (t2 - t1) / 3  # one Richardson step


def test_log_power_integral_k1():
    x = math.e**2
    assert log_power_integral(x, 1) == pytest.approx(trapezoid_oracle(x, 1), rel=1e-10)
    mpmath = pytest.importorskip("mpmath")
    assert log_power_integral(1e6, 1) == pytest.approx(float(mpmath.li(1e6) - mpmath.li(2)), rel=1e-10)


def test_log_power_integral_limits():
    assert log_power_integral(2 + 1e-12, 1) < 1e-11
    assert 0 < log_power_integral(1e6, 2) < log_power_integral(1e6, 1)
    assert log_power_integral(1e4, 3) == pytest.approx(trapezoid_oracle(1e4, 3), rel=1e-10)
    with pytest.raises(DomainError):
        log_power_integral(2, 1)


def test_k1_discrepancy_is_pi_minus_li(table_small):
    scan = discrepancy_scan(table_small, SINGLE, [1000, 10**5])
    for r in scan.records:
        pi = len(trial_division_primes(r.x)) if r.x <= 1000 else int(np.searchsorted(table_small.primes, r.x, "right"))
        assert r.singular_series == 1.0
        assert r.discrepancy == pi - log_power_integral(r.x, 1)


def test_inadmissible_triple(table_small):
    scan = discrepancy_scan(table_small, TRIPLE, [10, 1000, 10**6])
    for r in scan.records:
        assert r.singular_series == 0 and r.lhs_count <= 2
        assert r.discrepancy == r.lhs_count


def test_zero_discrepancies_excluded():
    # n, n+1, n+2 are never all prime and S vanishes at p = 2
    scan = discrepancy_scan(sieve(2000), TupleSpec((0, 1, 2)), [10, 100, 1000])
    assert all(r.discrepancy == 0 for r in scan.records)
    assert scan.excluded_zero == 3 and scan.slope is None


def test_scan_outputs(table_small):
    scan = discrepancy_scan(table_small, TWIN, [10**4, 10**5, 10**6])
    assert scan.slope is not None
    text = scan.to_csv().splitlines()
    assert text[0] == "x,lhs_count,singular_series,integral_term,discrepancy"
    assert text[1].startswith("10000,205,")
    js = scan.to_json()
    assert js["singular_series_form"] == "standard" and len(js["records"]) == 3


def test_regime_flags():
    f = regime_flags(TWIN, 1e6)
    assert f["x_at_least_10"] and f["k_within_loglog5"] and f["offsets_within_log2"]
    assert not regime_flags(TupleSpec((0, 2, 6, 8, 12, 18)), 20)["k_within_loglog5"]
