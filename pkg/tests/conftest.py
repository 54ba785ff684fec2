import math

import pytest

from erdos_stieltjes.primes import chebyshev, sieve

ACCEPTANCE_LINES: list[str] = []


def trial_division_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


@pytest.fixture(scope="session")
def table_small():
    return sieve(2_000_000)


@pytest.fixture(scope="session")
def acc_1e5(table_small):
    return chebyshev(100_000, table_small)


@pytest.fixture(scope="session")
def table_1e7():
    return sieve(10**7 + 10)


@pytest.fixture(scope="session")
def acc_1e7(table_1e7):
    return chebyshev(10**7, table_1e7)


@pytest.fixture
def record():
    """Log one acceptance line; printed in the terminal summary."""
    def _record(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
