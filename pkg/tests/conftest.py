from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import settings

from bicov.scalars import QuadraticField, SymbolicField

settings.register_profile("bicov", max_examples=40, deadline=None)
settings.load_profile("bicov")


def eval_symbolic(x, s) -> Fraction:
    """Evaluate a symbolic scalar at a rational value of s."""
    s = Fraction(s)

    def ev(p):
        return sum((Fraction(int(c)) * s ** k for k, c in enumerate(p.coeffs())), Fraction(0))

    return ev(x.num) / ev(x.den)


def gauss_binomial(n: int, k: int, x: Fraction) -> Fraction:
    """Gaussian binomial in x by counting k-subsets of {0..n-1} weighted by their inversion sum."""
    if not 0 <= k <= n:
        return Fraction(0)
    base = k * (k - 1) // 2
    return sum((x ** (sum(S) - base) for S in combinations(range(n), k)), Fraction(0))


@pytest.fixture(scope="session")
def sym():
    return SymbolicField()


@pytest.fixture(scope="session")
def q2():
    """q^2 - (5/2) q + 1 = (q - 2)(q - 1/2), so q = 2."""
    return QuadraticField(Fraction(-5, 2))


@pytest.fixture(scope="session")
def tau3():
    return QuadraticField(3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
