import numpy as np
import pytest

from hardyops import SymbolPair, TrigPoly


def rand_poly(rng, lo, hi, d=1):
    n = hi - lo + 1
    shape = (n,) if d == 1 else (n, d, d)
    return TrigPoly(lo, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def rand_pair(rng, deg=6, d=1):
    """Symbols with random windows inside ``[-deg, deg]``."""
    lo1, lo2 = rng.integers(-deg, 1, size=2)
    hi1, hi2 = rng.integers(0, deg + 1, size=2)
    return SymbolPair(rand_poly(rng, lo1, hi1, d), rand_poly(rng, lo2, hi2, d))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
