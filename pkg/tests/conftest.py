import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nilweyl import numeric
from nilweyl.numeric import PRECISION, CirclePoint, PreciseReal

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _restore_precision():
    bits, guard = PRECISION.bits, PRECISION.guard
    yield
    numeric.configure(bits, guard)


def reals(bound=8):
    """Exact PreciseReals with |x| < bound."""
    lim = bound << PRECISION.bits
    return st.integers(-lim + 1, lim - 1).map(lambda m: PreciseReal(m, 0))


def circles():
    return st.integers(0, PRECISION.one - 1).map(lambda m: CirclePoint(m, 0))


def random_real(rng, bound=8):
    lim = bound << PRECISION.bits
    return PreciseReal(rng.randrange(-lim + 1, lim), 0)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
