import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "naba", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("naba")


@st.composite
def rationals(draw, num=20, den=9, nonzero=False):
    p = draw(st.integers(-num, num))
    q = draw(st.integers(1, den))
    x = mpq(p, q)
    if nonzero and x == 0:
        x = mpq(1, q)
    return x


def distinct_rationals(n, c=1, avoid=(), den=7):
    """n rationals k/den, pairwise distinct, no two differing by +-c, none equal to ``avoid``."""
    c, avoid = mpq(c), [mpq(a) for a in avoid]

    def ok(xs):
        pool = list(xs) + avoid
        return all(abs(x - y) != c for k, x in enumerate(xs) for y in pool[k + 1 :]) and not (
            set(xs) & set(avoid)
        )

    ints = st.lists(st.integers(-60, 60), min_size=n, max_size=n, unique=True)
    return ints.map(lambda ks: tuple(mpq(k, den) for k in ks)).filter(ok)


def rng_rationals(rng, n, c=1, avoid=()):
    from naba.suites import draw_rationals

    return tuple(draw_rationals(rng, n, c, avoid))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def all_zero(arr):
    return not np.any(np.asarray(arr) != 0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
