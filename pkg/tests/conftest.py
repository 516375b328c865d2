from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from burau_pong.burau import builtin
from burau_pong.exactfield import GF, QQ, RatFunc
from burau_pong.matlin import Mat
from burau_pong.pingpong import random_iwahori, random_matrix

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FIELDS = {0: QQ, 2: GF(2), 3: GF(3)}


@pytest.fixture(scope="session")
def data():
    return builtin(0)


@pytest.fixture(scope="session", params=[0, 2, 3], ids=["Q", "F2", "F3"])
def any_data(request):
    return builtin(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def sample_matrices(count: int, field=QQ, seed: int = 7, iwahori: bool = False):
    make = random_iwahori if iwahori else random_matrix
    return [make(np.random.default_rng([seed, i]), field) for i in range(count)]


# hypothesis strategies -------------------------------------------------------

small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def laurent_polys(draw, field=QQ, max_terms: int = 4, span: int = 4):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    coeffs = {}
    for _ in range(n):
        e = draw(st.integers(min_value=-span, max_value=span))
        coeffs[e] = coeffs.get(e, 0) + draw(st.integers(min_value=-5, max_value=5))
    return RatFunc.laurent(coeffs, field)


@st.composite
def ratfuncs(draw, field=QQ):
    num = draw(laurent_polys(field))
    den = draw(laurent_polys(field).filter(lambda x: not x.is_zero()))
    return num / den


@st.composite
def nonzero_ratfuncs(draw, field=QQ):
    return draw(ratfuncs(field).filter(lambda x: not x.is_zero()))


@st.composite
def pi_diagonals(draw):
    return Mat.pi_diag([draw(small_ints) for _ in range(3)])


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
