from fractions import Fraction

import pytest

from cutproject.cantor import build_cantor, plan_parameters
from cutproject.circle import make_rotation
from cutproject.windows import window_random, window_V, window_W


@pytest.fixture(scope="session")
def omega():
    return make_rotation(2, -1, 1, 1)  # sqrt(2) - 1


@pytest.fixture(scope="session")
def golden():
    return make_rotation(5, -1, 1, 2)  # (sqrt(5) - 1) / 2 reflected to 1 - that


@pytest.fixture(scope="session")
def cantor3(omega):
    plan, rd = plan_parameters(Fraction(1, 10), 3, omega)
    return build_cantor(plan, rd)


@pytest.fixture(scope="session")
def cantor2(omega):
    plan, rd = plan_parameters(Fraction(1, 10), 2, omega)
    return build_cantor(plan, rd)


@pytest.fixture(scope="session")
def win_W(cantor3):
    return window_W(cantor3)


@pytest.fixture(scope="session")
def win_V(cantor3):
    return window_V(cantor3)


@pytest.fixture(scope="session")
def win_random(cantor3):
    return window_random(cantor3, "", 0)
