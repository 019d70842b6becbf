import random
from fractions import Fraction

import pytest

from qlmoments.exactnum import KNum
from qlmoments.ffpoly import build_sieve


@pytest.fixture(scope="session")
def sieve5():
    return build_sieve(5, 6)


@pytest.fixture(scope="session")
def sieve13():
    return build_sieve(13, 3)


@pytest.fixture
def rng():
    return random.Random(20260808)


def random_k(rng, q=5, span=9):
    """Random small-rational K element, bounded away from 0, 1, 1/q."""
    return KNum.rational(
        Fraction(rng.randint(2, span), rng.choice([11, 13, 17, 19])), q)


def random_k_point(rng, n, q=5):
    return tuple(random_k(rng, q) for _ in range(n))
