import random
from fractions import Fraction

import pytest

from vacalc.lie_conformal import (
    neveu_schwarz,
    sl2_current,
    uncharged_superfermions,
    virasoro,
)
from vacalc.scalar import Scalar


@pytest.fixture(scope="session")
def vir():
    return virasoro()


@pytest.fixture(scope="session")
def ns():
    return neveu_schwarz()


@pytest.fixture(scope="session")
def fermion2():
    """Two odd fermions with the identity pairing (sdim = -2)."""
    return uncharged_superfermions(0, 2)


@pytest.fixture(scope="session")
def fermion22():
    """Two even (symplectic pair) and two odd fermions (sdim = 0)."""
    return uncharged_superfermions(2, 2)


@pytest.fixture(scope="session")
def sl2():
    return sl2_current()


def random_rational(rng, span=6):
    num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)


def random_scalar(rng, params=("c",), max_terms=2):
    out = Scalar.zero()
    for _ in range(rng.randint(1, max_terms)):
        term = Scalar.from_rational(random_rational(rng))
        for name in params:
            if rng.random() < 0.4:
                term = term * Scalar.param(name) ** rng.randint(1, 2)
        out = out + term
    return out


def rng_for(name: str) -> random.Random:
    return random.Random(f"vacalc-{name}")
