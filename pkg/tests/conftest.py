import random
from fractions import Fraction

import pytest

from parrondo import games


@pytest.fixture(scope="session")
def capital_classic():
    """Game pair (A, B) of the classic capital point rho = 1/3."""
    return games.capital_pair(Fraction(1, 3))


@pytest.fixture(scope="session")
def history_classic():
    """Game pair (A, B) of the classic history point (1/9, 1/3)."""
    return games.history_pair(Fraction(1, 9), Fraction(1, 3))


def random_rational_stochastic(rng: random.Random, n: int, top: int = 9):
    """Row-stochastic matrix with strictly positive rational entries, so
    the chain is irreducible and aperiodic by construction."""
    rows = []
    for _ in range(n):
        raw = [Fraction(rng.randint(1, top)) for _ in range(n)]
        total = sum(raw)
        rows.append(tuple(x / total for x in raw))
    return tuple(rows)


def random_rho(rng: random.Random) -> Fraction:
    while True:
        rho = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if rho != 1:
            return rho


def random_kappa_lambda(rng: random.Random, avoid_unit_product: bool = True):
    """A valid (kappa, lambda) pair off the fair lines."""
    while True:
        kappa = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if lam >= 1 + kappa or kappa == lam or lam == 1:
            continue
        if avoid_unit_product and kappa * lam == 1:
            continue
        return kappa, lam
