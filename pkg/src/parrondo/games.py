"""The built-in game families and their mixtures.

Capital-dependent games live on capital mod 3 (three states); the coin
played depends on whether capital is divisible by 3.  History-dependent
games live on the win/loss record of the two previous plays, states
{00, 01, 10, 11} read as {0, 1, 2, 3} with the recent result last.  In
both families game A is the plain fair coin, game B is a one- or two-parameter
family constrained to be fair at bias eps = 0, and eps > 0 shifts every
win probability down, making each game strictly losing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .markov import GameChain
from .scalar import is_exact

CAPITAL = "capital"
HISTORY = "history"

# Win/loss payoffs on capital mod 3: a win moves capital up by 1, a loss
# down by 1.
CAPITAL_PAYOFF = (
    (0, 1, -1),
    (-1, 0, 1),
    (1, -1, 0),
)

# Win/loss payoffs on history states: the next state's low bit records
# the result just obtained.
HISTORY_PAYOFF = (
    (-1, 1, 0, 0),
    (0, 0, -1, 1),
    (-1, 1, 0, 0),
    (0, 0, -1, 1),
)


class DomainError(ValueError):
    """Parameters outside the valid region of a game family."""


def _check_prob(name: str, p) -> None:
    if not (0 < p < 1):
        raise DomainError(f"probability {name}={p} is outside (0, 1)")


def _half(prefer_exact: bool):
    return Fraction(1, 2) if prefer_exact else 0.5


def capital_chain(p0, p1, p2) -> GameChain:
    """Three-state chain: toss the p0-coin on the multiple-of-3 state,
    otherwise the p1/p2 coin; capital moves up on a win, down on a loss."""
    for name, p in (("p0", p0), ("p1", p1), ("p2", p2)):
        _check_prob(name, p)
    P = (
        (0 * p0, p0, 1 - p0),
        (1 - p1, 0 * p1, p1),
        (p2, 1 - p2, 0 * p2),
    )
    return GameChain(P=P, W=CAPITAL_PAYOFF)


def history_chain(p0, p1, p2, p3) -> GameChain:
    """Four-state chain on the two-play win/loss history; the coin played
    depends on the current history, the payoff on the new result."""
    for name, p in (("p0", p0), ("p1", p1), ("p2", p2), ("p3", p3)):
        _check_prob(name, p)
    z0, z1, z2, z3 = 0 * p0, 0 * p1, 0 * p2, 0 * p3
    P = (
        (1 - p0, p0, z0, z0),
        (z1, z1, 1 - p1, p1),
        (1 - p2, p2, z2, z2),
        (z3, z3, 1 - p3, p3),
    )
    return GameChain(P=P, W=HISTORY_PAYOFF)


def capital_game_a(eps=Fraction(0)) -> GameChain:
    """The single fair coin, biased down by eps, on the capital chain."""
    p = _half(is_exact(eps)) - eps
    return capital_chain(p, p, p)


def capital_game_b(rho, eps=Fraction(0)) -> GameChain:
    """The one-parameter capital family: p0 = rho^2/(1+rho^2) - eps and
    p1 = p2 = 1/(1+rho) - eps.  At eps = 0 this is the general solution
    of the fairness constraint p1 = p2, mu = 0."""
    if not rho > 0:
        raise DomainError(f"rho={rho} must be positive")
    p0 = rho * rho / (1 + rho * rho) - eps
    p1 = 1 / (1 + rho) if is_exact(rho) and is_exact(eps) else 1.0 / (1 + rho)
    p1 = p1 - eps
    return capital_chain(p0, p1, p1)


def history_game_a(eps=Fraction(0)) -> GameChain:
    p = _half(is_exact(eps)) - eps
    return history_chain(p, p, p, p)


def history_game_b(kappa, lam, eps=Fraction(0)) -> GameChain:
    """The two-parameter history family: p0 = 1/(1+kappa) - eps,
    p1 = p2 = lambda/(1+lambda) - eps, p3 = 1 - lambda/(1+kappa) - eps.
    Requires kappa > 0, lambda > 0 and lambda < 1 + kappa; at eps = 0 it
    solves the fairness constraint p3 = 1 - p0 p1/(1 - p1)."""
    if not kappa > 0:
        raise DomainError(f"kappa={kappa} must be positive")
    if not lam > 0:
        raise DomainError(f"lambda={lam} must be positive")
    if not lam < 1 + kappa:
        raise DomainError(f"lambda={lam} must be below 1 + kappa")
    p0 = 1 / (1 + kappa) - eps if is_exact(kappa) and is_exact(eps) else 1.0 / (1 + kappa) - eps
    p1 = lam / (1 + lam) - eps
    p3 = 1 - lam / (1 + kappa) - eps
    return history_chain(p0, p1, p1, p3)


def mixture(a: GameChain, b: GameChain, gamma) -> GameChain:
    """Entrywise convex combination gamma*A + (1-gamma)*B of the
    transition matrices; the payoff matrix is shared and unchanged."""
    if a.size != b.size:
        raise DomainError("mixture components have different sizes")
    if a.W != b.W:
        raise DomainError("mixture components have different payoff matrices")
    if not (0 <= gamma <= 1):
        raise DomainError(f"gamma={gamma} is outside [0, 1]")
    P = tuple(
        tuple(gamma * x + (1 - gamma) * y for x, y in zip(ra, rb))
        for ra, rb in zip(a.P, b.P)
    )
    return GameChain(P=P, W=a.W)


def capital_pair(rho, eps=Fraction(0)) -> tuple[GameChain, GameChain]:
    return capital_game_a(eps), capital_game_b(rho, eps)


def history_pair(kappa, lam, eps=Fraction(0)) -> tuple[GameChain, GameChain]:
    return history_game_a(eps), history_game_b(kappa, lam, eps)


def capital_mixing_weight(r: int) -> Fraction:
    """Off-diagonal entry a_r = (1 - (-1/2)^r)/3 of the r-step power of
    the fair capital coin matrix; its diagonal entry is 1 - 2 a_r."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    return (1 - Fraction(-1, 2) ** r) / 3


@dataclass(frozen=True)
class ParamPoint:
    """A fully specified parameter point for one family.

    rho parametrizes the capital family; kappa/lam the history family.
    gamma, when present, selects the random mixture gamma*A + (1-gamma)*B.
    eps is the common bias.  Constructors validate that every derived
    probability stays inside (0, 1).
    """

    family: str
    rho: object = None
    kappa: object = None
    lam: object = None
    gamma: object = None
    eps: object = Fraction(0)

    def __post_init__(self):
        if self.family not in (CAPITAL, HISTORY):
            raise DomainError(f"unknown family {self.family!r}")
        if self.family == CAPITAL and self.rho is None:
            raise DomainError("capital family requires rho")
        if self.family == HISTORY and (self.kappa is None or self.lam is None):
            raise DomainError("history family requires kappa and lambda")
        if self.gamma is not None and not (0 <= self.gamma <= 1):
            raise DomainError(f"gamma={self.gamma} is outside [0, 1]")
        self.game_b()  # validates the parameter domain eagerly

    def game_a(self) -> GameChain:
        if self.family == CAPITAL:
            return capital_game_a(self.eps)
        return history_game_a(self.eps)

    def game_b(self) -> GameChain:
        if self.family == CAPITAL:
            return capital_game_b(self.rho, self.eps)
        return history_game_b(self.kappa, self.lam, self.eps)

    def pair(self) -> tuple[GameChain, GameChain]:
        return self.game_a(), self.game_b()

    def mixture_chain(self) -> GameChain:
        if self.gamma is None:
            raise DomainError("mixture requires gamma")
        a, b = self.pair()
        return mixture(a, b, self.gamma)

    def eps_ceiling(self):
        """Largest eps keeping every probability of both games positive
        (the binding constraints for eps > 0)."""
        if self.family == CAPITAL:
            rho = self.rho
            return min(
                Fraction(1, 2) if is_exact(rho) else 0.5,
                rho * rho / (1 + rho * rho),
                1 / (1 + rho) if is_exact(rho) else 1.0 / (1 + rho),
            )
        kappa, lam = self.kappa, self.lam
        one = 1 if is_exact(kappa) and is_exact(lam) else 1.0
        return min(
            Fraction(1, 2) if is_exact(kappa) and is_exact(lam) else 0.5,
            one / (1 + kappa),
            lam / (1 + lam),
            one - lam / (1 + kappa),
        )
