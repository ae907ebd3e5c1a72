"""Finite-chain analysis: stationary law, fundamental matrix, and the
asymptotic mean/variance per game of the running payoff.

For an irreducible chain P with payoff function w, the cumulative payoff
S_n = sum of w(X_{k-1}, X_k) obeys a strong law with rate mu and, when
sigma2 > 0, a central limit theorem:

    mu     = pi P' 1
    sigma2 = pi P'' 1 - (pi P' 1)^2 + 2 pi P' (Z - PI) P' 1

where P' has entries P_ij * w(i,j), P'' has entries P_ij * w(i,j)^2, PI
stacks the stationary row vector pi, and Z = (I - (P - PI))^{-1} is the
fundamental matrix.  All of this is exact under the rational backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .linalg import Matrix, SingularMatrixError, Vector
from .scalar import FAIR_TOLERANCE, is_exact

_ROW_SUM_TOLERANCE = 1e-12

WINNING = "winning"
LOSING = "losing"
FAIR = "fair"


class ChainError(ValueError):
    """A matrix fails the structural requirements of an operation."""


@dataclass(frozen=True)
class GameChain:
    """A row-stochastic transition matrix paired with a payoff matrix."""

    P: Matrix
    W: Matrix

    def __post_init__(self):
        n = len(self.P)
        if any(len(row) != n for row in self.P):
            raise ChainError("transition matrix is not square")
        if len(self.W) != n or any(len(row) != n for row in self.W):
            raise ChainError("payoff matrix size does not match")

    @property
    def size(self) -> int:
        return len(self.P)

    @property
    def exact(self) -> bool:
        return linalg.matrix_is_exact(self.P)


@dataclass(frozen=True)
class ChainDiagnosis:
    irreducible: bool
    aperiodic: bool
    period: int | None  # None when the chain is reducible


@dataclass(frozen=True)
class ChainAnalysis:
    pi: Vector
    Z: Matrix
    mu: object
    sigma2: object


@dataclass(frozen=True)
class LimitParams:
    """Asymptotic mean/variance per game plus the sign classification."""

    mu: object
    sigma2: object
    classification: str


def validate_stochastic(P: Matrix) -> None:
    exact = linalg.matrix_is_exact(P)
    for i, row in enumerate(P):
        if any(x < 0 for x in row):
            raise ChainError(f"negative entry in row {i}")
        s = sum(row)
        if exact:
            if s != 1:
                raise ChainError(f"row {i} sums to {s}, not 1")
        elif abs(s - 1.0) > _ROW_SUM_TOLERANCE:
            raise ChainError(f"row {i} sums to {s!r}, not 1")


def _support(P: Matrix):
    return [[j for j, x in enumerate(row) if x > 0] for row in P]


def _reachable(adj, start: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _strongly_connected(adj) -> bool:
    n = len(adj)
    if len(_reachable(adj, 0)) != n:
        return False
    radj = [[] for _ in range(n)]
    for u, vs in enumerate(adj):
        for v in vs:
            radj[v].append(u)
    return len(_reachable(radj, 0)) == n


def _chain_period(adj) -> int:
    # gcd of (level[u] + 1 - level[v]) over all edges, with BFS levels
    # from state 0; valid for strongly connected digraphs.
    n = len(adj)
    level = [None] * n
    level[0] = 0
    queue = [0]
    g = 0
    while queue:
        nxt = []
        for u in queue:
            for v in adj[u]:
                if level[v] is None:
                    level[v] = level[u] + 1
                    nxt.append(v)
                else:
                    g = gcd(g, level[u] + 1 - level[v])
        queue = nxt
    return abs(g) if g else 0


def validate_chain(P: Matrix) -> ChainDiagnosis:
    """Irreducibility via strong connectivity of the positive-entry
    digraph; period via the gcd of cycle lengths through state 0."""
    validate_stochastic(P)
    adj = _support(P)
    if not _strongly_connected(adj):
        return ChainDiagnosis(irreducible=False, aperiodic=False, period=None)
    period = _chain_period(adj)
    return ChainDiagnosis(irreducible=True, aperiodic=period == 1, period=period)


def stationary_distribution(P: Matrix) -> Vector:
    """The unique pi with pi P = pi and sum(pi) = 1.

    Solved by Gaussian elimination on (I - P^T) with the last row
    replaced by the normalization; raises ChainError for reducible P.
    """
    diag = validate_chain(P)
    if not diag.irreducible:
        raise ChainError("chain is reducible: no unique stationary distribution")
    n = len(P)
    exact = linalg.matrix_is_exact(P)
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    eye = linalg.identity(n, exact=exact)
    rows = [
        [eye[i][j] - P[j][i] for j in range(n)] for i in range(n - 1)
    ]
    rows.append([one] * n)
    b = tuple([zero] * (n - 1) + [one])
    try:
        pi = linalg.solve(linalg.mat_from_rows(rows), b)
    except SingularMatrixError as exc:
        raise ChainError("stationary system is singular") from exc
    return pi


def stationary_matrix(pi: Vector) -> Matrix:
    """The square matrix PI whose every row equals pi."""
    return tuple(tuple(pi) for _ in pi)


def fundamental_matrix(P: Matrix, pi: Vector) -> Matrix:
    """Z = (I - (P - PI))^{-1}.

    Defined for irreducible chains, periodic ones included: no eigenvalue
    of P other than 1 itself equals 1, so the system is invertible.
    """
    n = len(P)
    exact = linalg.matrix_is_exact(P)
    eye = linalg.identity(n, exact=exact)
    m = linalg.mat_add(linalg.mat_sub(eye, P), stationary_matrix(pi))
    try:
        return linalg.inverse(m)
    except SingularMatrixError as exc:
        raise ChainError("fundamental system is singular") from exc


def payoff_weighted(P: Matrix, W: Matrix) -> Matrix:
    """Entrywise product P_ij * w(i,j)."""
    return tuple(
        tuple(p * w for p, w in zip(prow, wrow)) for prow, wrow in zip(P, W)
    )


def payoff_weighted_sq(P: Matrix, W: Matrix) -> Matrix:
    return tuple(
        tuple(p * w * w for p, w in zip(prow, wrow)) for prow, wrow in zip(P, W)
    )


def mean_parameter(chain: GameChain, pi: Vector | None = None):
    """mu = pi P' 1."""
    if pi is None:
        pi = stationary_distribution(chain.P)
    zeta = linalg.row_sums(payoff_weighted(chain.P, chain.W))
    return linalg.dot(pi, zeta)


def variance_parameter(chain: GameChain, pi: Vector | None = None,
                       Z: Matrix | None = None):
    """sigma2 = pi P'' 1 - mu^2 + 2 pi P' (Z - PI) P' 1."""
    if pi is None:
        pi = stationary_distribution(chain.P)
    if Z is None:
        Z = fundamental_matrix(chain.P, pi)
    Pp = payoff_weighted(chain.P, chain.W)
    zeta = linalg.row_sums(Pp)
    mu = linalg.dot(pi, zeta)
    second = linalg.dot(pi, linalg.row_sums(payoff_weighted_sq(chain.P, chain.W)))
    centered = linalg.mat_sub(Z, stationary_matrix(pi))
    cross = linalg.dot(linalg.vec_mat(pi, Pp), linalg.mat_vec(centered, zeta))
    return second - mu * mu + 2 * cross


def chain_analysis(chain: GameChain) -> ChainAnalysis:
    pi = stationary_distribution(chain.P)
    Z = fundamental_matrix(chain.P, pi)
    mu = mean_parameter(chain, pi)
    sigma2 = variance_parameter(chain, pi, Z)
    return ChainAnalysis(pi=pi, Z=Z, mu=mu, sigma2=sigma2)


def classify(mu) -> str:
    """Sign classification; the float backend gets a dead zone of
    FAIR_TOLERANCE around zero, the exact backend decides exactly."""
    if is_exact(mu):
        if mu > 0:
            return WINNING
        if mu < 0:
            return LOSING
        return FAIR
    if abs(mu) <= FAIR_TOLERANCE:
        return FAIR
    return WINNING if mu > 0 else LOSING


def limit_params(chain: GameChain) -> LimitParams:
    a = chain_analysis(chain)
    return LimitParams(mu=a.mu, sigma2=a.sigma2, classification=classify(a.mu))
