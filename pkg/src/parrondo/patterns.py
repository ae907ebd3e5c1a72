"""Limit parameters for periodic play: r games of A then s games of B,
repeated forever, or any finite word over {A, B}.

Two independent routes are provided.  The direct route evaluates the
per-cycle mean and variance of the time-inhomogeneous sequence with
geometric sums of matrix powers (I + P_B + ... + P_B^(v-1)); it stays in
the rational field and needs no eigendecomposition, but it assumes the
A-game's weighted matrix P_A' has zero row sums and that payoffs are
+-1 on the support of both games, which holds for the built-in families
at eps = 0.  The product route lifts the schedule onto phase x state,
where the play is a single time-homogeneous (periodic) chain, and reuses
the plain chain analysis; it applies to arbitrary words and any eps.
The two routes agree exactly under the rational backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, markov
from .markov import ChainError, GameChain, LimitParams

_ZERO_TOLERANCE = 1e-12


class PatternError(ValueError):
    """A pattern request violates the assumptions of the chosen method."""


def normalize_word(word: str) -> str:
    w = word.strip().upper()
    if not w or any(ch not in "AB" for ch in w):
        raise PatternError(f"word must be a nonempty string over A/B: {word!r}")
    return w


def word_for_pattern(r: int, s: int) -> str:
    if r < 1 or s < 1:
        raise PatternError("pattern requires r >= 1 and s >= 1")
    return "A" * r + "B" * s


def word_rs(word: str) -> tuple[int, int] | None:
    """(r, s) when the word has the canonical A^r B^s shape, else None."""
    w = normalize_word(word)
    r = len(w) - len(w.lstrip("A"))
    if 0 < r < len(w) and set(w[r:]) == {"B"}:
        return r, len(w) - r
    return None


def _exact_zero(x) -> bool:
    if isinstance(x, float):
        return abs(x) <= _ZERO_TOLERANCE
    return x == 0


def _require_direct_assumptions(a: GameChain, b: GameChain) -> None:
    if a.size != b.size or a.W != b.W:
        raise PatternError("component games must share size and payoffs")
    for v in linalg.row_sums(markov.payoff_weighted(a.P, a.W)):
        if not _exact_zero(v):
            raise PatternError(
                "direct method requires zero row sums of the weighted A matrix "
                "(built-in families satisfy this only at eps = 0)"
            )
    for chain in (a, b):
        for prow, wrow in zip(chain.P, chain.W):
            for p, w in zip(prow, wrow):
                if p > 0 and not _exact_zero(abs(w) - 1):
                    raise PatternError("direct method requires +-1 payoffs on the support")


def _composite(a: GameChain, b: GameChain, r: int, s: int):
    """Stationary data of P = P_A^r P_B^s plus the shifted distribution
    pi_{s,r} = pi P_A^r, which is stationary for P_B^s P_A^r."""
    PA_r = linalg.mat_pow(a.P, r)
    PB_s = linalg.mat_pow(b.P, s)
    P = linalg.mat_mul(PA_r, PB_s)
    diag = markov.validate_chain(P)
    if not diag.irreducible:
        raise ChainError("composite chain P_A^r P_B^s is reducible")
    pi = markov.stationary_distribution(P)
    pi_sr = linalg.vec_mat(pi, PA_r)
    return P, pi, pi_sr, PA_r, PB_s


def pattern_mean_direct(a: GameChain, b: GameChain, r: int, s: int):
    """mu = (r+s)^-1 pi_{s,r} (I + P_B + ... + P_B^(s-1)) zeta, with zeta
    the row-sum vector of the weighted B matrix."""
    word_for_pattern(r, s)
    _require_direct_assumptions(a, b)
    _, _, pi_sr, _, _ = _composite(a, b, r, s)
    zeta = linalg.row_sums(markov.payoff_weighted(b.P, b.W))
    G_s = linalg.geometric_sum(b.P, s)
    return linalg.dot(linalg.vec_mat(pi_sr, G_s), zeta) / (r + s)


def pattern_variance_direct(a: GameChain, b: GameChain, r: int, s: int):
    """Per-game variance of the cyclic schedule: the within-cycle variance
    plus twice the summed between-cycle covariances, divided by r + s.
    Between-cycle terms go through the fundamental matrix of the composite
    P = P_A^r P_B^s; all eigenvalue-diagonal factors are replaced by the
    equal geometric sums of powers of P_B."""
    word_for_pattern(r, s)
    _require_direct_assumptions(a, b)
    P, pi, pi_sr, PA_r, _ = _composite(a, b, r, s)
    exact = linalg.matrix_is_exact(P)

    PA, PB = a.P, b.P
    PAp = markov.payoff_weighted(PA, a.W)
    PBp = markov.payoff_weighted(PB, b.W)
    zeta = linalg.row_sums(PBp)

    pa_pows = [linalg.identity(a.size, exact=exact)]
    for _ in range(r):
        pa_pows.append(linalg.mat_mul(pa_pows[-1], PA))
    pb_pows = [linalg.identity(b.size, exact=exact)]
    for _ in range(s):
        pb_pows.append(linalg.mat_mul(pb_pows[-1], PB))

    # geometric sums G_v = I + P_B + ... + P_B^(v-1), v = 0..s
    zero = Fraction(0) if exact else 0.0
    g = tuple(tuple(zero for _ in range(b.size)) for _ in range(b.size))
    geo = [g]
    for v in range(s):
        geo.append(linalg.mat_add(geo[-1], pb_pows[v]))
    G_s = geo[s]

    b_marginals = [linalg.vec_mat(pi_sr, pb_pows[v]) for v in range(s)]
    b_means = [linalg.dot(m, zeta) for m in b_marginals]

    var = Fraction(r + s) if exact else float(r + s)
    var -= sum(m * m for m in b_means)
    Gs_zeta = linalg.mat_vec(G_s, zeta)
    for u in range(r):
        front = linalg.vec_mat(linalg.vec_mat(pi, pa_pows[u]), PAp)
        var += 2 * linalg.dot(front, linalg.mat_vec(pa_pows[r - u - 1], Gs_zeta))
    for v in range(1, s):
        for u in range(v):
            front = linalg.vec_mat(b_marginals[u], PBp)
            var += 2 * linalg.dot(front, linalg.mat_vec(pb_pows[v - u - 1], zeta))
    for v in range(1, s):
        var -= 2 * linalg.dot(linalg.vec_mat(pi_sr, geo[v]), zeta) * b_means[v]

    Z = markov.fundamental_matrix(P, pi)
    centered = linalg.mat_sub(Z, markov.stationary_matrix(pi))
    tail = linalg.mat_vec(centered, linalg.mat_vec(PA_r, Gs_zeta))
    cov = zero
    tail_a = linalg.mat_vec(pb_pows[s], tail)
    for u in range(r):
        front = linalg.vec_mat(linalg.vec_mat(pi, pa_pows[u]), PAp)
        cov += linalg.dot(front, linalg.mat_vec(pa_pows[r - u - 1], tail_a))
    for u in range(s):
        front = linalg.vec_mat(b_marginals[u], PBp)
        cov += linalg.dot(front, linalg.mat_vec(pb_pows[s - u - 1], tail))

    return (var + 2 * cov) / (r + s)


def pattern_limits_direct(a: GameChain, b: GameChain, r: int, s: int) -> LimitParams:
    mu = pattern_mean_direct(a, b, r, s)
    sigma2 = pattern_variance_direct(a, b, r, s)
    return LimitParams(mu=mu, sigma2=sigma2, classification=markov.classify(mu))


@dataclass(frozen=True)
class ProductChain:
    """The periodic schedule lifted to phase x state.

    Block row i of the transition matrix feeds block (i+1) mod L through
    the i-th scheduled game; the payoff of a move depends only on the
    underlying state transition.  The lift is irreducible with period L
    (or a divisor) whenever the cyclic composites are irreducible.
    """

    chain: GameChain
    word: str
    base_size: int

    @property
    def length(self) -> int:
        return len(self.word)


def build_product_chain(a: GameChain, b: GameChain, word: str) -> ProductChain:
    w = normalize_word(word)
    if a.size != b.size or a.W != b.W:
        raise PatternError("component games must share size and payoffs")
    t = a.size
    L = len(w)
    exact = a.exact and b.exact
    zero = Fraction(0) if exact else 0.0
    n = L * t
    P = [[zero] * n for _ in range(n)]
    for i, letter in enumerate(w):
        block = a.P if letter == "A" else b.P
        ii = (i + 1) % L
        for j in range(t):
            for k in range(t):
                P[i * t + j][ii * t + k] = block[j][k]
    W = tuple(tuple(a.W[j % t][k % t] for k in range(n)) for j in range(n))
    return ProductChain(
        chain=GameChain(P=linalg.mat_from_rows(P), W=W), word=w, base_size=t
    )


def pattern_limits_product(pc: ProductChain) -> LimitParams:
    diag = markov.validate_chain(pc.chain.P)
    if not diag.irreducible:
        raise ChainError("product chain is reducible")
    return markov.limit_params(pc.chain)


def general_word_limits(a: GameChain, b: GameChain, word: str) -> LimitParams:
    """Limit parameters of an arbitrary periodic word via the product
    chain; for A^r B^s words this equals the direct route exactly."""
    return pattern_limits_product(build_product_chain(a, b, word))
