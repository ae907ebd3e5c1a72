"""Built-in reference constants for the canonical parameter points, and
the machinery to recompute and match each one.

The classic capital game corresponds to rho = 1/3, the classic history
game to (kappa, lambda) = (1/9, 1/3).  Exact rows must match bit for
bit under the rational backend; derivative rows are recovered by
Richardson-extrapolated central differences in the bias and match to a
stated tolerance.  The bound-index rows exercise the sign-certificate
search of the spectral module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import analysis, games, markov, patterns, spectral

DERIVATIVE_TOLERANCE = 1e-6
_H = Fraction(1, 10000)

CLASSIC_RHO = Fraction(1, 3)
CLASSIC_KAPPA = Fraction(1, 9)
CLASSIC_LAMBDA = Fraction(1, 3)

BOUND_TABLE = (
    # (kappa, lambda, region, s0, s1)
    (Fraction(1, 9), Fraction(1, 3), 1, 1, 2),
    (Fraction(1, 3), Fraction(1, 9), 6, 1, 6),
    (Fraction(9), Fraction(3), 3, 1, 3),
    (Fraction(1, 9), Fraction(1, 8), 1, 1, 6),
    (Fraction(1, 9), Fraction(8, 9), 1, 2, 3),
    (Fraction(8), Fraction(1, 9), 6, 1, 27),
    (Fraction(4), Fraction(9, 2), 2, 1, 3),
    (Fraction(3), Fraction(3, 2), 4, 1, 1),
    (Fraction(3), Fraction(2, 3), 5, 1, 2),
)


def derivative_at_zero(f, h: Fraction = _H) -> Fraction:
    """Richardson-extrapolated central difference, exact in rationals."""
    wide = (f(h) - f(-h)) / (2 * h)
    narrow = (f(h / 2) - f(-h / 2)) / h
    return (4 * narrow - wide) / 3


@dataclass(frozen=True)
class ReferenceRow:
    label: str
    expected: object          # Fraction or int
    computed: object
    match: bool
    kind: str                 # "exact" or "derivative"


def _exact_row(label: str, computed, expected) -> ReferenceRow:
    return ReferenceRow(label=label, expected=expected, computed=computed,
                        match=computed == expected, kind="exact")


def _derivative_row(label: str, computed: Fraction, expected: Fraction) -> ReferenceRow:
    rel = abs(float((computed - expected) / expected))
    return ReferenceRow(label=label, expected=expected, computed=computed,
                        match=rel <= DERIVATIVE_TOLERANCE, kind="derivative")


def reference_rows() -> list:
    rows = []
    eps = Fraction(1, 100)
    a_eps = markov.chain_analysis(games.capital_game_a(eps))
    rows.append(_exact_row("capital mu_A(1/100)", a_eps.mu, -2 * eps))
    rows.append(_exact_row("capital sigma2_A(1/100)", a_eps.sigma2, 1 - 4 * eps * eps))

    b = markov.chain_analysis(games.capital_game_b(CLASSIC_RHO))
    rows.append(_exact_row("capital mu_B(0)", b.mu, Fraction(0)))
    rows.append(_exact_row("capital sigma2_B(0)", b.sigma2, Fraction(81, 169)))
    rows.append(
        _derivative_row(
            "capital mu_B'(0)",
            derivative_at_zero(
                lambda e: markov.mean_parameter(games.capital_game_b(CLASSIC_RHO, e))
            ),
            Fraction(-294, 169),
        )
    )
    cmix = markov.chain_analysis(
        games.mixture(games.capital_game_a(), games.capital_game_b(CLASSIC_RHO),
                      Fraction(1, 2))
    )
    rows.append(_exact_row("capital mu_C(0)", cmix.mu, Fraction(18, 709)))
    rows.append(
        _exact_row("capital sigma2_C(0)", cmix.sigma2,
                   Fraction(311313105, 356400829))
    )

    hb = markov.chain_analysis(games.history_game_b(CLASSIC_KAPPA, CLASSIC_LAMBDA))
    rows.append(_exact_row("history mu_B(0)", hb.mu, Fraction(0)))
    rows.append(_exact_row("history sigma2_B(0)", hb.sigma2, Fraction(235, 198)))
    rows.append(
        _derivative_row(
            "history mu_B'(0)",
            derivative_at_zero(
                lambda e: markov.mean_parameter(
                    games.history_game_b(CLASSIC_KAPPA, CLASSIC_LAMBDA, e)
                )
            ),
            Fraction(-20, 9),
        )
    )
    hmix = markov.chain_analysis(
        games.mixture(games.history_game_a(),
                      games.history_game_b(CLASSIC_KAPPA, CLASSIC_LAMBDA),
                      Fraction(1, 2))
    )
    rows.append(_exact_row("history mu_C(0)", hmix.mu, Fraction(5, 429)))
    rows.append(
        _exact_row("history sigma2_C(0)", hmix.sigma2,
                   Fraction(25324040, 26317863))
    )

    capital_patterns = {
        (1, 1): (Fraction(0), Fraction(81, 169)),
        (1, 2): (Fraction(2416, 35601), Fraction(14640669052339, 15040606062267)),
        (2, 1): (Fraction(32, 1609), Fraction(4628172105, 4165509529)),
        (2, 2): (Fraction(4, 163), Fraction(1923037543, 2195688729)),
    }
    ca, cb = games.capital_pair(CLASSIC_RHO)
    for (r, s), (mu_e, s2_e) in capital_patterns.items():
        rows.append(
            _exact_row(f"capital mu_[{r},{s}](0)",
                       patterns.pattern_mean_direct(ca, cb, r, s), mu_e)
        )
        rows.append(
            _exact_row(f"capital sigma2_[{r},{s}](0)",
                       patterns.pattern_variance_direct(ca, cb, r, s), s2_e)
        )

    history_patterns = {
        (1, 1): (Fraction(1, 44), Fraction(8945, 10648)),
        (1, 2): (Fraction(203, 16500), Fraction(1003207373, 998250000)),
        (2, 1): (Fraction(1, 60), Fraction(1039, 1200)),
        (2, 2): (Fraction(1, 100), Fraction(19617, 20000)),
    }
    da, db = games.history_pair(CLASSIC_KAPPA, CLASSIC_LAMBDA)
    for (r, s), (mu_e, s2_e) in history_patterns.items():
        rows.append(
            _exact_row(f"history mu_[{r},{s}](0)",
                       patterns.pattern_mean_direct(da, db, r, s), mu_e)
        )
        rows.append(
            _exact_row(f"history sigma2_[{r},{s}](0)",
                       patterns.pattern_variance_direct(da, db, r, s), s2_e)
        )

    for kappa, lam, region, s0_e, s1_e in BOUND_TABLE:
        spec = spectral.history_spectrum(kappa, lam)
        rows.append(_exact_row(f"history region ({kappa},{lam})", spec.region, region))
        rows.append(
            _exact_row(f"history s0 ({kappa},{lam})",
                       spectral.bound_search_s0(kappa, lam), s0_e)
        )
        rows.append(
            _exact_row(f"history s1 ({kappa},{lam})",
                       spectral.bound_search_s1(kappa, lam), s1_e)
        )

    limit_samples = (
        ("capital limit r=1", analysis.pattern_limit(ca, cb, 1),
         analysis.capital_limit_closed(CLASSIC_RHO, 1)),
        ("history limit r=2", analysis.pattern_limit(da, db, 2),
         analysis.history_limit_closed(CLASSIC_KAPPA, CLASSIC_LAMBDA)),
    )
    for label, computed, expected in limit_samples:
        rows.append(_exact_row(label, computed, expected))
    return rows
