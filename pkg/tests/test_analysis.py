import csv
import io
import json
import math
from fractions import Fraction

import pytest

from parrondo import analysis, games, markov, patterns
from parrondo.games import DomainError, ParamPoint


def test_capital_mixture_signs():
    assert analysis.mixture_sign_capital(Fraction(1, 3), Fraction(1, 2)).mu == \
        Fraction(18, 709)
    assert analysis.mixture_sign_capital(Fraction(1), Fraction(1, 2)).classification == \
        "fair"
    # the rho -> 1/rho symmetry sends the winning value to its negative
    assert analysis.mixture_sign_capital(Fraction(3), Fraction(1, 2)).mu == \
        Fraction(-18, 709)
    for rho in (Fraction(1, 5), Fraction(2, 3)):
        for gamma in (Fraction(1, 4), Fraction(3, 4)):
            assert analysis.mixture_sign_capital(rho, gamma).classification == "winning"
    for rho in (Fraction(3, 2), Fraction(5)):
        assert analysis.mixture_sign_capital(rho, Fraction(1, 2)).classification == \
            "losing"
    with pytest.raises(DomainError):
        analysis.mixture_sign_capital(Fraction(1, 3), Fraction(1))


def test_history_mixture_signs():
    assert analysis.mixture_sign_history(
        Fraction(1, 9), Fraction(1, 3), Fraction(1, 2)
    ).mu == Fraction(5, 429)
    assert analysis.mixture_sign_history(
        Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)
    ).classification == "fair"
    assert analysis.mixture_sign_history(
        Fraction(3), Fraction(1), Fraction(1, 2)
    ).classification == "fair"
    # winning iff kappa < lambda < 1 or kappa > lambda > 1
    assert analysis.mixture_sign_history(
        Fraction(3), Fraction(2), Fraction(1, 4)
    ).classification == "winning"
    assert analysis.mixture_sign_history(
        Fraction(1, 3), Fraction(1, 9), Fraction(1, 2)
    ).classification == "losing"
    assert analysis.mixture_sign_history(
        Fraction(1, 2), Fraction(5, 4), Fraction(1, 2)
    ).classification == "losing"


def test_fairness_epsilon_brackets_the_root():
    point = ParamPoint(family="capital", rho=Fraction(1, 3), gamma=Fraction(1, 2))
    found = analysis.fairness_epsilon(point)
    assert not found.positive_everywhere
    assert found.upper - found.lower <= Fraction(1, 10**12)
    assert analysis._mu_at_eps(point, "mixture", found.lower) > 0
    assert analysis._mu_at_eps(point, "mixture", found.upper) <= 0
    assert 0 < found.eps0 < Fraction(1, 10)


def test_fairness_epsilon_requires_winning_start():
    with pytest.raises(DomainError):
        analysis.fairness_epsilon(
            ParamPoint(family="capital", rho=Fraction(3), gamma=Fraction(1, 2))
        )


def test_fairness_epsilon_for_pattern_target():
    point = ParamPoint(family="history", kappa=Fraction(1, 9), lam=Fraction(1, 3))
    found = analysis.fairness_epsilon(point, target=(2, 2))
    assert found.eps0 > 0
    assert analysis._mu_at_eps(point, (2, 2), found.lower) > 0
    assert analysis._mu_at_eps(point, (2, 2), found.upper) <= 0


def test_pattern_limit_closed_forms(capital_classic, history_classic):
    a, b = capital_classic
    assert analysis.pattern_limit(a, b, 1) == Fraction(24, 169)
    assert analysis.pattern_limit(a, b, 1) == \
        analysis.capital_limit_closed(Fraction(1, 3), 1)
    ha, hb = history_classic
    for r in (1, 2, 5):
        assert analysis.pattern_limit(ha, hb, r) == Fraction(5, 99)


def test_pattern_limit_is_approached_by_long_patterns(capital_classic, history_classic):
    # the gap oscillates with decaying envelope: compare block maxima
    a, b = capital_classic
    limit = analysis.pattern_limit(a, b, 1)
    gaps = [
        abs(float((1 + s) * patterns.pattern_mean_direct(a, b, 1, s) - limit))
        for s in range(1, 41)
    ]
    blocks = [max(gaps[i * 10:(i + 1) * 10]) for i in range(4)]
    assert all(later < earlier for earlier, later in zip(blocks, blocks[1:]))
    assert gaps[-1] < 1e-3

    ha, hb = history_classic
    limit_h = analysis.pattern_limit(ha, hb, 2)
    gaps_h = [
        abs(float((2 + s) * patterns.pattern_mean_direct(ha, hb, 2, s) - limit_h))
        for s in range(1, 41)
    ]
    blocks_h = [max(gaps_h[i * 10:(i + 1) * 10]) for i in range(4)]
    assert all(later < earlier for earlier, later in zip(blocks_h, blocks_h[1:]))
    assert gaps_h[-1] < 1e-3


def test_capital_curvature_against_finite_differences():
    def g(p):
        return 1 / (1 + math.sqrt(p / (1 - p)))

    h = 1e-5
    for p0 in (0.1, 0.3, 0.5, 0.7, 0.9):
        numeric = (g(p0 + h) - 2 * g(p0) + g(p0 - h)) / h**2
        assert analysis.capital_fair_curve_curvature(p0) == pytest.approx(
            numeric, rel=1e-4
        )


def test_fair_surface_convexity_reports():
    report = analysis.fair_surface_convexity("capital", (Fraction(1, 10),))
    assert report.convex_along_segment and report.second_derivative > 0
    report = analysis.fair_surface_convexity("capital", (Fraction(9, 10),))
    assert not report.convex_along_segment and report.second_derivative < 0

    report = analysis.fair_surface_convexity("history", (Fraction(9, 10), Fraction(1, 4)))
    assert report.convex_along_segment and report.second_derivative > 0
    # p0 + p1 < 1 with p1 > 1/2 is the other convex case
    report = analysis.fair_surface_convexity("history", (Fraction(1, 10), Fraction(3, 5)))
    assert report.convex_along_segment
    # mixed signs break convexity (point still satisfies p0*p1 < 1 - p1)
    report = analysis.fair_surface_convexity("history", (Fraction(4, 5), Fraction(11, 20)))
    assert not report.convex_along_segment
    # degenerate segment from the fair coin to itself
    report = analysis.fair_surface_convexity("history", (Fraction(1, 2), Fraction(1, 2)))
    assert report.second_derivative == 0
    with pytest.raises(DomainError):
        analysis.fair_surface_convexity("capital", (Fraction(3, 2),))
    with pytest.raises(DomainError):
        analysis.fair_surface_convexity("history", (Fraction(9, 10), Fraction(9, 10)))
    with pytest.raises(DomainError):
        analysis.fair_surface_convexity("other", (Fraction(1, 2),))


def test_history_segment_curvature_closed_form():
    p0, p1 = 0.9, 0.25
    for t in (0.0, 0.5, 1.0):
        expected = -4 * (p0 + p1 - 1) * (2 * p1 - 1) / (1 - (2 * p1 - 1) * t) ** 3
        assert analysis.history_fair_segment_curvature(p0, p1, t) == pytest.approx(
            expected
        )


def test_capital_pattern_grid_flips_sign_at_one():
    grid = analysis.region_grid(
        "capital", {"rho": (Fraction(1, 2), Fraction(3, 2))}, 3,
        mode="pattern", rs=(3, 2),
    )
    assert [cell.classification for cell in grid.cells] == \
        ["winning", "fair", "losing"]


def test_history_grid_classification_and_regions():
    grid = analysis.region_grid(
        "history",
        {"kappa": (Fraction(1, 10), Fraction(5)), "lambda": (Fraction(1, 10), Fraction(5))},
        5, mode="mixture", gamma=Fraction(1, 2),
    )
    assert len(grid.cells) == 25
    invalid = [c for c in grid.cells if c.classification == "invalid-domain"]
    assert invalid and all(c.mu is None for c in invalid)
    for cell in grid.cells:
        if cell.mu is None:
            assert not cell.params["lambda"] < 1 + cell.params["kappa"]
            continue
        verdict = analysis.mixture_sign_history(
            cell.params["kappa"], cell.params["lambda"], Fraction(1, 2)
        )
        assert cell.classification == verdict.classification
        assert cell.region in (None, 1, 2, 3, 4, 5, 6)


def test_single_cell_grid():
    grid = analysis.region_grid(
        "capital", {"rho": (Fraction(1, 3), Fraction(1, 3))}, 1,
        mode="mixture", gamma=Fraction(1, 2),
    )
    assert len(grid.cells) == 1
    assert grid.cells[0].mu == Fraction(18, 709)


def test_grid_serialization_stable_and_parseable():
    grid = analysis.region_grid(
        "capital", {"rho": (Fraction(1, 2), Fraction(2))}, 3,
        mode="mixture", gamma=Fraction(1, 2),
    )
    text = analysis.grid_csv(grid)
    assert text == analysis.grid_csv(grid)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["rho", "mu_float", "mu_exact", "classification", "region"]
    assert len(rows) == 4
    payload = json.loads(analysis.grid_json(grid))
    assert payload["schema"] == "parrondo.region-grid/1"
    assert payload["cells"][0]["classification"] == "winning"


def test_grid_parallel_matches_serial():
    ranges = {"kappa": (Fraction(1, 4), Fraction(2)), "lambda": (Fraction(1, 4), Fraction(2))}
    serial = analysis.region_grid("history", ranges, 3, mode="mixture",
                                  gamma=Fraction(1, 2), workers=1)
    parallel = analysis.region_grid("history", ranges, 3, mode="mixture",
                                    gamma=Fraction(1, 2), workers=2)
    assert serial == parallel


def test_grid_argument_validation():
    with pytest.raises(DomainError):
        analysis.region_grid("capital", {"rho": (Fraction(1), Fraction(2))}, 3)
    with pytest.raises(DomainError):
        analysis.region_grid("capital", {"rho": (Fraction(2), Fraction(1))}, 3,
                             gamma=Fraction(1, 2))
    with pytest.raises(DomainError):
        analysis.region_grid("capital", {"rho": (Fraction(1), Fraction(2))}, 0,
                             gamma=Fraction(1, 2))
    with pytest.raises(DomainError):
        analysis.region_grid("nope", {"rho": (Fraction(1), Fraction(2))}, 2,
                             gamma=Fraction(1, 2))
