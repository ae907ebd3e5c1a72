import math
import random
from fractions import Fraction

import numpy as np
import pytest

from parrondo import games, patterns, spectral
from parrondo.scalar import to_float
from parrondo.spectral import SpectralError

from conftest import random_kappa_lambda

TABLE_ROWS = (
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

REGION_SAMPLES = {
    1: (Fraction(1, 9), Fraction(1, 3)),
    2: (Fraction(4), Fraction(9, 2)),
    3: (Fraction(9), Fraction(3)),
    4: (Fraction(3), Fraction(3, 2)),
    5: (Fraction(3), Fraction(2, 3)),
    6: (Fraction(8), Fraction(1, 9)),
}


def test_capital_eigenvalues_sum_and_product():
    for rho in (0.2, 1 / 3, 0.8, 2.5, 7.0):
        spec = spectral.capital_spectrum(rho)
        assert spec.e1 + spec.e2 == pytest.approx(-1.0, abs=1e-12)
        product = 2 * rho**2 / ((1 + rho) ** 2 * (1 + rho**2))
        assert spec.e1 * spec.e2 == pytest.approx(product, rel=1e-12)


def test_capital_eigenvalues_against_numpy_oracle():
    for rho in (0.25, 1 / 3, 3.0):
        spec = spectral.capital_spectrum(rho)
        P = np.array(
            [[to_float(x) for x in row] for row in games.capital_game_b(rho, 0.0).P]
        )
        eigs = sorted(np.linalg.eigvals(P).real)
        low, high = sorted((spec.e1, spec.e2))
        assert eigs[0] == pytest.approx(low, abs=1e-10)
        assert eigs[1] == pytest.approx(high, abs=1e-10)
        assert eigs[2] == pytest.approx(1.0, abs=1e-10)


def test_capital_classic_eigenvalue_is_explicit_surd():
    spec = spectral.capital_spectrum(1 / 3)
    assert spec.e1 == pytest.approx(-0.5 + math.sqrt(55) / 20, abs=1e-14)
    assert spec.e2 == pytest.approx(-0.5 - math.sqrt(55) / 20, abs=1e-14)


def test_capital_eigenvector_residuals():
    for rho in (0.2, 1 / 3, 1.0, 4.0):
        spec = spectral.capital_spectrum(rho)
        P = np.array([[to_float(x) for x in row]
                      for row in games.capital_game_b(rho, 0.0).P])
        R = np.array(spec.right_vectors)
        for col, ev in ((0, 1.0), (1, spec.e1), (2, spec.e2)):
            resid = np.max(np.abs(P @ R[:, col] - ev * R[:, col]))
            assert resid <= 1e-10 * max(1.0, np.max(np.abs(R[:, col])))
        L = np.array(spec.left_vectors)
        assert np.max(np.abs(L @ R - np.eye(3))) <= 1e-10


def test_capital_degenerate_at_rho_one():
    spec = spectral.capital_spectrum(1.0)
    assert spec.degenerate
    assert spec.e1 == spec.e2 == -0.5
    with pytest.raises(SpectralError):
        spectral.capital_pattern_mean_closed(1.0, 2, 2)


def test_capital_closed_mean_reproduces_constants():
    assert spectral.capital_pattern_mean_closed(1 / 3, 2, 2) == pytest.approx(
        4 / 163, abs=1e-12
    )
    assert spectral.capital_pattern_mean_closed(1 / 3, 1, 2) == pytest.approx(
        2416 / 35601, abs=1e-12
    )
    for rho in (0.2, 1 / 3, 0.9, 5.0):
        assert abs(spectral.capital_pattern_mean_closed(rho, 1, 1)) <= 1e-12


def test_capital_closed_mean_agrees_with_exact_direct():
    for rho in (Fraction(1, 5), Fraction(1, 3), Fraction(2, 3), Fraction(3, 2), Fraction(5)):
        a, b = games.capital_pair(rho)
        for r in (1, 2, 3):
            for s in (1, 2, 3):
                exact = to_float(patterns.pattern_mean_direct(a, b, r, s))
                closed = spectral.capital_pattern_mean_closed(to_float(rho), r, s)
                assert abs(closed - exact) <= 1e-10 * max(1.0, abs(exact))


def test_history_cubic_roots_satisfy_vieta():
    points = list(REGION_SAMPLES.values()) + [(Fraction(2), Fraction(1, 2))]
    for kappa, lam in points:
        spec = spectral.history_spectrum(kappa, lam)
        a2, a1, a0 = spec.cubic
        e1, e2, e3 = spec.e1, spec.e2, spec.e3
        assert abs(e1 + e2 + e3 + a2) <= 1e-10
        assert abs(e1 * e2 + e1 * e3 + e2 * e3 - a1) <= 1e-10
        assert abs(e1 * e2 * e3 + a0) <= 1e-10
        assert max(abs(e1), abs(e2), abs(e3)) < 1.0


def test_history_root_structure_by_discriminant_sign():
    spec = spectral.history_spectrum(Fraction(1, 9), Fraction(1, 3))
    assert spec.discriminant > 0
    assert abs(spec.e1.imag) <= 1e-12
    assert spec.e2 == pytest.approx(spec.e3.conjugate(), abs=1e-12)

    spec = spectral.history_spectrum(Fraction(3), Fraction(3, 2))
    assert spec.discriminant < 0
    for e in (spec.e1, spec.e2, spec.e3):
        assert abs(e.imag) == 0
    assert 1 > spec.e1.real > spec.e3.real > spec.e2.real > -1


def test_history_unit_lambda_discriminant_formula():
    for kappa in (0.3, 0.7, 2.0):
        spec = spectral.history_spectrum(kappa, 1.0)
        expected = 108 * (1 + kappa) ** 2 * (1 - kappa) ** 3 * (7 + 9 * kappa)
        assert spec.discriminant == pytest.approx(expected, rel=1e-9)
        assert spec.region is None  # fair line


def test_history_regions_match_table():
    for region, (kappa, lam) in REGION_SAMPLES.items():
        assert spectral.history_spectrum(kappa, lam).region == region


def test_history_degenerate_and_singular_parameters():
    spec = spectral.history_spectrum(1.0, 1.0)
    assert spec.degenerate
    with pytest.raises(SpectralError):
        spectral.history_coefficients(Fraction(1), Fraction(1))
    with pytest.raises(SpectralError):
        spectral.history_coefficients(Fraction(2), Fraction(1, 2))  # kappa*lambda = 1
    with pytest.raises(SpectralError):
        spectral.history_spectrum(1.0, 3.0)  # outside lambda < 1 + kappa


def test_equal_parameters_kill_the_series():
    kappa = lam = Fraction(1, 2)
    coeffs = spectral.history_coefficients(kappa, lam)
    assert coeffs.constant == 0
    for s in (1, 2, 5):
        assert abs(spectral.history_Es(kappa, lam, s, coeffs)) <= 1e-12
        assert abs(spectral.history_Gs(kappa, lam, s, coeffs)) <= 1e-12


def test_series_constant_matches_closed_form_and_sign_regions():
    for kappa, lam in REGION_SAMPLES.values():
        coeffs = spectral.history_coefficients(kappa, lam)
        closed = to_float((1 + kappa) * (lam - kappa) * (1 - lam)
                          / (4 * lam * (2 + kappa + lam)))
        assert coeffs.constant == pytest.approx(closed, rel=1e-12)
        winning = kappa < lam < 1 or kappa > lam > 1
        assert (coeffs.constant > 0) == winning


def test_series_matches_exact_pattern_means():
    rng = random.Random(17)
    points = [random_kappa_lambda(rng) for _ in range(4)]
    points += [(Fraction(1, 9), Fraction(1, 3)), (Fraction(3), Fraction(3, 2))]
    for kappa, lam in points:
        a, b = games.history_pair(kappa, lam)
        coeffs = spectral.history_coefficients(kappa, lam)
        for s in range(1, 7):
            exact_e = to_float((2 + s) * patterns.pattern_mean_direct(a, b, 2, s))
            got_e = spectral.history_Es(kappa, lam, s, coeffs)
            assert abs(got_e - exact_e) <= 1e-9 * max(1.0, abs(exact_e))
            exact_f = to_float((1 + s) * patterns.pattern_mean_direct(a, b, 1, s))
            got_f = spectral.history_Fs(kappa, lam, s, coeffs)
            assert abs(got_f - exact_f) <= 1e-9 * max(1.0, abs(exact_f))


def test_history_closed_mean_reproduces_constants():
    k, l = Fraction(1, 9), Fraction(1, 3)
    assert spectral.history_pattern_mean_closed(k, l, 2, 2) == pytest.approx(
        1 / 100, abs=1e-10
    )
    assert spectral.history_pattern_mean_closed(k, l, 1, 1) == pytest.approx(
        1 / 44, abs=1e-10
    )
    assert spectral.history_pattern_mean_closed(k, l, 3, 2) == pytest.approx(
        to_float(Fraction(1, 100) * 4 / 5), abs=1e-10
    )


def test_bounds_monotone_in_s():
    coeffs = spectral.history_coefficients(Fraction(1, 9), Fraction(8, 9))
    es_values = [spectral._es_bound(coeffs, s) for s in range(1, 12)]
    assert all(b > a for a, b in zip(es_values, es_values[1:]))
    fs_values = []
    for s in range(1, 12):
        val, ok = spectral._fs_bound(coeffs, s)
        if ok:
            fs_values.append(val)
    assert all(b > a for a, b in zip(fs_values, fs_values[1:]))


def test_bound_indices_match_published_table():
    for kappa, lam, region, s0, s1 in TABLE_ROWS:
        assert spectral.history_spectrum(kappa, lam).region == region
        assert spectral.bound_search_s0(kappa, lam) == s0
        assert spectral.bound_search_s1(kappa, lam) == s1


def test_bound_search_cap():
    with pytest.raises(SpectralError):
        spectral.bound_search_s0(Fraction(1, 9), Fraction(8, 9), cap=1)
    with pytest.raises(SpectralError):
        spectral.bound_search_s0(Fraction(1, 2), Fraction(1, 2))  # fair point


def test_verify_sign_at_point():
    rep = spectral.verify_sign_at_point(Fraction(1, 9), Fraction(1, 3), spectral.R_EQ_1)
    assert rep.constant_sign == 1
    assert rep.bound_index == 2
    assert rep.checked_prefix_ok and rep.exceptions == ()
    rep = spectral.verify_sign_at_point(Fraction(1, 3), Fraction(1, 9), spectral.R_EQ_1)
    assert rep.constant_sign == -1
    assert rep.checked_prefix_ok
    rep = spectral.verify_sign_at_point(Fraction(1, 9), Fraction(1, 3), spectral.R_GE_2)
    assert rep.bound_index == 1 and rep.checked_prefix_ok
    with pytest.raises(SpectralError):
        spectral.verify_sign_at_point(Fraction(1, 2), Fraction(1, 2), spectral.R_EQ_1)
    with pytest.raises(SpectralError):
        spectral.verify_sign_at_point(0.25, 0.5, spectral.R_EQ_1)
    with pytest.raises(SpectralError):
        spectral.verify_sign_at_point(Fraction(1, 9), Fraction(1, 3), "bogus")
