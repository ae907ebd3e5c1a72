"""Float-backend closed forms built on the spectral structure of game B.

Capital family: the two nonunit eigenvalues of the three-state B chain
have explicit square-root expressions, and the per-game pattern mean has
a closed ratio form in those eigenvalues.  History family: the nonunit
eigenvalues are the roots of a cubic, solved by Cardano's formula (or
its trigonometric form when all roots are real), and the per-cycle mean
decomposes into a constant minus geometrically decaying eigenvalue
terms.  Those decay series drive the sign-certification bounds: once the
decaying part provably stays below the constant, the sign of every
longer pattern is certified, and shorter patterns are checked one by one
with exact rational arithmetic.

Everything here is float/complex; exact cross-checks live in `patterns`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import games, linalg, patterns
from .scalar import is_exact

DEFAULT_SEARCH_CAP = 100_000

R_GE_2 = "pattern_r_ge_2"
R_EQ_1 = "pattern_r_eq_1"

_RESIDUE_GUARD = 1e-8  # internal tripwire; published residue bound is 1e-10


class SpectralError(ValueError):
    """Parameters where a closed form is undefined or untrustworthy."""


def _real(value: complex, what: str) -> float:
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > _RESIDUE_GUARD * scale:
        raise SpectralError(f"{what} has non-negligible imaginary residue {value.imag!r}")
    return value.real


def _real_cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


# ---------------------------------------------------------------------------
# capital family


@dataclass(frozen=True)
class CapitalSpectrum:
    rho: float
    scale: float            # sqrt((1+rho^2)(1+4rho+rho^2))
    e1: float
    e2: float
    right_vectors: tuple    # columns: constant vector, then the e1/e2 vectors
    left_vectors: tuple     # inverse of right_vectors
    degenerate: bool        # rho = 1 collapses e1 = e2 = -1/2


def capital_spectrum(rho: float) -> CapitalSpectrum:
    """Eigenvalues and eigenvector basis of the capital-family B chain."""
    rho = float(rho)
    if rho <= 0:
        raise SpectralError(f"rho={rho} must be positive")
    S = math.sqrt((1 + rho * rho) * (1 + 4 * rho + rho * rho))
    spread = (1 - rho) * S / (2 * (1 + rho) * (1 + rho * rho))
    e1 = -0.5 + spread
    e2 = -0.5 - spread
    r1 = (
        (1 + rho) * (1 - rho * rho - S),
        2 + rho + 2 * rho**2 + rho**3 + rho * S,
        -(1 + 2 * rho + rho**2 + 2 * rho**3 - S),
    )
    r2 = (
        (1 + rho) * (1 - rho * rho + S),
        2 + rho + 2 * rho**2 + rho**3 - rho * S,
        -(1 + 2 * rho + rho**2 + 2 * rho**3 + S),
    )
    R = tuple((1.0, r1[i], r2[i]) for i in range(3))
    L = linalg.inverse(R)
    return CapitalSpectrum(
        rho=rho, scale=S, e1=e1, e2=e2,
        right_vectors=R, left_vectors=L, degenerate=(rho == 1.0),
    )


def capital_pattern_mean_closed(rho: float, r: int, s: int) -> float:
    """Closed ratio form of the per-game pattern mean at eps = 0.

    Undefined at rho = 1 (repeated eigenvalue); use the exact direct
    method there, where the mean is 0 anyway.
    """
    if r < 1 or s < 1:
        raise SpectralError("pattern requires r >= 1 and s >= 1")
    rho = float(rho)
    if rho == 1.0:
        raise SpectralError("rho = 1 is degenerate; use the rational direct method")
    spec = capital_spectrum(rho)
    a = float(games.capital_mixing_weight(r))
    e1s, e2s = spec.e1**s, spec.e2**s
    S = spec.scale
    top = 3 * a * (
        (2 + (3 * a - 1) * (e1s + e2s - 2 * e1s * e2s) - (e1s + e2s))
        * (1 - rho) * (1 + rho) * S
        + a * (e2s - e1s) * (5 * (1 + rho) ** 2 * (1 + rho * rho) - 4 * rho * rho)
    ) * (1 - rho) ** 2
    bottom = (
        4 * (r + s)
        * (1 + (3 * a - 1) * e1s)
        * (1 + (3 * a - 1) * e2s)
        * (1 + rho + rho * rho) ** 2
        * S
    )
    return top / bottom


# ---------------------------------------------------------------------------
# history family


@dataclass(frozen=True)
class HistorySpectrum:
    kappa: float
    lam: float
    cubic: tuple            # (a2, a1, a0) of x^3 + a2 x^2 + a1 x + a0
    alpha: float
    beta: float
    discriminant: float     # beta^2 + 4 alpha^3
    e1: complex
    e2: complex
    e3: complex
    region: int | None      # 1..6 away from the fair lines, else None
    degenerate: bool        # repeated eigenvalue (discriminant = 0)


def _history_cubic(kappa: float, lam: float) -> tuple:
    k, l = kappa, lam
    a2 = (l - k) / (1 + k)
    a1 = (l - k) * l * (2 + k + l) / ((1 + k) ** 2 * (1 + l) ** 2)
    a0 = -(1 - k * l) * (1 + k - l - l * l) / ((1 + k) ** 2 * (1 + l) ** 2)
    return a2, a1, a0


def _history_alpha_beta(kappa: float, lam: float) -> tuple:
    k, l = kappa, lam
    alpha = (l - k) * (k + 5 * l + 5 * k * l + l**2 + k * l**2 - l**3)
    beta = (1 + l) * (
        27 + 54 * k - 27 * l + 27 * k**2 - 54 * k * l - 27 * l**2
        + 2 * k**3 - 42 * k**2 * l - 30 * k * l**2 + 16 * l**3
        - 14 * k**3 * l + 6 * k**2 * l**2 + 30 * k * l**3 + 5 * l**4
        + 2 * k**3 * l**2 + 21 * k**2 * l**3 + 6 * k * l**4 - 2 * l**5
    )
    return alpha, beta


def _region(kappa: float, lam: float, disc: float) -> int | None:
    if kappa == lam or lam == 1:
        return None
    winning = kappa < lam < 1 or kappa > lam > 1
    if disc > 0:
        if winning:
            return 1 if lam < 1 else 3
        return 2 if lam > max(kappa, 1.0) else 6
    if disc < 0:
        return 4 if winning else 5
    return None


def history_spectrum(kappa: float, lam: float) -> HistorySpectrum:
    """Nonunit eigenvalues of the history-family B chain via Cardano.

    Real cube roots are taken for negative radicands; the second root is
    derived as -alpha/P to keep the branches compatible.  A negative
    cubic discriminant switches to the trigonometric form, which yields
    three real eigenvalues ordered e1 > e3 > e2.
    """
    kappa, lam = float(kappa), float(lam)
    if kappa <= 0 or lam <= 0 or lam >= 1 + kappa:
        raise SpectralError("require kappa > 0, lambda > 0, lambda < 1 + kappa")
    a2, a1, a0 = _history_cubic(kappa, lam)
    alpha, beta = _history_alpha_beta(kappa, lam)
    disc = beta * beta + 4 * alpha**3
    denom = 3 * (1 + kappa) * (1 + lam)
    shift = (lam - kappa) / (3 * (1 + kappa))
    scale = beta * beta + abs(4 * alpha**3)
    degenerate = abs(disc) <= 1e-14 * max(scale, 1.0)
    omega = complex(-0.5, 0.5 * math.sqrt(3.0))
    if degenerate:
        P = Q = complex(_real_cbrt(beta / 2))
        e1 = (P + Q) / denom - shift
        e2 = (omega * P + omega**2 * Q) / denom - shift
        e3 = (omega**2 * P + omega * Q) / denom - shift
    elif disc > 0:
        root = math.sqrt(disc)
        P = complex(_real_cbrt((beta + root) / 2))
        Q = -alpha / P if P != 0 else complex(_real_cbrt((beta - root) / 2))
        e1 = (P + Q) / denom - shift
        e2 = (omega * P + omega**2 * Q) / denom - shift
        e3 = (omega**2 * P + omega * Q) / denom - shift
    else:
        theta = math.acos(beta / (2 * math.sqrt(-(alpha**3))))
        mag = 2 * math.sqrt(-alpha)
        e1 = complex(mag * math.cos(theta / 3) / denom - shift)
        e2 = complex(mag * math.cos((theta + 2 * math.pi) / 3) / denom - shift)
        e3 = complex(mag * math.cos((theta + 4 * math.pi) / 3) / denom - shift)
    return HistorySpectrum(
        kappa=kappa, lam=lam, cubic=(a2, a1, a0), alpha=alpha, beta=beta,
        discriminant=disc, e1=e1, e2=e2, e3=e3,
        region=_region(kappa, lam, disc), degenerate=degenerate,
    )


@dataclass(frozen=True)
class HistoryCoefficients:
    """Eigenvalue-decay coefficients of the per-cycle mean series.

    The r >= 2 series is  constant - sum(decay[i] * e[i]^s);  the r = 1
    series adds a correction built from the start-distribution drift
    (drift numerator/denominator series) times its own decaying series
    (split constant / split decay).
    """

    spectrum: HistorySpectrum
    constant: float                 # limit of the r >= 2 series
    decay: tuple                    # complex coefficients on e1^s, e2^s, e3^s
    split_constant: float
    split_decay: tuple
    drift_numerator: tuple          # coefficients of the start-drift numerator
    drift_denominator: tuple        # coefficients under the constant 4


def history_coefficients(kappa, lam) -> HistoryCoefficients:
    spec = history_spectrum(float(kappa), float(lam))
    if spec.degenerate:
        raise SpectralError("repeated eigenvalue: closed forms disabled")
    k, l = spec.kappa, spec.lam
    if abs(1 - k * l) < 1e-12:
        raise SpectralError("kappa*lambda = 1: closed-form denominators vanish")
    e = (spec.e1, spec.e2, spec.e3)

    big = (
        1 + 3 * k - 2 * l + 3 * k**2 - 4 * k * l - l**2 + k**3
        - 9 * k * l**2 + 6 * l**3 + 2 * k**3 * l - 7 * k**2 * l**2
        + 6 * k * l**3 + k**3 * l**2 - 2 * k**2 * l**3 + 4 * k * l**4 - 2 * l**5
    )

    def pair_term(y, z):
        return (
            big
            - (1 + k) * (1 + l)
            * (1 + 2 * k - 3 * l + k**2 - 2 * k * l + k**2 * l - 2 * k * l**2 + 2 * l**3)
            * (y + z)
            + (1 + k) ** 2 * (1 + l) ** 2 * (1 + k - 2 * l) * y * z
        )

    def f(x, y, z):
        num = (
            (l - k)
            * (l * (l - k) - (1 + k - l - l * l) * x + (1 + k) * (1 + l) * x * x)
            * pair_term(y, z)
        )
        den = (
            4 * (1 + k) ** 3 * l * (1 + l) ** 2 * (1 - k * l)
            * (1 - x) * (x - y) * (x - z)
        )
        return num / den

    def h(x, y, z):
        num = (
            (
                2 + 2 * k - 4 * l - 2 * k * l - k**2 * l + 2 * k * l**2 + l**3
                - (2 + k + l - k**2 - l**2 - 2 * k**2 * l + k * l**2 - l**3) * x
                + (1 + k) * (1 + l) * (l - k) * x * x
            )
            * pair_term(y, z)
        )
        den = (
            4 * (1 + k) ** 3 * l * (1 + l) ** 2 * (1 - k * l)
            * (1 - x) * (x - y) * (x - z)
        )
        return num / den

    def g(y, z):
        return (
            1 + 2 * k - 3 * l + k**2 - 2 * k * l + k**2 * l - 2 * k * l**2 + 2 * l**3
            - (1 + k) * (1 + l) * (1 + k - 2 * l) * (y + z)
            + (1 + k) ** 2 * (1 + l) * y * z
        )

    def f0(x, y, z):
        return (
            (1 + k - 2 * l - (1 + k) * x) * g(y, z)
            / (2 * (1 + k) ** 2 * l * (1 + l) * (x - y) * (x - z))
        )

    def f1(x, y, z):
        return (
            (
                (1 - l) * (1 + k - l - l * l)
                - (1 + l) * (1 - k**2 + k * l - l**2) * x
                + (1 + k) * (1 + l) * (l - k) * x * x
            )
            * g(y, z)
            / (2 * (1 + k) ** 2 * l * (1 + l) * (1 - k * l) * (x - y) * (x - z))
        )

    def f2(x, y, z):
        return (
            (
                2 + 2 * k - 4 * l - 2 * k * l - k**2 * l + 2 * k * l**2 + l**3
                - (2 + k - k**2 + l - 2 * k**2 * l - l**2 + k * l**2 - l**3) * x
                + (1 + k) * (1 + l) * (l - k) * x * x
            )
            * g(y, z)
            / ((1 + k) ** 2 * l * (1 + l) * (1 - k * l) * (x - y) * (x - z))
        )

    cyc = ((e[0], e[1], e[2]), (e[1], e[2], e[0]), (e[2], e[0], e[1]))
    constant = (1 + k) * (l - k) * (1 - l) / (4 * l * (2 + k + l))
    split_constant = -(1 + k - 2 * l - l * l + k * l * l) / (4 * l * (1 + l))
    return HistoryCoefficients(
        spectrum=spec,
        constant=constant,
        decay=tuple(f(*args) for args in cyc),
        split_constant=split_constant,
        split_decay=tuple(h(*args) for args in cyc),
        drift_numerator=tuple(f0(*args) - f1(*args) for args in cyc),
        drift_denominator=tuple(f2(*args) for args in cyc),
    )


def _eig_powers(coeffs: HistoryCoefficients, s: int) -> tuple:
    spec = coeffs.spectrum
    return (spec.e1**s, spec.e2**s, spec.e3**s)


def history_Es(kappa, lam, s: int, coeffs: HistoryCoefficients | None = None) -> float:
    """Per-cycle mean of the pattern with r >= 2 leading A games:
    mu = Es / (r + s)."""
    c = coeffs or history_coefficients(kappa, lam)
    powers = _eig_powers(c, s)
    val = c.constant - sum(d * p for d, p in zip(c.decay, powers))
    return _real(complex(val), "Es")


def history_Gs(kappa, lam, s: int, coeffs: HistoryCoefficients | None = None) -> float:
    c = coeffs or history_coefficients(kappa, lam)
    powers = _eig_powers(c, s)
    num = 2 * sum(d * p for d, p in zip(c.drift_numerator, powers))
    den = 4 + sum(d * p for d, p in zip(c.drift_denominator, powers))
    return _real(complex(num / den), "Gs")


def history_Hs(kappa, lam, s: int, coeffs: HistoryCoefficients | None = None) -> float:
    c = coeffs or history_coefficients(kappa, lam)
    powers = _eig_powers(c, s)
    val = c.split_constant - sum(d * p for d, p in zip(c.split_decay, powers))
    return _real(complex(val), "Hs")


def history_Fs(kappa, lam, s: int, coeffs: HistoryCoefficients | None = None) -> float:
    """Per-cycle mean of the pattern with a single leading A game:
    mu = Fs / (1 + s)."""
    c = coeffs or history_coefficients(kappa, lam)
    return history_Es(kappa, lam, s, c) + history_Gs(kappa, lam, s, c) * history_Hs(
        kappa, lam, s, c
    )


def history_pattern_mean_closed(kappa, lam, r: int, s: int) -> float:
    if r < 1 or s < 1:
        raise SpectralError("pattern requires r >= 1 and s >= 1")
    c = history_coefficients(kappa, lam)
    if r == 1:
        return history_Fs(kappa, lam, s, c) / (1 + s)
    return history_Es(kappa, lam, s, c) / (r + s)


def _es_bound(c: HistoryCoefficients, s: int) -> float:
    mags = tuple(abs(x) for x in _eig_powers(c, s))
    return abs(c.constant) - sum(abs(d) * m for d, m in zip(c.decay, mags))


def _fs_bound(c: HistoryCoefficients, s: int) -> tuple:
    """(bound value, denominator positive?).  The bound is meaningful
    only once the drift denominator 4 - sum |f2| |e|^s is positive."""
    mags = tuple(abs(x) for x in _eig_powers(c, s))
    den = 4 - sum(abs(d) * m for d, m in zip(c.drift_denominator, mags))
    if den <= 0:
        return float("-inf"), False
    drift = 2 * sum(abs(d) * m for d, m in zip(c.drift_numerator, mags)) / den
    split = abs(c.split_constant) + sum(
        abs(d) * m for d, m in zip(c.split_decay, mags)
    )
    val = (
        abs(c.constant)
        - sum(abs(d) * m for d, m in zip(c.decay, mags))
        - drift * split
    )
    return val, True


def _require_unfair(c: HistoryCoefficients) -> None:
    if c.constant == 0:
        raise SpectralError("fair parameter point: the sign certificate needs c0 != 0")


def bound_search_s0(kappa, lam, cap: int = DEFAULT_SEARCH_CAP) -> int:
    """Smallest s >= 1 at which the decay of the r >= 2 series provably
    leaves the sign of the constant term in charge."""
    c = history_coefficients(kappa, lam)
    _require_unfair(c)
    for s in range(1, cap + 1):
        if _es_bound(c, s) > 0:
            return s
    raise SpectralError(f"no certificate below s = {cap}: near-degenerate parameters")


def bound_search_s1(kappa, lam, cap: int = DEFAULT_SEARCH_CAP) -> int:
    """Same certificate for the single-leading-A series, whose bound also
    needs its drift denominator positive."""
    c = history_coefficients(kappa, lam)
    _require_unfair(c)
    for s in range(1, cap + 1):
        val, ok = _fs_bound(c, s)
        if ok and val > 0:
            return s
    raise SpectralError(f"no certificate below s = {cap}: near-degenerate parameters")


@dataclass(frozen=True)
class SignCheckReport:
    kappa: Fraction
    lam: Fraction
    mode: str
    constant_sign: int
    bound_index: int
    checked_prefix_ok: bool
    exceptions: tuple  # s values below the bound whose sign disagrees


def verify_sign_at_point(kappa: Fraction, lam: Fraction, mode: str,
                         cap: int = DEFAULT_SEARCH_CAP) -> SignCheckReport:
    """Certify that every pattern mean at (kappa, lambda) has the sign of
    the series constant: the decay bound covers all s at or above the
    bound index, and each smaller s is evaluated exactly in rationals.
    """
    if mode not in (R_GE_2, R_EQ_1):
        raise SpectralError(f"unknown mode {mode!r}")
    if not (is_exact(kappa) and is_exact(lam)):
        raise SpectralError("exact rational kappa and lambda are required")
    kappa, lam = Fraction(kappa), Fraction(lam)
    c = history_coefficients(kappa, lam)
    _require_unfair(c)
    c0_sign = 1 if c.constant > 0 else -1
    if mode == R_GE_2:
        bound = bound_search_s0(kappa, lam, cap)
        r = 2
    else:
        bound = bound_search_s1(kappa, lam, cap)
        r = 1
    a, b = games.history_pair(kappa, lam)
    exceptions = []
    for s in range(1, bound):
        series_value = (r + s) * patterns.pattern_mean_direct(a, b, r, s)
        sign = 0 if series_value == 0 else (1 if series_value > 0 else -1)
        if sign != c0_sign:
            exceptions.append(s)
    return SignCheckReport(
        kappa=kappa, lam=lam, mode=mode, constant_sign=c0_sign,
        bound_index=bound, checked_prefix_ok=not exceptions,
        exceptions=tuple(exceptions),
    )
