"""Parrondo-effect analysis on top of the game constructors.

Covers sign classification of mixtures and patterns over parameter
grids, the bisection search for the largest winning bias, the large-s
limit of the per-cycle pattern mean, and the convexity diagnostics of
the fair-game curve/surface that explain why mixing two fair games can
produce drift.
"""

from __future__ import annotations

import concurrent.futures
import csv
import functools
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import games, linalg, markov, patterns, spectral
from .games import CAPITAL, HISTORY, DomainError, ParamPoint
from .markov import LimitParams
from .scalar import format_scalar, to_float

EPSILON_GUARD = Fraction(1, 10**9)
BISECTION_WIDTH = Fraction(1, 10**12)


def mixture_sign_capital(rho, gamma) -> LimitParams:
    """Exact limit parameters of gamma*A + (1-gamma)*B at eps = 0; the
    mixture is winning iff rho < 1 and fair iff rho = 1."""
    if not (0 < gamma < 1):
        raise DomainError(f"gamma={gamma} must be inside (0, 1)")
    point = ParamPoint(family=CAPITAL, rho=rho, gamma=gamma)
    return markov.limit_params(point.mixture_chain())


def mixture_sign_history(kappa, lam, gamma) -> LimitParams:
    """Exact limit parameters of the history mixture at eps = 0; winning
    iff kappa < lambda < 1 or kappa > lambda > 1."""
    if not (0 < gamma < 1):
        raise DomainError(f"gamma={gamma} must be inside (0, 1)")
    point = ParamPoint(family=HISTORY, kappa=kappa, lam=lam, gamma=gamma)
    return markov.limit_params(point.mixture_chain())


def _mu_at_eps(point: ParamPoint, target, eps: Fraction) -> Fraction:
    moved = ParamPoint(
        family=point.family, rho=point.rho, kappa=point.kappa, lam=point.lam,
        gamma=point.gamma, eps=eps,
    )
    if target == "mixture":
        return markov.mean_parameter(moved.mixture_chain())
    r, s = target
    a, b = moved.pair()
    # the product route stays valid at eps > 0, unlike the direct route
    return patterns.general_word_limits(a, b, patterns.word_for_pattern(r, s)).mu


@dataclass(frozen=True)
class FairnessThreshold:
    eps0: float
    lower: Fraction          # largest tested eps with mu > 0
    upper: Fraction | None   # smallest tested eps with mu <= 0; None if never
    positive_everywhere: bool


def fairness_epsilon(point: ParamPoint, target="mixture") -> FairnessThreshold:
    """Bisect eps -> mu(eps) on (0, eps_max) down to width 1e-12.

    Midpoints are float-suggested but every sign query is an exact
    rational evaluation, so the bracket is certain.  Requires mu(0) > 0;
    when mu stays positive across the whole admissible range the ceiling
    is returned with a flag instead of a root.
    """
    if target != "mixture":
        r, s = target
        if r < 1 or s < 1:
            raise DomainError("pattern target requires r >= 1 and s >= 1")
    mu0 = _mu_at_eps(point, target, Fraction(0))
    if mu0 <= 0:
        raise DomainError(f"mu(0) = {mu0} is not positive: no winning window")
    eps_max = Fraction(point.eps_ceiling()).limit_denominator(10**12) - EPSILON_GUARD
    if _mu_at_eps(point, target, eps_max) > 0:
        return FairnessThreshold(
            eps0=float(eps_max), lower=eps_max, upper=None, positive_everywhere=True
        )
    lo, hi = Fraction(0), eps_max
    while hi - lo > BISECTION_WIDTH:
        mid = Fraction(float((lo + hi) / 2)).limit_denominator(10**15)
        if not (lo < mid < hi):
            mid = (lo + hi) / 2
        if _mu_at_eps(point, target, mid) > 0:
            lo = mid
        else:
            hi = mid
    return FairnessThreshold(
        eps0=float((lo + hi) / 2), lower=lo, upper=hi, positive_everywhere=False
    )


def pattern_limit(a: markov.GameChain, b: markov.GameChain, r: int):
    """lim_{s->inf} (r+s) mu_{[r,s]} = pi_B P_A^r Z_B zeta, exact under
    the rational backend."""
    if r < 1:
        raise DomainError("r must be at least 1")
    pi_b = markov.stationary_distribution(b.P)
    z_b = markov.fundamental_matrix(b.P, pi_b)
    zeta = linalg.row_sums(markov.payoff_weighted(b.P, b.W))
    front = linalg.vec_mat(pi_b, linalg.mat_pow(a.P, r))
    return linalg.dot(front, linalg.mat_vec(z_b, zeta))


def capital_limit_closed(rho, r: int):
    """Closed form 3 a_r (1-rho)^3 (1+rho) / (2 (1+rho+rho^2)^2)."""
    a_r = games.capital_mixing_weight(r)
    a_r = a_r if isinstance(rho, (Fraction, int)) else float(a_r)
    return 3 * a_r * (1 - rho) ** 3 * (1 + rho) / (2 * (1 + rho + rho * rho) ** 2)


def history_limit_closed(kappa, lam):
    """Closed form (1+kappa)(lambda-kappa)(1-lambda) / (4 lambda
    (2+kappa+lambda)); independent of r."""
    return (1 + kappa) * (lam - kappa) * (1 - lam) / (4 * lam * (2 + kappa + lam))


@dataclass(frozen=True)
class ConvexityReport:
    family: str
    convex_along_segment: bool
    second_derivative: float  # at p0 (capital) or at t = 0 (history)


def capital_fair_curve_curvature(p0: float) -> float:
    """Second derivative of the fair-coin curve g(p0) = 1/(1 + sqrt(p0/(1-p0))).

    Positive curvature on (0, 1/2] is what makes chords from the fair
    coin (1/2, 1/2) dip into the winning side.
    """
    if not (0 < p0 < 1):
        raise DomainError(f"p0={p0} must lie in (0, 1)")
    t = p0 / (1 - p0)
    u = math.sqrt(t)
    dt = 1 / (1 - p0) ** 2
    ddt = 2 / (1 - p0) ** 3
    du = dt / (2 * u)
    ddu = ddt / (2 * u) - dt * dt / (4 * t * u)
    g1 = 1 + u
    return 2 * du * du / g1**3 - ddu / g1**2


def history_fair_segment_curvature(p0: float, p1: float, t: float) -> float:
    """h''(t) = -4 (p0+p1-1)(2 p1 - 1) / (1 - (2 p1 - 1) t)^3 along the
    segment from the fair coin (1/2, 1/2) to (p0, p1)."""
    return -4 * (p0 + p1 - 1) * (2 * p1 - 1) / (1 - (2 * p1 - 1) * t) ** 3


def fair_surface_convexity(family: str, probabilities) -> ConvexityReport:
    """Convexity diagnostic of the fair curve (capital, at p0) or the
    fair surface restricted to the segment toward (p0, p1) (history)."""
    if family == CAPITAL:
        (p0,) = probabilities
        second = capital_fair_curve_curvature(float(p0))
        return ConvexityReport(
            family=family, convex_along_segment=second > 0, second_derivative=second
        )
    if family == HISTORY:
        p0, p1 = (float(p) for p in probabilities)
        if not (0 < p0 < 1 and 0 < p1 < 1):
            raise DomainError("p0 and p1 must lie in (0, 1)")
        if not p0 * p1 < 1 - p1:
            raise DomainError("require p0*p1 < 1 - p1 for a valid fair point")
        samples = [history_fair_segment_curvature(p0, p1, t / 8) for t in range(9)]
        return ConvexityReport(
            family=family,
            convex_along_segment=all(v > 0 for v in samples),
            second_derivative=samples[0],
        )
    raise DomainError(f"unknown family {family!r}")


@dataclass(frozen=True)
class GridCell:
    params: dict             # parameter name -> Fraction
    mu: Fraction | None
    classification: str      # winning/losing/fair or "invalid-domain"
    region: int | None


@dataclass(frozen=True)
class RegionGrid:
    family: str
    mode: str                # "mixture" or "pattern"
    axes: dict               # axis name -> tuple of Fraction grid values
    cells: tuple             # row-major GridCell records


def _axis(lo: Fraction, hi: Fraction, resolution: int) -> tuple:
    lo, hi = Fraction(lo), Fraction(hi)
    if resolution == 1:
        # degenerate single-cell axis
        if lo != hi:
            raise DomainError("resolution 1 requires a single-point range")
        return (lo,)
    if resolution < 1:
        raise DomainError("resolution must be positive")
    if not lo < hi:
        raise DomainError("axis range must be increasing")
    step = (hi - lo) / (resolution - 1)
    return tuple(lo + i * step for i in range(resolution))


def _grid_cell(family, mode, gamma, rs, params) -> GridCell:
    region = None
    try:
        if family == CAPITAL:
            point = ParamPoint(family=CAPITAL, rho=params["rho"], gamma=gamma)
        else:
            point = ParamPoint(
                family=HISTORY, kappa=params["kappa"], lam=params["lambda"],
                gamma=gamma,
            )
            region = spectral.history_spectrum(
                params["kappa"], params["lambda"]
            ).region
        if mode == "mixture":
            mu = markov.mean_parameter(point.mixture_chain())
        else:
            r, s = rs
            a, b = point.pair()
            mu = patterns.pattern_mean_direct(a, b, r, s)
    except (DomainError, markov.ChainError, patterns.PatternError):
        return GridCell(params=params, mu=None, classification="invalid-domain",
                        region=None)
    return GridCell(params=params, mu=mu, classification=markov.classify(mu),
                    region=region)


def region_grid(family: str, ranges: dict, resolution: int, mode: str = "mixture",
                gamma=None, rs=None, workers: int = 1) -> RegionGrid:
    """Evaluate exact mu signs over a rational parameter grid.

    Capital grids run over rho; history grids over (kappa, lambda), with
    cells outside lambda < 1 + kappa marked invalid-domain rather than
    dropped, so the grid stays rectangular.  History cells carry the
    eigenvalue-discriminant region label 1..6.  Cells are independent;
    with workers > 1 they are evaluated in a process pool, and the output
    order is row-major regardless of execution order.
    """
    if mode == "mixture":
        if gamma is None:
            raise DomainError("mixture mode requires gamma")
    elif mode == "pattern":
        if rs is None:
            raise DomainError("pattern mode requires (r, s)")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if family == CAPITAL:
        axes = {"rho": _axis(*ranges["rho"], resolution)}
        cell_params = [{"rho": rho} for rho in axes["rho"]]
    elif family == HISTORY:
        axes = {
            "kappa": _axis(*ranges["kappa"], resolution),
            "lambda": _axis(*ranges["lambda"], resolution),
        }
        cell_params = [
            {"kappa": k, "lambda": l}
            for k in axes["kappa"]
            for l in axes["lambda"]
        ]
    else:
        raise DomainError(f"unknown family {family!r}")
    evaluate = functools.partial(_grid_cell, family, mode, gamma, rs)
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            cells = tuple(pool.map(evaluate, cell_params, chunksize=8))
    else:
        cells = tuple(map(evaluate, cell_params))
    return RegionGrid(family=family, mode=mode, axes=axes, cells=cells)


def grid_csv(grid: RegionGrid) -> str:
    buf = io.StringIO()
    param_names = list(grid.axes)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(param_names + ["mu_float", "mu_exact", "classification", "region"])
    for cell in grid.cells:
        row = [format_scalar(cell.params[name]) for name in param_names]
        if cell.mu is None:
            row += ["", "", cell.classification, ""]
        else:
            row += [
                repr(to_float(cell.mu)),
                format_scalar(cell.mu),
                cell.classification,
                "" if cell.region is None else str(cell.region),
            ]
        writer.writerow(row)
    return buf.getvalue()


def grid_json(grid: RegionGrid) -> str:
    payload = {
        "schema": "parrondo.region-grid/1",
        "family": grid.family,
        "mode": grid.mode,
        "axes": {k: [format_scalar(v) for v in vs] for k, vs in grid.axes.items()},
        "cells": [
            {
                "params": {k: format_scalar(v) for k, v in cell.params.items()},
                "mu_exact": None if cell.mu is None else format_scalar(cell.mu),
                "mu_float": None if cell.mu is None else to_float(cell.mu),
                "classification": cell.classification,
                "region": cell.region,
            }
            for cell in grid.cells
        ],
    }
    return json.dumps(payload, indent=2)
