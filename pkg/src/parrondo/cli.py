"""Command-line front end.

Subcommands cover single-game/mixture analysis, pattern analysis by both
methods, eigenvalue spectra, sign-certificate bounds, point verification,
the full one-digit-fraction sweep, region grids, large-s limits, the
winning-bias threshold, Monte Carlo simulation, and a table of built-in
reference constants.  Output is JSON by default (fixed key order, exact
rationals as "p/q" text) with CSV/plain variants where tabular.

Exit codes: 0 on success with all requested checks passing, 2 for usage
errors, 3 for domain violations or failed computations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__, analysis, games, markov, montecarlo, patterns, reference, spectral
from .games import CAPITAL, HISTORY, DomainError, ParamPoint
from .markov import ChainError
from .patterns import PatternError
from .scalar import ScalarParseError, format_scalar, parse_rational, to_float
from .spectral import SpectralError
from .montecarlo import SimulationError

SCHEMA = "parrondo.cli/1"


def _rational(text: str) -> Fraction:
    return parse_rational(text)


def _scalar_out(x, backend: str = "exact"):
    if x is None:
        return None
    if backend == "exact" and isinstance(x, (Fraction, int)):
        return format_scalar(x)
    return to_float(x)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "plain":
        for key, value in payload.items():
            print(f"{key}: {value}")
    else:
        print(json.dumps(payload, indent=2))


def _complex_out(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _point(args, need_gamma: bool = False) -> ParamPoint:
    eps = args.eps if isinstance(args.eps, Fraction) else parse_rational(args.eps)
    gamma = getattr(args, "gamma", None)
    if need_gamma and gamma is None:
        raise DomainError("this command requires --gamma")
    if args.family == CAPITAL:
        if args.rho is None:
            raise DomainError("capital family requires --rho")
        return ParamPoint(family=CAPITAL, rho=args.rho, gamma=gamma, eps=eps)
    if args.kappa is None or args.lam is None:
        raise DomainError("history family requires --kappa and --lambda")
    return ParamPoint(family=HISTORY, kappa=args.kappa, lam=args.lam,
                      gamma=gamma, eps=eps)


def _point_params(point: ParamPoint) -> dict:
    out = {"family": point.family}
    if point.family == CAPITAL:
        out["rho"] = format_scalar(point.rho)
    else:
        out["kappa"] = format_scalar(point.kappa)
        out["lambda"] = format_scalar(point.lam)
    if point.gamma is not None:
        out["gamma"] = format_scalar(point.gamma)
    out["eps"] = format_scalar(point.eps)
    return out


def _to_float_point(point: ParamPoint) -> ParamPoint:
    return ParamPoint(
        family=point.family,
        rho=None if point.rho is None else to_float(point.rho),
        kappa=None if point.kappa is None else to_float(point.kappa),
        lam=None if point.lam is None else to_float(point.lam),
        gamma=None if point.gamma is None else to_float(point.gamma),
        eps=to_float(point.eps),
    )


def _add_family_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=(CAPITAL, HISTORY))
    p.add_argument("--rho", type=_rational, help="capital parameter, rational p/q")
    p.add_argument("--kappa", type=_rational, help="history parameter, rational p/q")
    p.add_argument("--lambda", dest="lam", type=_rational,
                   help="history parameter, rational p/q")
    p.add_argument("--eps", type=_rational, default=Fraction(0),
                   help="bias parameter, rational p/q (default 0)")


def _add_backend(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=("exact", "float"), default="exact")


def _add_format(p: argparse.ArgumentParser, choices=("json", "plain")) -> None:
    p.add_argument("--format", choices=choices, default=choices[0])


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_analyze(args) -> int:
    point = _point(args)
    if args.backend == "float":
        point = _to_float_point(point)
    game = args.game or ("mix" if point.gamma is not None else "B")
    if game == "A":
        chain = point.game_a()
    elif game == "B":
        chain = point.game_b()
    else:
        chain = point.mixture_chain()
    lp = markov.limit_params(chain)
    payload = {
        "schema": SCHEMA,
        "command": "analyze",
        "params": _point_params(point) | {"game": game},
        "backend": args.backend,
        "mu": _scalar_out(lp.mu, args.backend),
        "sigma2": _scalar_out(lp.sigma2, args.backend),
        "classification": lp.classification,
    }
    _emit(payload, args.format)
    return 0


def _cmd_pattern(args) -> int:
    point = _point(args)
    if args.backend == "float":
        point = _to_float_point(point)
    if args.word:
        word = patterns.normalize_word(args.word)
    elif args.r is not None and args.s is not None:
        word = patterns.word_for_pattern(args.r, args.s)
    else:
        raise DomainError("provide either --word or both --r and --s")
    a, b = point.pair()
    product = patterns.general_word_limits(a, b, word)
    rs = patterns.word_rs(word)
    direct = None
    note = None
    if rs is None:
        note = "direct method applies only to words of the form A^r B^s"
    else:
        try:
            direct = patterns.pattern_limits_direct(a, b, *rs)
        except PatternError as exc:
            note = str(exc)
    payload = {
        "schema": SCHEMA,
        "command": "pattern",
        "params": _point_params(point) | {"word": word},
        "backend": args.backend,
        "product": {
            "mu": _scalar_out(product.mu, args.backend),
            "sigma2": _scalar_out(product.sigma2, args.backend),
            "classification": product.classification,
        },
        "direct": None if direct is None else {
            "mu": _scalar_out(direct.mu, args.backend),
            "sigma2": _scalar_out(direct.sigma2, args.backend),
            "classification": direct.classification,
        },
        "agreement": None if direct is None else {
            "mu_delta": _scalar_out(abs(direct.mu - product.mu), args.backend),
            "sigma2_delta": _scalar_out(abs(direct.sigma2 - product.sigma2),
                                        args.backend),
        },
        "note": note,
    }
    _emit(payload, args.format)
    return 0


def _cmd_spectrum(args) -> int:
    if args.family == CAPITAL:
        if args.rho is None:
            raise DomainError("capital family requires --rho")
        spec = spectral.capital_spectrum(to_float(args.rho))
        payload = {
            "schema": SCHEMA,
            "command": "spectrum",
            "params": {"family": CAPITAL, "rho": format_scalar(args.rho)},
            "backend": "float",
            "scale": spec.scale,
            "eigenvalues": [spec.e1, spec.e2],
            "degenerate": spec.degenerate,
        }
    else:
        if args.kappa is None or args.lam is None:
            raise DomainError("history family requires --kappa and --lambda")
        spec = spectral.history_spectrum(to_float(args.kappa), to_float(args.lam))
        payload = {
            "schema": SCHEMA,
            "command": "spectrum",
            "params": {"family": HISTORY, "kappa": format_scalar(args.kappa),
                       "lambda": format_scalar(args.lam)},
            "backend": "float",
            "cubic": list(spec.cubic),
            "alpha": spec.alpha,
            "beta": spec.beta,
            "discriminant": spec.discriminant,
            "eigenvalues": [_complex_out(spec.e1), _complex_out(spec.e2),
                            _complex_out(spec.e3)],
            "region": spec.region,
            "degenerate": spec.degenerate,
        }
    _emit(payload, args.format)
    return 0


def _cmd_bounds(args) -> int:
    spec = spectral.history_spectrum(to_float(args.kappa), to_float(args.lam))
    coeffs = spectral.history_coefficients(args.kappa, args.lam)
    payload = {
        "schema": SCHEMA,
        "command": "bounds",
        "params": {"family": HISTORY, "kappa": format_scalar(args.kappa),
                   "lambda": format_scalar(args.lam)},
        "backend": "float",
        "region": spec.region,
        "constant_sign": 1 if coeffs.constant > 0 else -1,
        "s0": spectral.bound_search_s0(args.kappa, args.lam),
        "s1": spectral.bound_search_s1(args.kappa, args.lam),
    }
    _emit(payload, args.format)
    return 0


def _cmd_verify_point(args) -> int:
    reports = [
        spectral.verify_sign_at_point(args.kappa, args.lam, mode)
        for mode in (spectral.R_GE_2, spectral.R_EQ_1)
    ]
    payload = {
        "schema": SCHEMA,
        "command": "verify-point",
        "params": {"family": HISTORY, "kappa": format_scalar(args.kappa),
                   "lambda": format_scalar(args.lam)},
        "constant_sign": reports[0].constant_sign,
        "checks": [
            {
                "mode": rep.mode,
                "bound_index": rep.bound_index,
                "checked_prefix_ok": rep.checked_prefix_ok,
                "exceptions": list(rep.exceptions),
            }
            for rep in reports
        ],
        "all_ok": all(rep.checked_prefix_ok for rep in reports),
    }
    _emit(payload, args.format)
    return 0 if payload["all_ok"] else 1


def _sweep_case(case) -> dict:
    kappa, lam = case
    spec = spectral.history_spectrum(kappa, lam)
    rep_e = spectral.verify_sign_at_point(kappa, lam, spectral.R_GE_2)
    rep_f = spectral.verify_sign_at_point(kappa, lam, spectral.R_EQ_1)
    return {
        "kappa": format_scalar(kappa),
        "lambda": format_scalar(lam),
        "region": spec.region,
        "constant_sign": rep_e.constant_sign,
        "s0": rep_e.bound_index,
        "s1": rep_f.bound_index,
        "prefix_ok_r_ge_2": rep_e.checked_prefix_ok,
        "prefix_ok_r_eq_1": rep_f.checked_prefix_ok,
        "exceptions": len(rep_e.exceptions) + len(rep_f.exceptions),
    }


def sweep_cases() -> list:
    """All one-digit-fraction parameter points with a defined sign
    certificate: lambda < 1 + kappa, kappa != lambda, lambda != 1,
    kappa*lambda != 1."""
    K = sorted({Fraction(k, l) for k in range(1, 10) for l in range(1, 10)})
    return [
        (k, l)
        for k in K
        for l in K
        if l < 1 + k and k != l and l != 1 and k * l != 1
    ]


def _cmd_sweep_k(args) -> int:
    cases = sweep_cases()
    stop = len(cases) if args.stop is None else min(args.stop, len(cases))
    start = max(args.start, 0)
    out = open(args.output, "w") if args.output else sys.stdout
    workers = args.threads
    header = ("index,kappa,lambda,region,constant_sign,s0,s1,"
              "prefix_ok_r_ge_2,prefix_ok_r_eq_1,exceptions")
    exceptions = 0
    try:
        print(header, file=out)
        rows = map(_sweep_case, cases[start:stop])
        if workers > 1:
            import concurrent.futures

            pool = concurrent.futures.ProcessPoolExecutor(max_workers=workers)
            rows = pool.map(_sweep_case, cases[start:stop], chunksize=4)
        for index, row in enumerate(rows, start=start):
            exceptions += row["exceptions"]
            print(
                f"{index},{row['kappa']},{row['lambda']},{row['region']},"
                f"{row['constant_sign']},{row['s0']},{row['s1']},"
                f"{row['prefix_ok_r_ge_2']},{row['prefix_ok_r_eq_1']},"
                f"{row['exceptions']}",
                file=out,
            )
        if workers > 1:
            pool.shutdown()
    finally:
        if args.output:
            out.close()
    return 0 if exceptions == 0 else 1


def _cmd_region(args) -> int:
    gamma = args.gamma
    rs = (args.r, args.s) if args.r is not None and args.s is not None else None
    mode = "pattern" if rs is not None else "mixture"
    if args.family == CAPITAL:
        ranges = {"rho": (args.rho_min, args.rho_max)}
        if None in ranges["rho"]:
            raise DomainError("capital region requires --rho-min and --rho-max")
    else:
        ranges = {
            "kappa": (args.kappa_min, args.kappa_max),
            "lambda": (args.lambda_min, args.lambda_max),
        }
        if None in ranges["kappa"] or None in ranges["lambda"]:
            raise DomainError(
                "history region requires --kappa-min/--kappa-max and "
                "--lambda-min/--lambda-max"
            )
    grid = analysis.region_grid(args.family, ranges, args.resolution, mode=mode,
                                gamma=gamma, rs=rs, workers=args.threads)
    if args.format == "csv":
        sys.stdout.write(analysis.grid_csv(grid))
    else:
        sys.stdout.write(analysis.grid_json(grid) + "\n")
    return 0


def _cmd_limit(args) -> int:
    point = _point(args)
    a, b = point.pair()
    value = analysis.pattern_limit(a, b, args.r)
    if point.family == CAPITAL:
        closed = analysis.capital_limit_closed(point.rho, args.r)
    else:
        closed = analysis.history_limit_closed(point.kappa, point.lam)
    payload = {
        "schema": SCHEMA,
        "command": "limit",
        "params": _point_params(point) | {"r": args.r},
        "backend": "exact",
        "limit": _scalar_out(value),
        "closed_form": _scalar_out(closed),
        "match": value == closed,
        "limit_float": to_float(value),
    }
    _emit(payload, args.format)
    return 0 if payload["match"] else 1


def _cmd_epsilon0(args) -> int:
    point = _point(args)
    if args.r is not None and args.s is not None:
        target = (args.r, args.s)
        target_name = f"pattern[{args.r},{args.s}]"
    else:
        if point.gamma is None:
            raise DomainError("provide --gamma for a mixture or --r/--s for a pattern")
        target = "mixture"
        target_name = "mixture"
    threshold = analysis.fairness_epsilon(point, target)
    payload = {
        "schema": SCHEMA,
        "command": "epsilon0",
        "params": _point_params(point) | {"target": target_name},
        "backend": "exact",
        "eps0": threshold.eps0,
        "bracket_lower": format_scalar(threshold.lower),
        "bracket_upper": None if threshold.upper is None
        else format_scalar(threshold.upper),
        "positive_everywhere": threshold.positive_everywhere,
    }
    _emit(payload, args.format)
    return 0


def _cmd_simulate(args) -> int:
    point = _point(args)
    if args.word or (args.r is not None and args.s is not None):
        word = patterns.normalize_word(args.word) if args.word \
            else patterns.word_for_pattern(args.r, args.s)
        a, b = point.pair()
        config = montecarlo.config_for_word(
            a, b, word, n_games=args.n, replications=args.replications,
            master_seed=args.seed, initial_state=args.initial_state,
        )
        lp = patterns.general_word_limits(a, b, word)
        label = word
    else:
        game = args.game or ("mix" if point.gamma is not None else "B")
        if game == "A":
            chain = point.game_a()
        elif game == "B":
            chain = point.game_b()
        else:
            chain = point.mixture_chain()
        config = montecarlo.config_for_chain(
            chain, n_games=args.n, replications=args.replications,
            master_seed=args.seed, initial_state=args.initial_state, label=game,
        )
        lp = markov.limit_params(chain)
        label = game
    result = montecarlo.simulate(config, mu=lp.mu, sigma2=lp.sigma2)
    slln = montecarlo.slln_check(result, lp.mu, lp.sigma2)
    clt = None
    if args.replications >= montecarlo.MIN_CLT_REPLICATIONS and to_float(lp.sigma2) > 0:
        clt = montecarlo.clt_check(result, lp.mu, lp.sigma2)
    payload = {
        "schema": SCHEMA,
        "command": "simulate",
        "params": _point_params(point) | {
            "game": label, "n_games": args.n, "replications": args.replications,
            "master_seed": args.seed, "initial_state": args.initial_state,
        },
        "rng": montecarlo.RNG_ALGORITHM,
        "analytic": {
            "mu": format_scalar(lp.mu),
            "sigma2": format_scalar(lp.sigma2),
            "mu_float": to_float(lp.mu),
            "sigma2_float": to_float(lp.sigma2),
        },
        "mean_per_game": result.mean_per_game,
        "var_per_game": result.var_per_game,
        "slln": {
            "passed": slln.passed, "z": slln.z,
            "deviation": slln.deviation, "threshold": slln.threshold,
        },
        "clt": None if clt is None else {
            "passed": clt.passed, "ks_stat": clt.ks_stat,
            "ks_critical": clt.ks_critical, "var_ratio": clt.var_ratio,
        },
    }
    _emit(payload, args.format)
    ok = slln.passed and (clt is None or clt.passed)
    return 0 if ok else 1


def _cmd_paper_table(args) -> int:
    rows = reference.reference_rows()
    if args.format == "csv":
        print("label,kind,expected,computed,match")
        for row in rows:
            print(f"{row.label},{row.kind},{format_scalar(row.expected)},"
                  f"{format_scalar(row.computed)},{row.match}")
    elif args.format == "plain":
        for row in rows:
            status = "ok" if row.match else "MISMATCH"
            print(f"{status:8s} {row.label}: computed {format_scalar(row.computed)}"
                  f" expected {format_scalar(row.expected)}")
    else:
        payload = {
            "schema": SCHEMA,
            "command": "paper-table",
            "rows": [
                {
                    "label": row.label,
                    "kind": row.kind,
                    "expected": format_scalar(row.expected),
                    "computed": format_scalar(row.computed),
                    "match": row.match,
                }
                for row in rows
            ],
            "all_match": all(row.match for row in rows),
        }
        _emit(payload, "json")
    return 0 if all(row.match for row in rows) else 1


# ---------------------------------------------------------------------------
# parser assembly


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("PARRONDO_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parrondo",
        description="Limit parameters of Parrondo-type games: exact rational "
                    "and floating-point analysis, sign certificates, and "
                    "seeded Monte Carlo validation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="single game or mixture limit parameters")
    _add_family_arguments(p)
    p.add_argument("--gamma", type=_rational, help="mixture weight on game A")
    p.add_argument("--game", choices=("A", "B", "mix"))
    _add_backend(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("pattern", help="periodic pattern limit parameters, both methods")
    _add_family_arguments(p)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--word", help="explicit play word over A/B, e.g. AABB")
    _add_backend(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_pattern)

    p = sub.add_parser("spectrum", help="eigenvalue data of game B (float backend)")
    _add_family_arguments(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("bounds", help="sign-certificate bound indices s0 and s1")
    p.add_argument("--kappa", type=_rational, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    _add_format(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("verify-point",
                       help="certify pattern-mean signs at one history point")
    p.add_argument("--kappa", type=_rational, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    _add_format(p)
    p.set_defaults(handler=_cmd_verify_point)

    p = sub.add_parser("sweep-k",
                       help="run the sign certificate over all one-digit "
                            "fraction pairs (long job; resumable by range)")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--stop", type=int, default=None)
    p.add_argument("--output", help="CSV path (default stdout)")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(handler=_cmd_sweep_k)

    p = sub.add_parser("region", help="exact sign grid over a parameter range")
    p.add_argument("--family", required=True, choices=(CAPITAL, HISTORY))
    p.add_argument("--gamma", type=_rational)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--rho-min", type=_rational)
    p.add_argument("--rho-max", type=_rational)
    p.add_argument("--kappa-min", type=_rational)
    p.add_argument("--kappa-max", type=_rational)
    p.add_argument("--lambda-min", type=_rational)
    p.add_argument("--lambda-max", type=_rational)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    _add_format(p, choices=("csv", "json"))
    p.set_defaults(handler=_cmd_region)

    p = sub.add_parser("limit", help="large-s limit of the per-cycle pattern mean")
    _add_family_arguments(p)
    p.add_argument("--r", type=int, required=True)
    _add_format(p)
    p.set_defaults(handler=_cmd_limit)

    p = sub.add_parser("epsilon0", help="largest winning bias by exact bisection")
    _add_family_arguments(p)
    p.add_argument("--gamma", type=_rational)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    _add_format(p)
    p.set_defaults(handler=_cmd_epsilon0)

    p = sub.add_parser("simulate", help="seeded Monte Carlo with SLLN/CLT checks")
    _add_family_arguments(p)
    p.add_argument("--gamma", type=_rational)
    p.add_argument("--game", choices=("A", "B", "mix"))
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--word")
    p.add_argument("--n", type=int, required=True, help="games per replication")
    p.add_argument("--replications", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial-state", dest="initial_state",
                   type=lambda v: v if v == "stationary" else int(v), default=0)
    _add_format(p)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("paper-table",
                       help="recompute the built-in reference constants and "
                            "report a match boolean per row")
    _add_format(p, choices=("json", "csv", "plain"))
    p.set_defaults(handler=_cmd_paper_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DomainError, ChainError, PatternError, SpectralError,
            SimulationError, ScalarParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
