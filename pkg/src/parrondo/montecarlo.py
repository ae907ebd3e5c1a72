"""Seeded Monte Carlo play of single games, mixtures, and periodic words,
with law-of-large-numbers and central-limit diagnostics against the
analytic mean/variance.

Reproducibility contract: results are a pure function of (config,
master_seed).  Each replication owns an independent Philox stream keyed
by (master_seed, replication_index); Philox is counter-based, so streams
never overlap and the batching of replications cannot change what any
single replication draws.  One uniform is consumed per game (plus one up
front when the initial state is sampled from the stationary law), and
states are sampled by inverse CDF over float row probabilities derived
once from the exact matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from . import linalg, markov
from .markov import GameChain
from .patterns import normalize_word
from .scalar import to_float

RNG_ALGORITHM = "philox4x64"
KS_LEVEL = 0.001
MIN_CLT_REPLICATIONS = 200
_CHUNK = 8192


class SimulationError(ValueError):
    """Invalid simulation configuration or check preconditions."""


@dataclass(frozen=True)
class SimConfig:
    """A reproducible simulation request.

    phases holds one chain per letter of the periodic schedule; a single
    game or mixture is a one-letter schedule.  initial_state is a state
    index or "stationary".
    """

    phases: tuple            # tuple[GameChain, ...]
    schedule: str            # label, e.g. "B", "mixture", or the word
    n_games: int
    replications: int = 1
    master_seed: int = 0
    initial_state: object = 0

    def __post_init__(self):
        if self.n_games < 1:
            raise SimulationError("n_games must be at least 1")
        if self.replications < 1:
            raise SimulationError("replications must be at least 1")
        if not self.phases:
            raise SimulationError("at least one phase chain is required")
        t = self.phases[0].size
        if any(c.size != t for c in self.phases):
            raise SimulationError("phase chains must share a state space")
        if self.initial_state != "stationary":
            if not isinstance(self.initial_state, int) or not (
                0 <= self.initial_state < t
            ):
                raise SimulationError(f"invalid initial state {self.initial_state!r}")


def config_for_chain(chain: GameChain, n_games: int, replications: int = 1,
                     master_seed: int = 0, initial_state=0,
                     label: str = "single") -> SimConfig:
    return SimConfig(phases=(chain,), schedule=label, n_games=n_games,
                     replications=replications, master_seed=master_seed,
                     initial_state=initial_state)


def config_for_word(a: GameChain, b: GameChain, word: str, n_games: int,
                    replications: int = 1, master_seed: int = 0,
                    initial_state=0) -> SimConfig:
    w = normalize_word(word)
    phases = tuple(a if ch == "A" else b for ch in w)
    return SimConfig(phases=phases, schedule=w, n_games=n_games,
                     replications=replications, master_seed=master_seed,
                     initial_state=initial_state)


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    finals: tuple                     # per-replication cumulative payoff
    mean_per_game: float
    var_per_game: float | None        # between-replication estimate; None if 1 rep
    standardized: tuple | None        # (S_n - n mu) / sqrt(n sigma2) when supplied
    algorithm: str = RNG_ALGORITHM
    max_abs_payoff: float = 1.0


def _float_matrix(m) -> np.ndarray:
    return np.array([[to_float(x) for x in row] for row in m], dtype=np.float64)


def _cumulative_rows(P: np.ndarray) -> np.ndarray:
    cum = np.cumsum(P, axis=1)
    cum[:, -1] = 1.0  # guard the inverse CDF against rounding
    return cum


def _stationary_cdf(phases) -> np.ndarray:
    composite = phases[0].P
    for c in phases[1:]:
        composite = linalg.mat_mul(composite, c.P)
    pi = markov.stationary_distribution(composite)
    cdf = np.cumsum(np.array([to_float(x) for x in pi], dtype=np.float64))
    cdf[-1] = 1.0
    return cdf


def simulate(config: SimConfig, mu=None, sigma2=None) -> SimResult:
    """Play the schedule for n_games steps in each replication.

    Deterministic given (config.master_seed, config); replications are
    vectorized but each consumes only its own Philox stream.
    """
    L = len(config.phases)
    cums = [_cumulative_rows(_float_matrix(c.P)) for c in config.phases]
    pays = [_float_matrix(c.W) for c in config.phases]
    n, reps = config.n_games, config.replications
    gens = [
        np.random.Generator(np.random.Philox(key=[config.master_seed, r]))
        for r in range(reps)
    ]
    if config.initial_state == "stationary":
        cdf = _stationary_cdf(config.phases)
        u0 = np.array([g.random() for g in gens])
        state = (u0[:, None] >= cdf[None, :]).sum(axis=1).astype(np.int64)
    else:
        state = np.full(reps, config.initial_state, dtype=np.int64)
    totals = np.zeros(reps, dtype=np.float64)
    buf = np.empty((reps, _CHUNK), dtype=np.float64)
    done = 0
    while done < n:
        chunk = min(_CHUNK, n - done)
        for r, g in enumerate(gens):
            buf[r, :chunk] = g.random(chunk)
        for i in range(chunk):
            phase = (done + i) % L
            rows = cums[phase][state]
            nxt = (buf[:, i, None] >= rows).sum(axis=1)
            totals += pays[phase][state, nxt]
            state = nxt
        done += chunk
    finals = tuple(float(x) for x in totals)
    mean_per_game = float(totals.sum()) / (n * reps)
    var_per_game = (
        float(np.var(totals, ddof=1)) / n if reps >= 2 else None
    )
    standardized = None
    if mu is not None and sigma2 is not None and to_float(sigma2) > 0:
        m, s2 = to_float(mu), to_float(sigma2)
        standardized = tuple(
            (x - n * m) / (n * s2) ** 0.5 for x in finals
        )
    max_w = max(
        abs(to_float(x)) for c in config.phases for row in c.W for x in row
    )
    return SimResult(config=config, finals=finals, mean_per_game=mean_per_game,
                     var_per_game=var_per_game, standardized=standardized,
                     max_abs_payoff=max_w)


@dataclass(frozen=True)
class SllnReport:
    passed: bool
    z: float                 # deviation in units of the analytic standard error
    deviation: float
    threshold: float


def slln_check(result: SimResult, mu, sigma2) -> SllnReport:
    """Pass iff the pooled mean per game is within 5 analytic standard
    errors of mu.  A zero analytic variance means the walk is bounded;
    then the deviation must vanish at rate 1/n or the inputs are wrong."""
    n_total = result.config.n_games * result.config.replications
    deviation = abs(result.mean_per_game - to_float(mu))
    if to_float(sigma2) > 0:
        se = (to_float(sigma2) / n_total) ** 0.5
        threshold = 5 * se
        return SllnReport(passed=deviation <= threshold,
                          z=deviation / se, deviation=deviation,
                          threshold=threshold)
    t = result.config.phases[0].size
    threshold = 2 * t * result.max_abs_payoff / result.config.n_games
    if deviation > threshold:
        raise SimulationError(
            "sigma2 = 0 supplied but the observed drift exceeds any bounded walk"
        )
    return SllnReport(passed=True, z=0.0, deviation=deviation, threshold=threshold)


@dataclass(frozen=True)
class CltReport:
    passed: bool
    ks_stat: float
    ks_critical: float       # 0.1% level for this replication count
    var_ratio: float


def clt_check(result: SimResult, mu, sigma2) -> CltReport:
    """Kolmogorov-Smirnov fit of the standardized per-replication totals
    against N(0,1), at the 0.1% level, plus a variance-ratio band."""
    if to_float(sigma2) <= 0:
        raise SimulationError("clt_check requires sigma2 > 0")
    reps = result.config.replications
    if reps < MIN_CLT_REPLICATIONS:
        raise SimulationError(
            f"clt_check requires at least {MIN_CLT_REPLICATIONS} replications"
        )
    n, m, s2 = result.config.n_games, to_float(mu), to_float(sigma2)
    z = np.array([(x - n * m) / (n * s2) ** 0.5 for x in result.finals])
    ks = float(stats.kstest(z, "norm").statistic)
    critical = float(special.kolmogi(KS_LEVEL)) / reps**0.5
    var_ratio = float(np.var(z, ddof=1))
    return CltReport(passed=ks < critical and 0.9 <= var_ratio <= 1.1,
                     ks_stat=ks, ks_critical=critical, var_ratio=var_ratio)
