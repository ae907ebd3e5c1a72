"""Exact and floating-point limit parameters for Parrondo-type
Markov-chain games: single games, random mixtures, and periodic
patterns, validated by cross-method oracles and Monte Carlo simulation.
"""

from .scalar import FAIR_TOLERANCE, ScalarParseError, format_scalar, parse_rational, to_float
from .markov import (
    ChainAnalysis,
    ChainDiagnosis,
    ChainError,
    GameChain,
    LimitParams,
    chain_analysis,
    classify,
    fundamental_matrix,
    limit_params,
    mean_parameter,
    stationary_distribution,
    validate_chain,
    variance_parameter,
)
from .games import (
    CAPITAL,
    HISTORY,
    DomainError,
    ParamPoint,
    capital_game_a,
    capital_game_b,
    capital_pair,
    history_game_a,
    history_game_b,
    history_pair,
    mixture,
)
from .patterns import (
    PatternError,
    ProductChain,
    build_product_chain,
    general_word_limits,
    pattern_limits_direct,
    pattern_limits_product,
    pattern_mean_direct,
    pattern_variance_direct,
)
from .spectral import (
    CapitalSpectrum,
    HistorySpectrum,
    SpectralError,
    bound_search_s0,
    bound_search_s1,
    capital_pattern_mean_closed,
    capital_spectrum,
    history_pattern_mean_closed,
    history_spectrum,
    verify_sign_at_point,
)
from .analysis import (
    FairnessThreshold,
    RegionGrid,
    fair_surface_convexity,
    fairness_epsilon,
    mixture_sign_capital,
    mixture_sign_history,
    pattern_limit,
    region_grid,
)
from .montecarlo import (
    SimConfig,
    SimResult,
    SimulationError,
    clt_check,
    config_for_chain,
    config_for_word,
    simulate,
    slln_check,
)

__version__ = "1.0.0"
