"""Exact equilibrium solvers for simplified poker games."""

from .continuous import CutPoints, three_continuous, three_optimal_bet, vn_continuous, vn_optimal_bet
from .estimators import ContinuousPoker, NewmanPoker, ThreePlayerPoker, VonNeumannPoker
from .game_model import GameParams, ThreeStrategyProfile
from .lp_core import LinearProgram, solve_lp
from .mixed_ne import vn_fast, vn_slow
from .newman import newman_mixed, saturation_scan
from .pure_ne import build_paytable, enumerate_pure_ne, restricted_value_scan
from .three_player import three_fast_ne
from .verify import epsilon_ne_newman, epsilon_ne_three, epsilon_ne_two, monte_carlo

__version__ = "0.1.0"

__all__ = [
    "ContinuousPoker",
    "CutPoints",
    "GameParams",
    "LinearProgram",
    "NewmanPoker",
    "ThreePlayerPoker",
    "ThreeStrategyProfile",
    "VonNeumannPoker",
    "build_paytable",
    "enumerate_pure_ne",
    "epsilon_ne_newman",
    "epsilon_ne_three",
    "epsilon_ne_two",
    "monte_carlo",
    "newman_mixed",
    "restricted_value_scan",
    "saturation_scan",
    "solve_lp",
    "three_continuous",
    "three_fast_ne",
    "three_optimal_bet",
    "vn_continuous",
    "vn_fast",
    "vn_optimal_bet",
    "vn_slow",
]
