"""Zero-sum secret-sharing game between two legitimate users and an eavesdropper."""

from .channel import ChannelModel, ChannelTriple, GeometryParams, triple_from_model, validate_assumption
from .game import EveStrategy, GameSpec, LegitStrategy, UtilityMatrix, build_utility_matrix, legit_strategies
from .solver import (
    Equilibrium,
    GameClass,
    classify,
    find_pure_equilibria,
    game_value,
    solve_algorithm1,
    solve_support_enumeration,
    verify_equilibrium,
)

__version__ = "0.1.0"
