"""Exact critical threshold values of Boolean, simple and complete simple games."""

from .core_games import (
    BooleanGame,
    Coalition,
    CompleteGameForm,
    SimpleGame,
    WeightedRepresentation,
    parse_game,
    format_game,
)
from .threshold import mu_boolean, mu_complete, mu_simple, cost_of_stability
from .extremal_ilp import max_critical_threshold
from .spectrum import spectrum

__all__ = [
    "BooleanGame", "Coalition", "CompleteGameForm", "SimpleGame", "WeightedRepresentation",
    "parse_game", "format_game", "mu_boolean", "mu_complete", "mu_simple", "cost_of_stability",
    "max_critical_threshold", "spectrum",
]
__version__ = "0.1.0"
