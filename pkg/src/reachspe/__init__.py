"""Constrained subgame perfect equilibria in quantitative reachability games."""
from importlib import resources

from .game import INF, Game, GameError, Lasso, cost_of_lasso, suffix_cost, validate_game
from .extended import ExtendedGame, ExtVertex, build_extended, lift_lasso, project_lasso, region_order
from .labeling import initial_labeling, is_lambda_consistent, run_fixpoint, update_labeling
from .counter import CounterGraph, CounterVertex

__all__ = [
    "INF", "CounterGraph", "CounterVertex", "ExtVertex", "ExtendedGame", "Game", "GameError", "Lasso",
    "build_extended", "cost_of_lasso", "demo_game", "initial_labeling", "is_lambda_consistent",
    "lift_lasso", "project_lasso", "region_order", "run_fixpoint", "suffix_cost", "update_labeling",
    "validate_game",
]


def demo_game() -> Game:
    """The two-player, eight-vertex example game shipped with the package."""
    return Game.from_json(resources.files(__package__).joinpath("data/demo.json").read_text())


__version__ = "0.1.0"
