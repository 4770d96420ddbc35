"""Boolean observation games.

Players privately observe the values of their own variables and strategically
reveal them to chosen other players; goals are epistemic formulas about the
resulting knowledge.  The package provides the goal logic and its fragments,
the game machinery (uniform strategies, expected outcomes, four outcome
relations), exact equilibrium verification and search, constructive
equilibrium algorithms for structured goal classes, translations to and from
Boolean games, and an explicit-model oracle for cross-validating the
semantics.
"""

from . import files, game, kripke, logic, randgen, solver, translate
from .game import (Budget, BudgetExceeded, ObservationGame, UniformProfile,
                   UniformStrategy, lift_global)
from .logic import Formula, parse_formula, pretty
from .translate import BooleanGame

__all__ = [
    "Budget", "BudgetExceeded", "BooleanGame", "Formula", "ObservationGame",
    "UniformProfile", "UniformStrategy", "files", "game", "kripke", "lift_global",
    "logic", "parse_formula", "pretty", "randgen", "solver", "translate",
]

__version__ = "0.1.0"


def bundled_game_path(name):
    """Path of a bundled example game file, e.g. ``pennies.json``."""
    from importlib.resources import files as _files
    return str(_files("obsgames").joinpath("data", "games", name))
