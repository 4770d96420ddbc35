"""Seeded random games, goals and profiles for the randomized test suites.

Formula shape is drawn with geometric depth (each node continues with a fixed
probability until the depth cap), connectives uniformly at random.  Game
generators that promise a type or fragment restriction use rejection
sampling: goals are redrawn until the restriction holds.
"""

from __future__ import annotations

import random

from . import game as gm
from . import logic
from .game import UniformProfile, UniformStrategy, class_keys, enumerate_strategies
from .translate import BooleanGame

_CONTINUE = 0.7


def _literal(rng, names):
    a = logic.Atom(rng.choice(names))
    return logic.Not(a) if rng.random() < 0.5 else a


def random_boolean_formula(rng, names, max_depth=4):
    if max_depth == 0 or rng.random() > _CONTINUE:
        return _literal(rng, names)
    op = rng.choice(("and", "or", "not", "implies", "iff"))
    if op == "not":
        return logic.Not(random_boolean_formula(rng, names, max_depth - 1))
    left = random_boolean_formula(rng, names, max_depth - 1)
    right = random_boolean_formula(rng, names, max_depth - 1)
    cls = {"and": logic.And, "or": logic.Or,
           "implies": logic.Implies, "iff": logic.Iff}[op]
    return cls(left, right)


def random_kw_formula(rng, sig, max_depth=4):
    """A knowing-whether formula; constituents avoid owners reading their own
    variables (those would be trivially true)."""
    def constituent():
        name = rng.choice(sig.variables)
        readers = [j for j in range(1, sig.n + 1) if j != sig.owner[name]]
        node = logic.Kw(rng.choice(readers), logic.Atom(name))
        return logic.Not(node) if rng.random() < 0.5 else node

    if max_depth == 0 or rng.random() > _CONTINUE:
        return constituent()
    op = rng.choice(("and", "or", "not", "implies", "iff"))
    if op == "not":
        return logic.Not(random_kw_formula(rng, sig, max_depth - 1))
    left = random_kw_formula(rng, sig, max_depth - 1)
    right = random_kw_formula(rng, sig, max_depth - 1)
    cls = {"and": logic.And, "or": logic.Or,
           "implies": logic.Implies, "iff": logic.Iff}[op]
    return cls(left, right)


def random_general_formula(rng, sig, max_depth=4):
    """A formula of the full goal language, modalities included."""
    if max_depth == 0 or rng.random() > _CONTINUE:
        return _literal(rng, sig.variables)
    op = rng.choice(("and", "or", "not", "implies", "iff", "K", "Kh", "Kw"))
    if op in ("K", "Kh", "Kw"):
        player = rng.randrange(1, sig.n + 1)
        sub = random_general_formula(rng, sig, max_depth - 1)
        return {"K": logic.K, "Kh": logic.KHat, "Kw": logic.Kw}[op](player, sub)
    if op == "not":
        return logic.Not(random_general_formula(rng, sig, max_depth - 1))
    left = random_general_formula(rng, sig, max_depth - 1)
    right = random_general_formula(rng, sig, max_depth - 1)
    cls = {"and": logic.And, "or": logic.Or,
           "implies": logic.Implies, "iff": logic.Iff}[op]
    return cls(left, right)


def random_positive_formula(rng, sig, max_depth=3):
    """A formula of the positive fragment (literals, and, or, K)."""
    if max_depth == 0 or rng.random() > _CONTINUE:
        return _literal(rng, sig.variables)
    op = rng.choice(("and", "or", "K"))
    if op == "K":
        return logic.K(rng.randrange(1, sig.n + 1),
                       random_positive_formula(rng, sig, max_depth - 1))
    left = random_positive_formula(rng, sig, max_depth - 1)
    right = random_positive_formula(rng, sig, max_depth - 1)
    return (logic.And if op == "and" else logic.Or)(left, right)


def _guarded_body(rng, sig, owner, max_depth):
    """Bodies mix plain literals with knowing-whether constituents so all
    four assertion polarities can occur."""
    def leaf():
        if rng.random() < 0.5:
            return _literal(rng, sig.variables)
        name = rng.choice(sig.variables)
        readers = [j for j in range(1, sig.n + 1) if j != sig.owner[name]]
        node = logic.Kw(rng.choice(readers), logic.Atom(name))
        return logic.Not(node) if rng.random() < 0.5 else node

    if max_depth == 0 or rng.random() > _CONTINUE:
        return leaf()
    op = rng.choice(("and", "or", "and", "or", "implies"))
    if op == "implies":
        return logic.Implies(_guarded_body(rng, sig, owner, max_depth - 1),
                             _guarded_body(rng, sig, owner, max_depth - 1))
    left = _guarded_body(rng, sig, owner, max_depth - 1)
    right = _guarded_body(rng, sig, owner, max_depth - 1)
    return (logic.And if op == "and" else logic.Or)(left, right)


def _variable_layout(rng, n, max_vars):
    total = rng.randrange(n, max_vars + 1)
    counts = [1] * n
    for _ in range(total - n):
        counts[rng.randrange(n)] += 1
    return {i + 1: [f"v{i + 1}_{k}" for k in range(counts[i])] for i in range(n)}


def random_boolean_game(rng, max_players=3, max_vars=4, max_depth=4):
    n = rng.randrange(2, max_players + 1)
    variables = _variable_layout(rng, n, max_vars)
    names = [v for vs in variables.values() for v in vs]
    goals = [random_boolean_formula(rng, names, max_depth) for _ in range(n)]
    return BooleanGame.make(variables, goals)


def random_kw_game(rng, max_players=3, max_vars=4, max_depth=4, type_bound=None,
                   n=None):
    n = n or rng.randrange(2, max_players + 1)
    variables = _variable_layout(rng, n, max_vars)
    sig = gm.ObservationGame.make(variables, ["T"] * n)
    goals = []
    for i in range(1, n + 1):
        for _ in range(200):
            goal = random_kw_formula(rng, sig, max_depth)
            if type_bound is None:
                break
            trial = ["T"] * n
            trial[i - 1] = logic.pretty(goal)
            probe = gm.ObservationGame.make(variables, trial)
            if len(logic.goal_type(probe, i)) <= type_bound:
                break
        goals.append(logic.pretty(goal))
    return gm.ObservationGame.make(variables, goals)


def random_guarded_game(rng, max_players=3, max_vars=3, max_depth=3, type_bound=3):
    """Guarded goals with all assertion types within the bound, by rejection."""
    n = rng.randrange(2, max_players + 1)
    variables = _variable_layout(rng, n, max_vars)
    sig = gm.ObservationGame.make(variables, ["T"] * n)
    goals = []
    for i in range(1, n + 1):
        for _ in range(400):
            goal = logic.K(i, _guarded_body(rng, sig, i, max_depth))
            trial = ["T"] * n
            trial[i - 1] = logic.pretty(goal)
            probe = gm.ObservationGame.make(variables, trial)
            if len(logic.goal_type(probe, i)) <= type_bound:
                break
        else:
            goal = logic.K(i, _literal(rng, sig.variables))
        goals.append(logic.pretty(goal))
    return gm.ObservationGame.make(variables, goals)


def random_positive_game(rng, max_players=3, max_vars=3, max_depth=3):
    n = rng.randrange(2, max_players + 1)
    variables = _variable_layout(rng, n, max_vars)
    sig = gm.ObservationGame.make(variables, ["T"] * n)
    goals = [logic.pretty(random_positive_formula(rng, sig, max_depth))
             for _ in range(n)]
    return gm.ObservationGame.make(variables, goals)


def random_self_positive_guarded_game(rng, max_players=3, max_vars=3, max_depth=3):
    """Guarded goals in the owner's self-positive fragment, by rejection."""
    n = rng.randrange(2, max_players + 1)
    variables = _variable_layout(rng, n, max_vars)
    sig = gm.ObservationGame.make(variables, ["T"] * n)
    goals = []
    for i in range(1, n + 1):
        for _ in range(400):
            goal = logic.K(i, _guarded_body(rng, sig, i, max_depth))
            report = logic.classify(goal, i, sig)
            if report.self_positive_for == i:
                break
        else:
            goal = logic.K(i, _literal(rng, sig.variables))
        goals.append(logic.pretty(goal))
    return gm.ObservationGame.make(variables, goals)


def random_strategy(rng, game, i):
    options = enumerate_strategies(game, i)
    return rng.choice(options)


def random_profile(rng, game):
    return tuple(random_strategy(rng, game, i) for i in game.players())


def random_uniform_profile(rng, game):
    strategies = []
    for i in game.players():
        keys = class_keys(game, i)
        options = enumerate_strategies(game, i)
        strategies.append(UniformStrategy(
            i, keys, tuple(rng.choice(options) for _ in keys)))
    return UniformProfile(tuple(strategies))


def random_valuation(rng, game):
    return rng.randrange(1 << game.num_vars)


def rng_from_seed(seed):
    return random.Random(seed)
