"""Equilibrium verification and search for observation games.

Deviation checks exploit that a uniform deviation can only change the expected
outcome at a valuation through the strategy it assigns to that valuation's
information class, so verification enumerates plain strategies per class
rather than whole uniform strategies.  Maximal equilibria are handled through
their pointed characterization: a profile is a maximal equilibrium iff it
plays a pointed equilibrium at every valuation.  Searches are deterministic
(players ascending, valuations ascending, strategies in enumeration order)
and three-valued: witness, empty, or budget exceeded.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import game as gm
from . import logic
from .game import (Budget, BudgetExceeded, ExpectedOutcome, OutcomeCache,
                   UniformProfile, class_keys, compare, enumerate_strategies,
                   enumerate_uniform_profiles, initial_information_set,
                   lift_global, profile_from_valuation_map, s_empty, s_forall)


class UnsupportedGameError(ValueError):
    """A constructive algorithm's precondition is violated."""


class ConstructionError(RuntimeError):
    """A constructive algorithm produced a profile that fails verification."""


@dataclass(frozen=True)
class Deviation:
    player: int
    valuation: int
    replacement: tuple            # plain strategy for the witness class
    scope: str = "class"          # "class" (uniform game) or "pointed"


@dataclass(frozen=True)
class VerifyResult:
    is_ne: bool
    witness: Deviation | None = None


@dataclass
class SearchOutcome:
    status: str                   # "witness" | "empty" | "budget_exceeded"
    witness: UniformProfile | None = None
    stats: dict = field(default_factory=dict)

    @property
    def found(self):
        return self.status == "witness"


def _plug(profile, i, s_i):
    row = list(profile)
    row[i - 1] = s_i
    return tuple(row)


# ---------------------------------------------------------------------------
# Pointed games


def pointed_ne_verify(game, v, s, cache=None, strategy_lists=None):
    """Is s a pure equilibrium of the complete-information game at v?"""
    cache = cache or OutcomeCache(game)
    for i in game.players():
        cur = cache.outcome(v, s, i)
        if cur == 1:
            continue
        options = strategy_lists[i - 1] if strategy_lists else enumerate_strategies(game, i)
        for d in options:
            if d == s[i - 1]:
                continue
            if cache.outcome(v, _plug(s, i, d), i) > cur:
                return VerifyResult(False, Deviation(i, v, d, scope="pointed"))
    return VerifyResult(True)


def pointed_ne_set(game, v, cache=None, strategy_lists=None):
    """All pointed equilibria at v, in enumeration order."""
    cache = cache or OutcomeCache(game)
    lists = strategy_lists or [enumerate_strategies(game, i) for i in game.players()]
    return [s for s in gm.all_profiles(game, lists)
            if pointed_ne_verify(game, v, s, cache, lists).is_ne]


# ---------------------------------------------------------------------------
# Uniform-profile verification


def ne_verify(game, rel, u, budget=None, strategy_lists=None, cache=None):
    """Is the uniform profile u an equilibrium under the given relation?

    Checks every player, information class and per-class strategy swap; a
    failure returns the first improving deviation in scan order.
    """
    cache = cache or OutcomeCache(game, budget)
    for i in game.players():
        options = strategy_lists[i - 1] if strategy_lists else enumerate_strategies(game, i)
        for key in class_keys(game, i):
            worlds = tuple(initial_information_set(game, i, key))
            at = [u.profile_at(game, w) for w in worlds]
            cur = ExpectedOutcome(worlds, tuple(
                cache.outcome(w, at[k], i) for k, w in enumerate(worlds)))
            cur_s = u[i - 1].strategy_at(game, key)
            for d in options:
                if d == cur_s:
                    continue
                dev = ExpectedOutcome(worlds, tuple(
                    cache.outcome(w, _plug(at[k], i, d), i)
                    for k, w in enumerate(worlds)))
                if compare(rel, dev, cur):
                    return VerifyResult(False, Deviation(i, key, d))
    return VerifyResult(True)


def max_ne_verify_pointwise(game, u, budget=None, cache=None, strategy_lists=None):
    """Maximal-equilibrium check via the pointed characterization: the played
    profile must be a pointed equilibrium at every valuation."""
    cache = cache or OutcomeCache(game, budget)
    for v in game.valuations():
        res = pointed_ne_verify(game, v, u.profile_at(game, v), cache, strategy_lists)
        if not res.is_ne:
            return res
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Knowing-whether reduction


class NotKwGame(ValueError):
    pass


@dataclass(frozen=True)
class KwReduction:
    """Per-player caps on what may be revealed to whom: a pair (variable,
    recipient) survives iff the goal formulas test it.  Projecting a profile
    onto the caps preserves every player's outcome."""

    game: object
    allowed: tuple[tuple[int, ...], ...]   # allowed[i-1][j-1] = revelable mask

    def strategy_lists(self):
        return [enumerate_strategies(self.game, i, self.allowed[i - 1])
                for i in self.game.players()]

    def reduce_strategy(self, i, s_i):
        row = [m & self.allowed[i - 1][j] for j, m in enumerate(s_i)]
        row[i - 1] = self.game.player_mask[i - 1]
        return tuple(row)

    def reduce_profile(self, s):
        return tuple(self.reduce_strategy(i, s[i - 1]) for i in self.game.players())

    def reduce_uniform(self, u):
        return UniformProfile(tuple(
            gm.UniformStrategy(i, us.class_keys, tuple(
                self.reduce_strategy(i, c) for c in us.choices))
            for i, us in enumerate(u.strategies, start=1)))


def kw_relevant_reduction(game):
    """Restrict each player's revelations to the variable/reader pairs that
    occur as ``Kw_reader variable`` in some goal."""
    if not game.is_kw_game():
        raise NotKwGame("all goals must be knowing-whether formulas")
    allowed = [[0] * game.n for _ in game.players()]
    for goal in game.goals:
        for node in logic.subformulas(goal):
            if isinstance(node, logic.Kw) and isinstance(node.sub, logic.Atom):
                owner = game.owner[node.sub.name]
                reader = node.player
                if owner != reader:
                    allowed[owner - 1][reader - 1] |= game.bit[node.sub.name]
    for i in game.players():
        allowed[i - 1][i - 1] = game.player_mask[i - 1]
    return KwReduction(game, tuple(tuple(row) for row in allowed))


# ---------------------------------------------------------------------------
# Fast verifier for knowing-whether games
#
# Outcomes of knowing-whether goals depend only on which relevant
# (variable, reader) pairs are revealed, so goals compile to truth tables
# over a small bit set and expected-outcome scans can short-circuit.


class _KwTables:
    def __init__(self, game, reduction):
        self.game = game
        pairs = []
        for i in game.players():
            for name in game.names_of(game.player_mask[i - 1]):
                for j in game.players():
                    if j != i and (game.bit[name] & reduction.allowed[i - 1][j - 1]):
                        pairs.append((name, j))
        self.pairs = pairs
        self.pair_index = {p: k for k, p in enumerate(pairs)}
        self.tables = None
        if len(pairs) <= 16:
            self.tables = [self._table(game.goals[i - 1]) for i in game.players()]

    def _table(self, goal):
        bits = len(self.pairs)
        table = bytearray(1 << bits)
        for m in range(1 << bits):
            strategies = [list(s_empty(self.game, i)) for i in self.game.players()]
            for k, (name, j) in enumerate(self.pairs):
                if m >> k & 1:
                    owner = self.game.owner[name]
                    strategies[owner - 1][j - 1] |= self.game.bit[name]
            s = tuple(tuple(row) for row in strategies)
            table[m] = 1 if logic.evaluate(self.game, 0, s, goal) else 0
        return bytes(table)

    def strategy_bits(self, i, s_i):
        m = 0
        for k, (name, j) in enumerate(self.pairs):
            if self.game.owner[name] == i and (s_i[j - 1] & self.game.bit[name]):
                m |= 1 << k
        return m


def _kw_ne_verify(game, rel, u, tables, strategy_lists, budget=None):
    """Specialized minimum/maximum scan with early exit; pess and opt only."""
    masks = game.player_mask
    contrib = [
        {key: tables.strategy_bits(i, u[i - 1].strategy_at(game, key))
         for key in class_keys(game, i)}
        for i in game.players()
    ]
    dev_bits = [
        [(d, tables.strategy_bits(i, d)) for d in strategy_lists[i - 1]]
        for i in game.players()
    ]

    def scan(i, key, own_bits, stop_at):
        # returns min over the class when stop_at=0 (pess), max when 1 (opt)
        worlds = initial_information_set(game, i, key)
        table = tables.tables[i - 1]
        result = 1 - stop_at
        for w in worlds:
            if budget is not None:
                budget.spend()
            m = own_bits
            for j in game.players():
                if j != i:
                    m |= contrib[j - 1][w & masks[j - 1]]
            bit = table[m]
            if bit == stop_at:
                return stop_at
            result = bit
        return result

    stop = 0 if rel == "pess" else 1
    for i in game.players():
        for key in class_keys(game, i):
            cur_bits = contrib[i - 1][key]
            cur = scan(i, key, cur_bits, stop_at=stop)
            if rel == "pess":
                if cur == 1:
                    continue
                for d, db in dev_bits[i - 1]:
                    if db != cur_bits and scan(i, key, db, stop_at=0) == 1:
                        return VerifyResult(False, Deviation(i, key, d))
            else:  # opt
                if cur == 1:
                    continue
                for d, db in dev_bits[i - 1]:
                    if db != cur_bits and scan(i, key, db, stop_at=1) == 1:
                        return VerifyResult(False, Deviation(i, key, d))
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Existence


def ne_exists(game, rel, budget=None, use_reduction=True):
    """First equilibrium under rel in deterministic enumeration order, an
    emptiness certificate, or a budget-exceeded report."""
    if rel == "max":
        return max_ne_exists(game, budget, use_reduction)
    budget = budget or Budget()
    started = time.monotonic()
    lists = None
    tables = None
    reduction = None
    if use_reduction and game.is_kw_game():
        reduction = kw_relevant_reduction(game)
        lists = reduction.strategy_lists()
        if rel in ("pess", "opt"):
            tables = _KwTables(game, reduction)
            if tables.tables is None:
                tables = None
    checked = 0
    try:
        cache = OutcomeCache(game, budget)
        for u in enumerate_uniform_profiles(game, lists):
            checked += 1
            if tables is not None:
                res = _kw_ne_verify(game, rel, u, tables, lists, budget)
            else:
                res = ne_verify(game, rel, u, budget, lists, cache)
            if res.is_ne:
                return SearchOutcome("witness", u, _stats(checked, started))
        return SearchOutcome("empty", None, _stats(checked, started))
    except BudgetExceeded:
        return SearchOutcome("budget_exceeded", None, _stats(checked, started))


def _stats(checked, started):
    return {"profiles_checked": checked,
            "elapsed_ms": int((time.monotonic() - started) * 1000)}


def max_ne_exists(game, budget=None, use_reduction=True):
    """Search for a maximal equilibrium.

    Knowing-whether games: outcomes ignore the valuation, so a maximal
    equilibrium exists iff some globally uniform profile plays a pointed
    equilibrium, and only those need scanning.  Otherwise: compute the pointed
    equilibria per valuation and backtrack for a selection that is constant on
    every player's information classes.
    """
    budget = budget or Budget()
    started = time.monotonic()
    checked = 0
    try:
        cache = OutcomeCache(game, budget)
        if game.is_kw_game():
            lists = kw_relevant_reduction(game).strategy_lists() if use_reduction \
                else [enumerate_strategies(game, i) for i in game.players()]
            for s in gm.all_profiles(game, lists):
                checked += 1
                if pointed_ne_verify(game, 0, s, cache, lists).is_ne:
                    return SearchOutcome("witness", lift_global(game, s),
                                         _stats(checked, started))
            return SearchOutcome("empty", None, _stats(checked, started))

        lists = [enumerate_strategies(game, i) for i in game.players()]
        ne_sets = {}
        for v in game.valuations():
            ne_sets[v] = pointed_ne_set(game, v, cache, lists)
            checked += len(lists)
            if not ne_sets[v]:
                return SearchOutcome("empty", None, _stats(checked, started))

        # arc consistency over (player, class) choices
        allowed = {
            (i, key): set(lists[i - 1])
            for i in game.players() for key in class_keys(game, i)
        }
        changed = True
        while changed:
            changed = False
            for v in game.valuations():
                keep = [s for s in ne_sets[v]
                        if all(s[i - 1] in allowed[(i, v & game.player_mask[i - 1])]
                               for i in game.players())]
                if len(keep) != len(ne_sets[v]):
                    ne_sets[v] = keep
                    changed = True
                if not keep:
                    return SearchOutcome("empty", None, _stats(checked, started))
                for i in game.players():
                    key = (i, v & game.player_mask[i - 1])
                    seen = {s[i - 1] for s in keep}
                    if not allowed[key] <= seen:
                        allowed[key] &= seen
                        changed = True
                        if not allowed[key]:
                            return SearchOutcome("empty", None, _stats(checked, started))

        commitments = {}
        valuations = list(game.valuations())

        def backtrack(k):
            nonlocal checked
            if k == len(valuations):
                return True
            v = valuations[k]
            for s in ne_sets[v]:
                checked += 1
                budget.spend()
                keys = [(i, v & game.player_mask[i - 1]) for i in game.players()]
                if any(key in commitments and commitments[key] != s[key[0] - 1]
                       for key in keys):
                    continue
                added = [key for key in keys if key not in commitments]
                for key in added:
                    commitments[key] = s[key[0] - 1]
                if backtrack(k + 1):
                    return True
                for key in added:
                    del commitments[key]
            return False

        if backtrack(0):
            mapping = {
                v: tuple(commitments[(i, v & game.player_mask[i - 1])]
                         for i in game.players())
                for v in game.valuations()
            }
            return SearchOutcome("witness", profile_from_valuation_map(game, mapping),
                                 _stats(checked, started))
        return SearchOutcome("empty", None, _stats(checked, started))
    except BudgetExceeded:
        return SearchOutcome("budget_exceeded", None, _stats(checked, started))


def ne_enumerate(game, rel, budget=None, use_reduction=True):
    """All equilibria under rel, for desk-scale games."""
    budget = budget or Budget()
    lists = None
    if use_reduction and game.is_kw_game():
        lists = kw_relevant_reduction(game).strategy_lists()
    cache = OutcomeCache(game, budget)
    found = []
    for u in enumerate_uniform_profiles(game, lists):
        if rel == "max":
            res = max_ne_verify_pointwise(game, u, budget, cache, lists)
        else:
            res = ne_verify(game, rel, u, budget, lists, cache)
        if res.is_ne:
            found.append(u)
    return found


# ---------------------------------------------------------------------------
# Constructive algorithms
#
# Both constructions classify players by the assertion types of their goals:
#   Xbar_plus  : no positive assertion about own variables -> hiding is safe
#   Xbar_minus : no negative assertion about own variables -> revealing is safe
#   W_l        : goals about own variables only
#   W_plus     : {+, c+, c-}, W_minus : {-, c+, c-}
# and then grow sets Y/Z of players guaranteed to win, robustly against the
# not-yet-guaranteed players on the opposite side.


def _algorithm_sets(game, types):
    xbar_plus = {i for i in game.players() if "c+" not in types[i]}
    xbar_minus = {i for i in game.players() if "c-" not in types[i]}
    w_l = {i for i in game.players() if types[i] == {"c+", "c-"}}
    w_plus = {i for i in game.players() if types[i] == {"+", "c+", "c-"}}
    w_minus = {i for i in game.players() if types[i] == {"-", "c+", "c-"}}
    return xbar_plus, xbar_minus, w_l, w_plus, w_minus


def _require_types_at_most(game, bound):
    types = {i: logic.goal_type(game, i) for i in game.players()}
    for i, t in types.items():
        if len(t) > bound:
            raise UnsupportedGameError(
                f"player {i} has |type| = {len(t)} > {bound} ({sorted(t)})")
    return types


def _require_guarded(game):
    for i in game.players():
        g = game.goals[i - 1]
        if not (isinstance(g, logic.K) and g.player == i):
            raise UnsupportedGameError(f"goal of player {i} is not guarded")


def _own_win_strategy(game, i, worlds, cache):
    """First strategy of i winning at every given world against the
    reveal-nothing backdrop (used for players whose goals only concern their
    own variables, so the backdrop is immaterial)."""
    backdrop = [s_empty(game, j) for j in game.players()]
    for s_i in enumerate_strategies(game, i):
        s = _plug(tuple(backdrop), i, s_i)
        if all(cache.outcome(w, s, i) == 1 for w in worlds):
            return s_i
    return None


def algorithm1(game, mode="pess", budget=None):
    """Constructive equilibrium for guarded games with assertion types of at
    most three elements; ``mode`` selects the pessimist or optimist variant
    (the optimist one weakens the per-class requirement from every valuation
    of the class to some valuation)."""
    if mode not in ("pess", "opt"):
        raise ValueError("mode must be 'pess' or 'opt'")
    _require_guarded(game)
    types = _require_types_at_most(game, 3)
    xbar_plus, xbar_minus, w_l, w_plus, w_minus = _algorithm_sets(game, types)
    cache = OutcomeCache(game, budget)
    lists = {i: enumerate_strategies(game, i) for i in game.players()}

    s = {v: [None] * game.n for v in game.valuations()}

    def assign_all(i, s_i):
        for v in game.valuations():
            s[v][i - 1] = s_i

    for i in sorted(xbar_plus):
        assign_all(i, s_empty(game, i))
    for i in sorted(xbar_minus - xbar_plus):
        assign_all(i, s_forall(game, i))
    for i in sorted(w_l):
        for key in class_keys(game, i):
            worlds = initial_information_set(game, i, key)
            s_i = _own_win_strategy(game, i, worlds, cache) or s_empty(game, i)
            for w in worlds:
                s[w][i - 1] = s_i
    for i in sorted(w_plus):
        assign_all(i, s_empty(game, i))
    for i in sorted(w_minus):
        assign_all(i, s_forall(game, i))

    Y = {v: set() for v in game.valuations()}
    Z = {v: set() for v in game.valuations()}

    def cond_holds(i, v, s_i, my_side_plus):
        worlds = initial_information_set(game, i, v & game.player_mask[i - 1])
        quantifier = all if mode == "pess" else any

        def ok_at(w):
            adversaries = sorted((w_minus - Z[w]) if my_side_plus else (w_plus - Y[w]))
            for combo in itertools.product(*(lists[j] for j in adversaries)):
                prof = list(s[w])
                prof[i - 1] = s_i
                for j, t_j in zip(adversaries, combo):
                    prof[j - 1] = t_j
                if budget is not None:
                    budget.spend()
                if cache.outcome(w, tuple(prof), i) != 1:
                    return False
            return True

        return quantifier(ok_at(w) for w in worlds)

    def grow(side_plus):
        members = w_plus if side_plus else w_minus
        sat = Y if side_plus else Z
        progressed = False
        while True:
            hit = None
            for v in game.valuations():
                for i in sorted(members - sat[v]):
                    for s_i in lists[i]:
                        if cond_holds(i, v, s_i, side_plus):
                            hit = (v, i, s_i)
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit is None:
                return progressed
            v, i, s_i = hit
            for w in initial_information_set(game, i, v & game.player_mask[i - 1]):
                s[w][i - 1] = s_i
                sat[w].add(i)
            progressed = True

    while True:
        changed = grow(side_plus=True)
        changed |= grow(side_plus=False)
        if not changed:
            break

    for v in game.valuations():
        for j in sorted(w_minus - Z[v]):
            row = list(s[v][j - 1])
            for i in sorted(w_plus - Y[v]):
                row[i - 1] = 0
            s[v][j - 1] = tuple(row)
        for j in sorted(w_plus - Y[v]):
            row = list(s[v][j - 1])
            for i in sorted(w_minus - Z[v]):
                row[i - 1] = game.player_mask[j - 1]
            s[v][j - 1] = tuple(row)

    mapping = {v: tuple(s[v]) for v in game.valuations()}
    try:
        u = profile_from_valuation_map(game, mapping)
    except ValueError as exc:
        raise ConstructionError(f"constructed profile is not uniform: {exc}") from exc
    res = ne_verify(game, mode, u, budget)
    if not res.is_ne:
        raise ConstructionError(
            f"constructed profile fails {mode} verification: {res.witness}")
    return u


def algorithm2(game, budget=None):
    """Constructive maximal equilibrium for knowing-whether games with
    assertion types of at most three elements; the output is globally
    uniform."""
    if not game.is_kw_game():
        raise UnsupportedGameError("all goals must be knowing-whether formulas")
    types = _require_types_at_most(game, 3)
    xbar_plus, xbar_minus, w_l, w_plus, w_minus = _algorithm_sets(game, types)
    cache = OutcomeCache(game, budget)
    lists = {i: enumerate_strategies(game, i) for i in game.players()}

    s = [None] * game.n
    for i in sorted(xbar_plus):
        s[i - 1] = s_empty(game, i)
    for i in sorted(xbar_minus - xbar_plus):
        s[i - 1] = s_forall(game, i)
    for i in sorted(w_l):
        s[i - 1] = _own_win_strategy(game, i, [0], cache) or s_empty(game, i)
    for i in sorted(w_plus):
        s[i - 1] = s_empty(game, i)
    for i in sorted(w_minus):
        s[i - 1] = s_forall(game, i)

    Y, Z = set(), set()

    def cond_holds(i, s_i, side_plus):
        adversaries = sorted((w_minus - Z) if side_plus else (w_plus - Y))
        for combo in itertools.product(*(lists[j] for j in adversaries)):
            prof = list(s)
            prof[i - 1] = s_i
            for j, t_j in zip(adversaries, combo):
                prof[j - 1] = t_j
            if budget is not None:
                budget.spend()
            if cache.outcome(0, tuple(prof), i) != 1:
                return False
        return True

    def grow(side_plus):
        members = w_plus if side_plus else w_minus
        sat = Y if side_plus else Z
        progressed = False
        while True:
            hit = None
            for i in sorted(members - sat):
                for s_i in lists[i]:
                    if cond_holds(i, s_i, side_plus):
                        hit = (i, s_i)
                        break
                if hit:
                    break
            if hit is None:
                return progressed
            i, s_i = hit
            s[i - 1] = s_i
            sat.add(i)
            progressed = True

    while True:
        changed = grow(side_plus=True)
        changed |= grow(side_plus=False)
        if not changed:
            break

    for j in sorted(w_minus - Z):
        row = list(s[j - 1])
        for i in sorted(w_plus - Y):
            row[i - 1] = 0
        s[j - 1] = tuple(row)
    for j in sorted(w_plus - Y):
        row = list(s[j - 1])
        for i in sorted(w_minus - Z):
            row[i - 1] = game.player_mask[j - 1]
        s[j - 1] = tuple(row)

    u = lift_global(game, tuple(s))
    res = max_ne_verify_pointwise(game, u, budget)
    if not res.is_ne:
        raise ConstructionError(
            f"constructed profile fails maximal verification: {res.witness}")
    return u


def construct_type2_max_ne(game, budget=None):
    """Maximal equilibrium for guarded games whose assertion types have at
    most two elements: players asserting both polarities about their own
    variables satisfy themselves classwise, players with no positive own
    assertion hide, everyone else reveals."""
    _require_guarded(game)
    types = _require_types_at_most(game, 2)
    cache = OutcomeCache(game, budget)
    x_plus = {i for i in game.players() if "c+" in types[i]}
    x_minus = {i for i in game.players() if "c-" in types[i]}

    s = {v: [None] * game.n for v in game.valuations()}
    for i in game.players():
        if i in x_plus and i in x_minus:
            for key in class_keys(game, i):
                worlds = initial_information_set(game, i, key)
                s_i = _own_win_strategy(game, i, worlds, cache) or s_empty(game, i)
                for w in worlds:
                    s[w][i - 1] = s_i
        elif i not in x_plus:
            for v in game.valuations():
                s[v][i - 1] = s_empty(game, i)
        else:
            for v in game.valuations():
                s[v][i - 1] = s_forall(game, i)

    u = profile_from_valuation_map(game, {v: tuple(s[v]) for v in game.valuations()})
    res = max_ne_verify_pointwise(game, u, budget)
    if not res.is_ne:
        raise ConstructionError(
            f"constructed profile fails maximal verification: {res.witness}")
    return u


def two_player_kw_pess_ne(game, budget=None):
    """Pessimist equilibrium for two-player knowing-whether games.

    If some player has a strategy winning against everything the opponent can
    do, fix it globally and let the opponent best-respond.  Otherwise each
    player has a punishing reply to every opposing strategy; spreading those
    replies over the punisher's information classes (strategies are in
    bijection with the opponent-facing subsets) pins every expected outcome's
    minimum at zero.
    """
    if game.n != 2:
        raise UnsupportedGameError("two players required")
    if not game.is_kw_game():
        raise UnsupportedGameError("all goals must be knowing-whether formulas")
    cache = OutcomeCache(game, budget)
    s1_list = enumerate_strategies(game, 1)
    s2_list = enumerate_strategies(game, 2)

    def u_of(i, s1, s2):
        return cache.outcome(0, (s1, s2), i)

    win_all_1 = next((a for a in s1_list if all(u_of(1, a, b) == 1 for b in s2_list)), None)
    win_all_2 = next((b for b in s2_list if all(u_of(2, a, b) == 1 for a in s1_list)), None)

    if win_all_1 is not None:
        best = max(s2_list, key=lambda b: u_of(2, win_all_1, b))
        u = lift_global(game, (win_all_1, best))
    elif win_all_2 is not None:
        best = max(s1_list, key=lambda a: u_of(1, a, win_all_2))
        u = lift_global(game, (best, win_all_2))
    else:
        punish_2 = []  # replies of player 2 killing each strategy of player 1
        for a in s1_list:
            reply = next(b for b in s2_list if u_of(1, a, b) == 0)
            if reply not in punish_2:
                punish_2.append(reply)
        punish_1 = []
        for b in s2_list:
            reply = next(a for a in s1_list if u_of(2, a, b) == 0)
            if reply not in punish_1:
                punish_1.append(reply)
        keys1 = class_keys(game, 1)
        keys2 = class_keys(game, 2)
        choice1 = tuple(punish_1[k] if k < len(punish_1) else punish_1[-1]
                        for k in range(len(keys1)))
        choice2 = tuple(punish_2[k] if k < len(punish_2) else punish_2[-1]
                        for k in range(len(keys2)))
        u = UniformProfile((gm.UniformStrategy(1, keys1, choice1),
                            gm.UniformStrategy(2, keys2, choice2)))

    res = ne_verify(game, "pess", u, budget)
    if not res.is_ne:
        raise ConstructionError(
            f"constructed profile fails pessimist verification: {res.witness}")
    return u
