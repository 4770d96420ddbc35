"""Observation games: valuations, revelation strategies, information sets,
uniform strategies, expected outcomes and the four outcome relations.

Valuations are bit masks over a fixed variable order (owner index first, then
declaration order).  A strategy for player i is a tuple of n masks, entry j
holding the subset of i's variables revealed to player j+1; the entry for i
itself is forced to all of P_i.  Everything is immutable and hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import logic


class BudgetExceeded(RuntimeError):
    pass


class Budget:
    """A mutable work allowance; enumerating operations spend from it."""

    def __init__(self, limit=10_000_000):
        self.limit = limit
        self.spent = 0

    def spend(self, amount=1):
        self.spent += amount
        if self.spent > self.limit:
            raise BudgetExceeded(f"budget of {self.limit} exceeded")


@dataclass(frozen=True)
class Signature:
    """Player count plus the variable partition and its global bit order."""

    n: int
    variables: tuple[str, ...]           # global order
    owner: dict[str, int] = field(compare=False)
    bit: dict[str, int] = field(compare=False)
    player_mask: tuple[int, ...] = field(compare=False)   # P_i per player

    @property
    def num_vars(self):
        return len(self.variables)

    @property
    def all_mask(self):
        return (1 << len(self.variables)) - 1

    def mask_of(self, names):
        m = 0
        for name in names:
            m |= self.bit[name]
        return m

    def names_of(self, mask):
        return [name for name in self.variables if self.bit[name] & mask]

    def valuations(self):
        return range(1 << len(self.variables))

    def revealed_to(self, s, i):
        """P_i(s): all variables revealed to player i, own ones included."""
        m = 0
        for sj in s:
            m |= sj[i - 1]
        return m | self.player_mask[i - 1]


def _make_signature(n, variables_by_player):
    order = []
    owner = {}
    for i in range(1, n + 1):
        for name in variables_by_player.get(i, ()):
            if name in owner:
                raise ValueError(f"variable {name!r} declared twice")
            owner[name] = i
            order.append(name)
    bit = {name: 1 << k for k, name in enumerate(order)}
    masks = tuple(
        sum(bit[v] for v in variables_by_player.get(i, ())) for i in range(1, n + 1)
    )
    return tuple(order), owner, bit, masks


@dataclass(frozen=True)
class ObservationGame(Signature):
    """n players, a partition of the variables, and one goal per player."""

    goals: tuple[logic.Formula, ...] = ()

    @staticmethod
    def make(variables_by_player, goals):
        """Build a game from {player: [var, ...]} and per-player goal texts
        or formulas (list indexed from player 1, or dict keyed by player)."""
        n = max(variables_by_player) if variables_by_player else len(goals)
        n = max(n, len(goals))
        order, owner, bit, masks = _make_signature(n, variables_by_player)
        sig = Signature(n, order, owner, bit, masks)
        if isinstance(goals, dict):
            goals = [goals[i] for i in range(1, n + 1)]
        parsed = tuple(
            logic.parse_formula(g, sig) if isinstance(g, str) else g for g in goals
        )
        if len(parsed) != n:
            raise ValueError("need exactly one goal per player")
        for g in parsed:
            logic._check_signature(g, sig, logic.pretty(g))
        return ObservationGame(n, order, owner, bit, masks, parsed)

    def goal(self, i):
        return self.goals[i - 1]

    def is_kw_game(self):
        return all(logic.is_kw_formula(g) for g in self.goals)

    def players(self):
        return range(1, self.n + 1)


# ---------------------------------------------------------------------------
# Strategies


def strategy(game, i, reveals):
    """Build player i's strategy from {recipient: iterable of var names or mask}."""
    row = [0] * game.n
    for j, vs in reveals.items():
        m = vs if isinstance(vs, int) else game.mask_of(vs)
        if m & ~game.player_mask[i - 1]:
            raise ValueError(f"player {i} can only reveal its own variables")
        row[j - 1] = m
    row[i - 1] = game.player_mask[i - 1]
    return tuple(row)


def s_empty(game, i):
    """Reveal nothing to anyone."""
    row = [0] * game.n
    row[i - 1] = game.player_mask[i - 1]
    return tuple(row)


def s_forall(game, i):
    """Reveal everything to everyone."""
    return tuple(game.player_mask[i - 1] for _ in range(game.n))


def profile_empty(game):
    return tuple(s_empty(game, i) for i in game.players())


def profile_forall(game):
    return tuple(s_forall(game, i) for i in game.players())


def revealed_to(game, s, i):
    return game.revealed_to(s, i)


def obs_equiv(game, s, i, v, w):
    """v and w are indistinguishable to i after s has been played."""
    return (v ^ w) & game.revealed_to(s, i) == 0


def _submasks(free):
    """All submasks of ``free`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == free:
            return
        sub = (sub - free) & free


def information_set(game, s, i, v):
    """All valuations i cannot tell from v given s, in global order."""
    mask = game.revealed_to(s, i)
    base = v & mask
    free = game.all_mask & ~mask
    return [base | w for w in _submasks(free)]


def initial_information_set(game, i, v):
    mask = game.player_mask[i - 1]
    base = v & mask
    free = game.all_mask & ~mask
    return [base | w for w in _submasks(free)]


def enumerate_strategies(game, i, allowed=None):
    """All of player i's strategies, deterministic order.

    ``allowed`` optionally restricts the mask available per recipient (used by
    the knowing-whether reduction); by default every subset of P_i may go to
    every other player.
    """
    own = game.player_mask[i - 1]
    per_recipient = []
    for j in game.players():
        if j == i:
            per_recipient.append([own])
        else:
            cap = own if allowed is None else allowed[j - 1]
            per_recipient.append(list(_submasks(cap)))
    return [tuple(row) for row in itertools.product(*per_recipient)]


def all_profiles(game, strategy_lists=None):
    lists = strategy_lists or [enumerate_strategies(game, i) for i in game.players()]
    return (tuple(p) for p in itertools.product(*lists))


# ---------------------------------------------------------------------------
# Outcomes


class OutcomeCache:
    """Memoizes pointed outcomes u_i(v, s) for one game.

    For knowing-whether goals the valuation is dropped from the key, so each
    distinct profile is evaluated once.
    """

    def __init__(self, game, budget=None):
        self.game = game
        self.budget = budget
        self._kw = [logic.is_kw_formula(g) for g in game.goals]
        self._cache = {}

    def outcome(self, v, s, i):
        key = (i, s) if self._kw[i - 1] else (i, v, s)
        hit = self._cache.get(key)
        if hit is None:
            if self.budget is not None:
                self.budget.spend()
            hit = 1 if logic.evaluate(self.game, v, s, self.game.goals[i - 1]) else 0
            self._cache[key] = hit
        return hit


def outcome(game, v, s, i):
    """1 if player i's goal holds at (v, s), else 0."""
    return 1 if logic.evaluate(game, v, s, game.goals[i - 1]) else 0


# ---------------------------------------------------------------------------
# Uniform strategies and profiles


@dataclass(frozen=True)
class UniformStrategy:
    """A map from player i's initial information classes to strategies.

    Keyed by the class's restriction v & P_i, so uniformity holds by
    construction.  ``choices`` is ordered by class key.
    """

    player: int
    class_keys: tuple[int, ...]
    choices: tuple[tuple[int, ...], ...]

    def strategy_at(self, game, v):
        key = v & game.player_mask[self.player - 1]
        return self.choices[self.class_keys.index(key)]

    def is_global(self):
        return len(set(self.choices)) <= 1


def class_keys(game, i):
    return tuple(_submasks(game.player_mask[i - 1]))


def uniform_strategy(game, i, choice_by_key):
    """Build from {class key (mask or names): strategy}; missing classes
    default to revealing nothing."""
    keys = class_keys(game, i)
    default = s_empty(game, i)
    table = {}
    for key, strat in choice_by_key.items():
        m = key if isinstance(key, int) else game.mask_of(key)
        table[m] = strat
    return UniformStrategy(i, keys, tuple(table.get(k, default) for k in keys))


def lift_global_strategy(game, i, s_i):
    keys = class_keys(game, i)
    return UniformStrategy(i, keys, tuple(s_i for _ in keys))


@dataclass(frozen=True)
class UniformProfile:
    strategies: tuple[UniformStrategy, ...]

    def profile_at(self, game, v):
        return tuple(u.strategy_at(game, v) for u in self.strategies)

    def is_global(self):
        return all(u.is_global() for u in self.strategies)

    def __getitem__(self, idx):
        return self.strategies[idx]


def lift_global(game, s):
    """The globally uniform profile playing s at every valuation."""
    return UniformProfile(tuple(
        lift_global_strategy(game, i, s[i - 1]) for i in game.players()
    ))


def uniform_profile_table(game, u):
    """Dict v -> strategy profile, for inspection and serialization."""
    return {v: u.profile_at(game, v) for v in game.valuations()}


def profile_from_valuation_map(game, mapping):
    """Build a UniformProfile from a per-valuation profile map, checking that
    each player's component is constant on its information classes."""
    strategies = []
    for i in game.players():
        keys = class_keys(game, i)
        choice = {}
        for v in game.valuations():
            key = v & game.player_mask[i - 1]
            s_i = mapping[v][i - 1]
            if key in choice and choice[key] != s_i:
                raise ValueError(f"player {i} not uniform on class {key:#b}")
            choice[key] = s_i
        strategies.append(UniformStrategy(i, keys, tuple(choice[k] for k in keys)))
    return UniformProfile(tuple(strategies))


def enumerate_uniform_strategies(game, i, strategy_list=None):
    """All uniform strategies of i: one plain strategy per information class."""
    options = strategy_list if strategy_list is not None else enumerate_strategies(game, i)
    keys = class_keys(game, i)
    for combo in itertools.product(options, repeat=len(keys)):
        yield UniformStrategy(i, keys, combo)


def enumerate_uniform_profiles(game, strategy_lists=None):
    gens = [
        list(enumerate_uniform_strategies(
            game, i, None if strategy_lists is None else strategy_lists[i - 1]))
        for i in game.players()
    ]
    for combo in itertools.product(*gens):
        yield UniformProfile(tuple(combo))


# ---------------------------------------------------------------------------
# Expected outcomes and outcome relations


@dataclass(frozen=True)
class ExpectedOutcome:
    """Outcome bits across an information set, in global valuation order."""

    worlds: tuple[int, ...]
    bits: tuple[int, ...]

    def __iter__(self):
        return iter(self.bits)


def expected_outcome(game, v, u, i, cache=None):
    """Player i's outcome vector over its initial information set at v."""
    out = cache.outcome if cache is not None else (lambda w, s, k: outcome(game, w, s, k))
    worlds = tuple(initial_information_set(game, i, v))
    bits = tuple(out(w, u.profile_at(game, w), i) for w in worlds)
    return ExpectedOutcome(worlds, bits)


RELATIONS = ("opt", "pess", "real", "max")


def compare(rel, a, b):
    """Strictly-better test a > b under the given outcome relation."""
    if a.worlds != b.worlds:
        raise ValueError("expected outcomes over different information sets")
    if rel == "opt":
        return max(a.bits) > max(b.bits)
    if rel == "pess":
        return min(a.bits) > min(b.bits)
    if rel == "real":
        return sum(a.bits) > sum(b.bits)
    if rel == "max":
        return any(x > y for x, y in zip(a.bits, b.bits))
    raise ValueError(f"unknown outcome relation {rel!r}")


def is_dominant(game, rel, i, uni_i, budget=None, strategy_lists=None):
    """Weak dominance: no counter-profile, deviation and valuation make some
    other strategy of i strictly better.  Exhaustive over uniform
    counter-profiles; deviations are checked per information class."""
    cache = OutcomeCache(game, budget)
    own_list = strategy_lists[i - 1] if strategy_lists else enumerate_strategies(game, i)
    other_gens = []
    for j in game.players():
        if j == i:
            continue
        lst = strategy_lists[j - 1] if strategy_lists else None
        other_gens.append(list(enumerate_uniform_strategies(game, j, lst)))
    keys = class_keys(game, i)
    for others in itertools.product(*other_gens):
        counters = list(others)
        counters.insert(i - 1, None)
        for key in keys:
            worlds = tuple(initial_information_set(game, i, key))
            fixed = [tuple(counters[j - 1].strategy_at(game, w) if j != i else None
                           for j in game.players()) for w in worlds]
            cur_s = uni_i.strategy_at(game, key)
            cur = tuple(
                cache.outcome(w, _plug(fixed[k], i, cur_s), i)
                for k, w in enumerate(worlds))
            cur_eo = ExpectedOutcome(worlds, cur)
            for d in own_list:
                if d == cur_s:
                    continue
                dev = tuple(
                    cache.outcome(w, _plug(fixed[k], i, d), i)
                    for k, w in enumerate(worlds))
                if compare(rel, ExpectedOutcome(worlds, dev), cur_eo):
                    return False
    return True


def _plug(partial, i, s_i):
    row = list(partial)
    row[i - 1] = s_i
    return tuple(row)
