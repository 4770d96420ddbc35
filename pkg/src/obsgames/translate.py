"""Boolean games and the two translations to and from knowing-whether games.

A Boolean game over a variable partition has each player choose a local
valuation; goals are propositional.  Embedding into a knowing-whether game
replaces every atom by "some designated reader knows whether it" (the next
player around the table, the previous one, or everyone).  The reverse
construction reads a knowing-whether game's ``Kw_j p_i`` constituents as fresh
atoms owned by i, giving a Boolean game over (n-1)-times as many variables.
Both directions preserve equilibrium existence, which ``check_correspondence``
tests by deciding both sides exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import game as gm
from . import logic
from . import solver
from .game import Budget, OutcomeCache, UniformProfile, lift_global, s_empty


class CorrespondenceError(AssertionError):
    """The two sides of an equilibrium-existence correspondence disagree."""


@dataclass(frozen=True)
class BooleanGame(gm.Signature):
    """n players, a variable partition, and propositional goals; player i's
    strategy is the subset of its own variables it makes true."""

    goals: tuple[logic.Formula, ...] = ()

    @staticmethod
    def make(variables_by_player, goals):
        base = gm.ObservationGame.make(variables_by_player, goals)
        for i, g in enumerate(base.goals, start=1):
            if any(isinstance(n, logic._MODAL) for n in logic.subformulas(g)):
                raise ValueError(f"goal of player {i} is not propositional")
        return BooleanGame(base.n, base.variables, base.owner, base.bit,
                           base.player_mask, base.goals)

    def players(self):
        return range(1, self.n + 1)

    def goal(self, i):
        return self.goals[i - 1]


def bool_outcome(b, v, i):
    """1 if valuation v satisfies player i's propositional goal."""
    empty = tuple(s_empty(b, j) for j in b.players())
    return 1 if logic.evaluate(b, v, empty, b.goals[i - 1]) else 0


def bool_ne_verify(b, v, budget=None):
    """Is the valuation v (read as a strategy profile) a pure equilibrium?"""
    for i in b.players():
        cur = bool_outcome(b, v, i)
        if cur == 1:
            continue
        rest = v & ~b.player_mask[i - 1]
        for local in gm._submasks(b.player_mask[i - 1]):
            if budget is not None:
                budget.spend()
            if bool_outcome(b, rest | local, i) > cur:
                return False
    return True


def bool_ne(b, budget=None):
    """All pure equilibria, ascending."""
    return [v for v in b.valuations() if bool_ne_verify(b, v, budget)]


def bool_ne_exists(b, budget=None):
    for v in b.valuations():
        if bool_ne_verify(b, v, budget):
            return v
    return None


# ---------------------------------------------------------------------------
# Boolean game -> knowing-whether game


def _next_player(i, n):
    return 1 if i == n else i + 1


def _prev_player(i, n):
    return n if i == 1 else i - 1


def bool_to_kw(b, variant="next"):
    """The knowing-whether game with the same players and variables whose
    goals replace each atom p_i by a knowing-whether constituent:
    ``next``/``prev`` use the owner's neighbour as reader, ``public`` every
    other player (the owner's own trivial conjunct is dropped)."""
    if variant not in ("next", "prev", "public"):
        raise ValueError("variant must be 'next', 'prev' or 'public'")

    def embed_atom(name):
        i = b.owner[name]
        if variant == "next":
            return logic.Kw(_next_player(i, b.n), logic.Atom(name))
        if variant == "prev":
            return logic.Kw(_prev_player(i, b.n), logic.Atom(name))
        readers = [j for j in b.players() if j != i]
        if not readers:
            return logic.Top()
        phi = logic.Kw(readers[0], logic.Atom(name))
        for j in readers[1:]:
            phi = logic.And(phi, logic.Kw(j, logic.Atom(name)))
        return phi

    def embed(phi):
        t = type(phi)
        if t is logic.Atom:
            return embed_atom(phi.name)
        if t in (logic.Top, logic.Bottom):
            return phi
        if t is logic.Not:
            return logic.Not(embed(phi.sub))
        return t(embed(phi.left), embed(phi.right))

    goals = tuple(embed(g) for g in b.goals)
    variables = {i: b.names_of(b.player_mask[i - 1]) for i in b.players()}
    return gm.ObservationGame.make(variables, list(goals))


def strategy_lift(b, w):
    """The strategy profile of the next-variant game realizing the Boolean
    profile w: each player reveals exactly its true variables to its
    successor and nothing to anyone else."""
    profile = []
    for i in b.players():
        row = [0] * b.n
        row[i - 1] = b.player_mask[i - 1]
        row[_next_player(i, b.n) - 1] = w & b.player_mask[i - 1]
        profile.append(tuple(row))
    return tuple(profile)


@dataclass(frozen=True)
class GlobalClass:
    """An equivalence class of globally uniform profiles of the next-variant
    game, keyed by what each player reveals to its successor."""

    key: tuple[int, ...]
    representative: UniformProfile


def chi(b, w):
    """The class of the lifted profile; w -> chi(w) is a bijection between
    Boolean profiles and classes."""
    s = strategy_lift(b, w)
    key = tuple(s[i - 1][_next_player(i, b.n) - 1] for i in b.players())
    g = bool_to_kw(b, "next")
    return GlobalClass(key, lift_global(g, s))


def global_class_key(b, s):
    """Class key of an arbitrary globally played profile of the next-variant
    game (successor-facing revelations only)."""
    return tuple(s[i - 1][_next_player(i, b.n) - 1] for i in b.players())


# ---------------------------------------------------------------------------
# Knowing-whether game -> Boolean game


def kw_atom_name(reader, variable):
    return f"kw_{reader}_{variable}"


def kw_to_bool(g):
    """The Boolean game whose atoms are the game's possible revelations.

    Player i owns one fresh variable per (reader, own variable) pair; goals
    keep their shape with each ``Kw_j p`` read as the corresponding atom.
    Goals must be knowing-whether formulas without trivial ``Kw_i p_i``
    constituents.
    """
    provenance = {}
    variables = {}
    for i in g.players():
        names = []
        for p in g.names_of(g.player_mask[i - 1]):
            for j in g.players():
                if j != i:
                    fresh = kw_atom_name(j, p)
                    names.append(fresh)
                    provenance[fresh] = {"reader": j, "variable": p}
        variables[i] = names

    def rewrite(phi, owner):
        t = type(phi)
        if t is logic.Kw:
            if not isinstance(phi.sub, logic.Atom):
                raise solver.NotKwGame(f"goal of player {owner} is not a "
                                       f"knowing-whether formula: {phi}")
            var_owner = g.owner[phi.sub.name]
            if var_owner == phi.player:
                raise ValueError(
                    f"goal of player {owner} contains the trivial constituent "
                    f"{logic.pretty(phi)}; rewrite it to T first")
            return logic.Atom(kw_atom_name(phi.player, phi.sub.name))
        if t in (logic.Top, logic.Bottom):
            return phi
        if t is logic.Not:
            return logic.Not(rewrite(phi.sub, owner))
        if t in (logic.And, logic.Or, logic.Implies, logic.Iff):
            return t(rewrite(phi.left, owner), rewrite(phi.right, owner))
        raise solver.NotKwGame(f"goal of player {owner} is not a "
                               f"knowing-whether formula: {phi}")

    goals = [rewrite(g.goals[i - 1], i) for i in g.players()]
    b = BooleanGame.make(variables, goals)
    return b, provenance


def eta(g, u):
    """Map a globally uniform profile to the Boolean-game valuation that
    makes ``kw_j_p`` true exactly when p is revealed to j."""
    if not u.is_global():
        raise ValueError("profile is not globally uniform")
    b, _ = kw_to_bool(g)
    s = u.profile_at(g, 0)
    w = 0
    for i in g.players():
        for p in g.names_of(g.player_mask[i - 1]):
            for j in g.players():
                if j != i and (s[i - 1][j - 1] & g.bit[p]):
                    w |= b.bit[kw_atom_name(j, p)]
    return w


def eta_inverse(g, w, b=None):
    """The globally uniform profile revealing p to j iff ``kw_j_p`` is true."""
    if b is None:
        b, _ = kw_to_bool(g)
    profile = []
    for i in g.players():
        row = [0] * g.n
        row[i - 1] = g.player_mask[i - 1]
        for p in g.names_of(g.player_mask[i - 1]):
            for j in g.players():
                if j != i and (w & b.bit[kw_atom_name(j, p)]):
                    row[j - 1] |= g.bit[p]
        profile.append(tuple(row))
    return lift_global(g, tuple(profile))


# ---------------------------------------------------------------------------
# Mixed-strategy view


@dataclass(frozen=True)
class MixedProfile:
    """Strategy profiles weighted by how many valuations map to them; the
    weights are exact dyadic rationals summing to one."""

    support: tuple[tuple[tuple, Fraction], ...]

    def probability(self, s):
        for t, p in self.support:
            if t == s:
                return p
        return Fraction(0)


def uniform_to_mixed(g, u):
    """Read a uniform profile as a lottery over plain profiles under the
    uniform distribution on valuations."""
    counts = {}
    for v in g.valuations():
        s = u.profile_at(g, v)
        counts[s] = counts.get(s, 0) + 1
    total = 1 << g.num_vars
    support = tuple(sorted(
        ((s, Fraction(c, total)) for s, c in counts.items()),
        key=lambda item: item[0]))
    return MixedProfile(support)


# ---------------------------------------------------------------------------
# Correspondence checks


def check_correspondence_bool(b, budget=None):
    """NE(B) nonempty iff the next-variant embedding has a maximal
    equilibrium; raises on disagreement."""
    budget = budget or Budget()
    has_bool = bool_ne_exists(b, budget) is not None
    g = bool_to_kw(b, "next")
    search = solver.max_ne_exists(g, budget)
    if search.status == "budget_exceeded":
        raise gm.BudgetExceeded("maximal-equilibrium side ran out of budget")
    has_max = search.found
    if has_bool != has_max:
        raise CorrespondenceError(
            f"NE(B) nonempty={has_bool} but max-NE nonempty={has_max}")
    return {"bool_ne": has_bool, "kw_max_ne": has_max}


def check_correspondence_kw(g, budget=None):
    """The derived Boolean game has a pure equilibrium iff the game has a
    maximal equilibrium; raises on disagreement."""
    budget = budget or Budget()
    b, _ = kw_to_bool(g)
    has_bool = bool_ne_exists(b, budget) is not None
    search = solver.max_ne_exists(g, budget)
    if search.status == "budget_exceeded":
        raise gm.BudgetExceeded("maximal-equilibrium side ran out of budget")
    has_max = search.found
    if has_bool != has_max:
        raise CorrespondenceError(
            f"NE(B_G) nonempty={has_bool} but max-NE nonempty={has_max}")
    return {"bool_ne": has_bool, "kw_max_ne": has_max}
