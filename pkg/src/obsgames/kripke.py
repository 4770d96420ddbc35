"""Explicit epistemic models and action models, used as an independent oracle.

The simplified game semantics corresponds to standard relational semantics on
models whose worlds are valuations: the initial model has each player
distinguish only its own variables, playing a profile updates it by the
restricted modal product with the profile's action model, and evaluating a
formula in the updated model agrees with the direct evaluator.  Nothing here
shares code with :mod:`obsgames.logic`'s evaluator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import logic
from .game import BudgetExceeded, _submasks


@dataclass(frozen=True)
class EpistemicModel:
    """Worlds with per-player equivalence relations and a valuation labeling.

    ``blocks[i-1][k]`` identifies the partition block of world k for player i;
    two worlds are indistinguishable iff their block ids are equal.
    """

    worlds: tuple
    labels: tuple[int, ...]
    blocks: tuple[tuple, ...]

    @property
    def size(self):
        return len(self.worlds)

    @property
    def n(self):
        return len(self.blocks)

    def index(self, world):
        try:
            return self.worlds.index(world)
        except ValueError:
            raise KeyError(f"world {world!r} not in model") from None

    def related(self, i, a, b):
        return self.blocks[i - 1][a] == self.blocks[i - 1][b]

    def block_of(self, i, k):
        bid = self.blocks[i - 1][k]
        return [m for m in range(self.size) if self.blocks[i - 1][m] == bid]

    def partitions_are_equivalences(self):
        # trivially true for block labelings; kept as an explicit check on
        # the relation view used by tests
        for i in range(1, self.n + 1):
            for a in range(self.size):
                if not self.related(i, a, a):
                    return False
        return True


def model_from_relations(worlds, labels, relations):
    """Build a model from per-player world pairs; each relation must be an
    equivalence (checked)."""
    idx = {w: k for k, w in enumerate(worlds)}
    blocks = []
    for rel in relations:
        pairs = {(idx[a], idx[b]) for a, b in rel}
        pairs |= {(b, a) for a, b in pairs}
        pairs |= {(k, k) for k in range(len(worlds))}
        # transitive closure
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(pairs), repeat=2):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
        block = list(range(len(worlds)))
        for a, b in pairs:
            root = min(block[a], block[b])
            block[a] = block[b] = root
        # canonicalize: path-compress by repeated lookup
        for k in range(len(worlds)):
            while block[k] != block[block[k]]:
                block[k] = block[block[k]]
        blocks.append(tuple(block[k] for k in range(len(worlds))))
    return EpistemicModel(tuple(worlds), tuple(labels), tuple(blocks))


@dataclass(frozen=True)
class ActionModel:
    """Actions with per-player equivalences and literal-conjunction
    preconditions, stored as (positive mask, negative mask) pairs."""

    actions: tuple
    blocks: tuple[tuple, ...]
    pre: tuple[tuple[int, int], ...]

    @property
    def size(self):
        return len(self.actions)

    def related(self, i, a, b):
        return self.blocks[i - 1][a] == self.blocks[i - 1][b]

    def precondition_formula(self, sig, k):
        pos, neg = self.pre[k]
        parts = [logic.Atom(name) for name in sig.names_of(pos)]
        parts += [logic.Not(logic.Atom(name)) for name in sig.names_of(neg)]
        if not parts:
            return logic.Top()
        phi = parts[0]
        for p in parts[1:]:
            phi = logic.And(phi, p)
        return phi


def build_initial_model(game):
    """Worlds are all valuations; players distinguish exactly their own
    variables; labeling is the identity."""
    worlds = tuple(game.valuations())
    blocks = tuple(
        tuple(v & game.player_mask[i - 1] for v in worlds) for i in game.players()
    )
    return EpistemicModel(worlds, worlds, blocks)


def build_observation_model(game, s):
    """Like the initial model but with the post-play relations for s."""
    worlds = tuple(game.valuations())
    blocks = tuple(
        tuple(v & game.revealed_to(s, i) for v in worlds) for i in game.players()
    )
    return EpistemicModel(worlds, worlds, blocks)


def build_action_model(game, s, small=False):
    """The action model whose execution realizes profile s.

    Full variant: one action per valuation, precondition the valuation's
    complete description.  Small variant: actions are the partial valuations
    of the variables actually revealed to a non-owner, preconditions partial
    conjunctions (T for the empty revelation).
    """
    if not small:
        actions = tuple(game.valuations())
        pre = tuple((v, game.all_mask & ~v) for v in actions)
        blocks = tuple(
            tuple(v & game.revealed_to(s, i) for v in actions) for i in game.players()
        )
        return ActionModel(actions, blocks, pre)
    shared = 0
    for i in game.players():
        for j in game.players():
            if i != j:
                shared |= s[i - 1][j - 1]
    actions = tuple(_submasks(shared))
    pre = tuple((a, shared & ~a) for a in actions)
    blocks = tuple(
        tuple(a & game.revealed_to(s, i) for a in actions) for i in game.players()
    )
    return ActionModel(actions, blocks, pre)


def product(model, action_model):
    """Restricted modal product: keep (world, action) pairs whose
    precondition holds, intersect the relations, inherit labels."""
    pairs = []
    for k, w in enumerate(model.worlds):
        label = model.labels[k]
        for a in range(action_model.size):
            pos, neg = action_model.pre[a]
            if (label & pos) == pos and (label & neg) == 0:
                pairs.append((k, a))
    worlds = tuple((model.worlds[k], action_model.actions[a]) for k, a in pairs)
    labels = tuple(model.labels[k] for k, _ in pairs)
    blocks = tuple(
        tuple((model.blocks[i][k], action_model.blocks[i][a]) for k, a in pairs)
        for i in range(model.n)
    )
    return EpistemicModel(worlds, labels, blocks)


def kripke_eval(model, world, phi, sig):
    """Standard relational satisfaction at a world of an explicit model."""
    k = world if isinstance(world, int) and world < model.size and \
        model.worlds[world] == world else model.index(world)
    return _keval(model, k, phi, sig)


def _keval(model, k, phi, sig):
    t = type(phi)
    if t is logic.Atom:
        return bool(model.labels[k] & sig.bit[phi.name])
    if t is logic.Top:
        return True
    if t is logic.Bottom:
        return False
    if t is logic.Not:
        return not _keval(model, k, phi.sub, sig)
    if t is logic.And:
        return _keval(model, k, phi.left, sig) and _keval(model, k, phi.right, sig)
    if t is logic.Or:
        return _keval(model, k, phi.left, sig) or _keval(model, k, phi.right, sig)
    if t is logic.Implies:
        return (not _keval(model, k, phi.left, sig)) or _keval(model, k, phi.right, sig)
    if t is logic.Iff:
        return _keval(model, k, phi.left, sig) == _keval(model, k, phi.right, sig)
    if t is logic.K:
        return all(_keval(model, m, phi.sub, sig) for m in model.block_of(phi.player, k))
    if t is logic.KHat:
        return any(_keval(model, m, phi.sub, sig) for m in model.block_of(phi.player, k))
    if t is logic.Kw:
        block = model.block_of(phi.player, k)
        vals = {_keval(model, m, phi.sub, sig) for m in block}
        return len(vals) == 1
    raise TypeError(phi)


# ---------------------------------------------------------------------------
# Isomorphism


def _refine_colors(model):
    """Iterated partition refinement: color worlds by label, then repeatedly
    by the multiset of colors in each player's block."""
    colors = list(model.labels)
    while True:
        buckets = {}
        for i in range(model.n):
            for k in range(model.size):
                buckets.setdefault((i, model.blocks[i][k]), []).append(k)
        new = []
        for k in range(model.size):
            sig_parts = []
            for i in range(model.n):
                block = buckets[(i, model.blocks[i][k])]
                sig_parts.append(tuple(sorted(colors[m] for m in block)))
            new.append((colors[k], tuple(sig_parts)))
        canon = {}
        renumbered = []
        for c in new:
            if c not in canon:
                canon[c] = len(canon)
            renumbered.append(canon[c])
        if renumbered == colors:
            return colors
        colors = renumbered


def isomorphic(m1, m2, max_worlds=4096):
    """A label- and relation-preserving world bijection, or None.

    Worlds are bucketed by refined color first, so for the deterministic
    models built from games the search is essentially linear.
    """
    if m1.size != m2.size or m1.n != m2.n:
        return None
    if m1.size > max_worlds:
        raise BudgetExceeded(f"model too large for isomorphism search ({m1.size})")
    c1, c2 = _refine_colors(m1), _refine_colors(m2)
    if sorted(c1) != sorted(c2):
        return None
    by_color = {}
    for k, c in enumerate(c2):
        by_color.setdefault(c, []).append(k)
    order = sorted(range(m1.size), key=lambda k: (len(by_color.get(c1[k], ())), k))
    mapping = [None] * m1.size
    used = [False] * m2.size

    def consistent(a, b):
        if m1.labels[a] != m2.labels[b]:
            return False
        for i in range(m1.n):
            for a2, b2 in enumerate(mapping):
                if b2 is None:
                    continue
                if (m1.blocks[i][a] == m1.blocks[i][a2]) != (m2.blocks[i][b] == m2.blocks[i][b2]):
                    return False
        return True

    def search(pos):
        if pos == len(order):
            return True
        a = order[pos]
        for b in by_color.get(c1[a], ()):
            if used[b] or not consistent(a, b):
                continue
            mapping[a] = b
            used[b] = True
            if search(pos + 1):
                return True
            mapping[a] = None
            used[b] = False
        return False

    if not search(0):
        return None
    return {m1.worlds[a]: m2.worlds[b] for a, b in enumerate(mapping)}


def model_dump(model, sig):
    """JSON-friendly dump: labeled worlds and per-player partition blocks."""
    worlds = [
        {"world": repr(w), "label": sorted(sig.names_of(model.labels[k]))}
        for k, w in enumerate(model.worlds)
    ]
    partitions = {}
    for i in range(1, model.n + 1):
        blocks = {}
        for k in range(model.size):
            blocks.setdefault(model.blocks[i - 1][k], []).append(k)
        partitions[str(i)] = sorted(blocks.values())
    return {"worlds": worlds, "partitions": partitions}
