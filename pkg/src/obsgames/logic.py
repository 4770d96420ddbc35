"""Epistemic goal formulas: AST, parser, normal forms, fragments, and evaluation.

The goal language has atoms owned by players, Boolean connectives, and three
modalities per player: K (knows), Kh (considers possible) and Kw (knows
whether).  Kh and Kw are definable from K; the evaluator handles them natively
for speed.  Truth is relative to a hidden valuation and a strategy profile of
revelations: ``K_i a`` holds when ``a`` is true at every valuation that agrees
with the actual one on the variables revealed to player i.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class TrivialGoalWarning(UserWarning):
    """A goal contains an always-true constituent like ``Kw1 p1``."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Formula:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class K(Formula):
    player: int
    sub: Formula


@dataclass(frozen=True)
class KHat(Formula):
    player: int
    sub: Formula


@dataclass(frozen=True)
class Kw(Formula):
    player: int
    sub: Formula


_MODAL = (K, KHat, Kw)
_BINARY = {And, Or, Implies, Iff}


def subformulas(phi):
    """Yield phi and all its subformulas, preorder."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.sub)
        elif isinstance(node, _MODAL):
            stack.append(node.sub)
        elif type(node) in _BINARY:
            stack.append(node.right)
            stack.append(node.left)


def atoms(phi):
    return {n.name for n in subformulas(phi) if isinstance(n, Atom)}


def players_in(phi):
    return {n.player for n in subformulas(phi) if isinstance(n, _MODAL)}


# ---------------------------------------------------------------------------
# Parser / printer
#
# Grammar: atoms [a-z][a-z0-9_]*, constants T/F, unary ! and modalities
# K<i>/Kh<i>/Kw<i> binding tightest, then &, |, ->, <-> (the arrows are
# right-associative).

import re

_TOKEN = re.compile(
    r"\s*(?:(?P<lpar>\()|(?P<rpar>\))|(?P<iff><->)|(?P<imp>->)|(?P<and>&)"
    r"|(?P<or>\|)|(?P<not>!)|(?P<kw>Kw(?P<kwi>\d+))|(?P<kh>Kh(?P<khi>\d+))"
    r"|(?P<k>K(?P<ki>\d+))|(?P<top>T\b)|(?P<bot>F\b)|(?P<atom>[a-z][a-z0-9_]*))"
)


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.items = []  # (kind, value, position)
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == m.start():
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                bad = pos + (len(text[pos:]) - len(stripped))
                raise ParseError(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup if m.lastgroup not in ("kwi", "khi", "ki") else None
            for name in ("lpar", "rpar", "iff", "imp", "and", "or", "not",
                         "kw", "kh", "k", "top", "bot", "atom"):
                if m.group(name):
                    kind = name
                    break
            value = m.group(kind)
            if kind == "kw":
                value = int(m.group("kwi"))
            elif kind == "kh":
                value = int(m.group("khi"))
            elif kind == "k":
                value = int(m.group("ki"))
            start = m.end() - len(m.group(kind))
            self.items.append((kind, value, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.items):
            return self.items[self.i]
        return ("eof", None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok


def parse_formula(text, signature=None):
    """Parse a goal formula.

    ``signature`` is optional; when given, atoms must be declared variables
    and modal player indices must be within range.
    """
    toks = _Tokens(text)
    phi = _parse_iff(toks)
    kind, _, pos = toks.peek()
    if kind != "eof":
        raise ParseError("trailing input", pos)
    if signature is not None:
        _check_signature(phi, signature, text)
    return phi


def _check_signature(phi, sig, text):
    for node in subformulas(phi):
        if isinstance(node, Atom) and node.name not in sig.owner:
            raise FormulaError(f"unknown atom {node.name!r} in {text!r}")
        if isinstance(node, _MODAL) and not 1 <= node.player <= sig.n:
            raise FormulaError(f"unknown player index {node.player} in {text!r}")


def _parse_iff(toks):
    left = _parse_implies(toks)
    if toks.peek()[0] == "iff":
        toks.next()
        return Iff(left, _parse_iff(toks))
    return left


def _parse_implies(toks):
    left = _parse_or(toks)
    if toks.peek()[0] == "imp":
        toks.next()
        return Implies(left, _parse_implies(toks))
    return left


def _parse_or(toks):
    left = _parse_and(toks)
    while toks.peek()[0] == "or":
        toks.next()
        left = Or(left, _parse_and(toks))
    return left


def _parse_and(toks):
    left = _parse_unary(toks)
    while toks.peek()[0] == "and":
        toks.next()
        left = And(left, _parse_unary(toks))
    return left


def _parse_unary(toks):
    kind, value, pos = toks.next()
    if kind == "not":
        return Not(_parse_unary(toks))
    if kind == "k":
        return K(value, _parse_unary(toks))
    if kind == "kh":
        return KHat(value, _parse_unary(toks))
    if kind == "kw":
        return Kw(value, _parse_unary(toks))
    if kind == "atom":
        return Atom(value)
    if kind == "top":
        return Top()
    if kind == "bot":
        return Bottom()
    if kind == "lpar":
        phi = _parse_iff(toks)
        k2, _, p2 = toks.next()
        if k2 != "rpar":
            raise ParseError("expected ')'", p2)
        return phi
    raise ParseError("expected a formula", pos)


_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}


def pretty(phi):
    """Render with minimal parentheses; parse(pretty(x)) == x."""
    return _pretty(phi, 0)


def _pretty(phi, outer):
    t = type(phi)
    if t is Atom:
        return phi.name
    if t is Top:
        return "T"
    if t is Bottom:
        return "F"
    if t is Not:
        return "!" + _pretty(phi.sub, 5)
    if t is K:
        return f"K{phi.player} " + _pretty(phi.sub, 5)
    if t is KHat:
        return f"Kh{phi.player} " + _pretty(phi.sub, 5)
    if t is Kw:
        return f"Kw{phi.player} " + _pretty(phi.sub, 5)
    level = _LEVEL[t]
    op = {Iff: "<->", Implies: "->", Or: "|", And: "&"}[t]
    if t in (Iff, Implies):  # right-associative
        text = f"{_pretty(phi.left, level + 1)} {op} {_pretty(phi.right, level)}"
    else:  # left-associative chains
        text = f"{_pretty(phi.left, level)} {op} {_pretty(phi.right, level + 1)}"
    return text if level >= outer else f"({text})"


# ---------------------------------------------------------------------------
# Abbreviation expansion and normal forms


def expand_abbreviations(phi):
    """Rewrite ->, <-> and Kw in terms of !, &, |, K and Kh."""
    t = type(phi)
    if t in (Atom, Top, Bottom):
        return phi
    if t is Not:
        return Not(expand_abbreviations(phi.sub))
    if t is And:
        return And(expand_abbreviations(phi.left), expand_abbreviations(phi.right))
    if t is Or:
        return Or(expand_abbreviations(phi.left), expand_abbreviations(phi.right))
    if t is Implies:
        return Or(Not(expand_abbreviations(phi.left)), expand_abbreviations(phi.right))
    if t is Iff:
        a = expand_abbreviations(phi.left)
        b = expand_abbreviations(phi.right)
        return And(Or(Not(a), b), Or(Not(b), a))
    if t is K:
        return K(phi.player, expand_abbreviations(phi.sub))
    if t is KHat:
        return KHat(phi.player, expand_abbreviations(phi.sub))
    if t is Kw:
        sub = expand_abbreviations(phi.sub)
        return Or(K(phi.player, sub), K(phi.player, Not(sub)))
    raise TypeError(phi)


def desugar_core(phi):
    """Rewrite into the core grammar {Atom, Not, Or, K} (plus T/F)."""
    t = type(phi)
    if t in (Atom, Top, Bottom):
        return phi
    if t is Not:
        return Not(desugar_core(phi.sub))
    if t is Or:
        return Or(desugar_core(phi.left), desugar_core(phi.right))
    if t is And:
        return Not(Or(Not(desugar_core(phi.left)), Not(desugar_core(phi.right))))
    if t is Implies:
        return Or(Not(desugar_core(phi.left)), desugar_core(phi.right))
    if t is Iff:
        return desugar_core(And(Implies(phi.left, phi.right), Implies(phi.right, phi.left)))
    if t is K:
        return K(phi.player, desugar_core(phi.sub))
    if t is KHat:
        return Not(K(phi.player, Not(desugar_core(phi.sub))))
    if t is Kw:
        sub = desugar_core(phi.sub)
        return Or(K(phi.player, sub), K(phi.player, Not(sub)))
    raise TypeError(phi)


def is_kw_formula(phi):
    """Membership in the knowing-whether fragment: Boolean combinations of
    ``Kw_j atom`` constituents (T/F allowed)."""
    t = type(phi)
    if t in (Top, Bottom):
        return True
    if t is Kw:
        return isinstance(phi.sub, Atom)
    if t is Not:
        return is_kw_formula(phi.sub)
    if t in (And, Or, Implies, Iff):
        return is_kw_formula(phi.left) and is_kw_formula(phi.right)
    return False


def to_nnf(phi):
    """Negation normal form.

    Knowing-whether formulas keep their ``Kw_j a`` constituents as literals
    (only double negation and De Morgan are needed); other formulas are first
    stripped of abbreviations so negations end up on atoms only, with Kh
    absorbing negated K.
    """
    if is_kw_formula(phi):
        return _nnf(_expand_kw_connectives(phi), False, kw_literals=True)
    return _nnf(expand_abbreviations(phi), False, kw_literals=False)


def _expand_kw_connectives(phi):
    # like expand_abbreviations but keeps Kw nodes intact
    t = type(phi)
    if t in (Top, Bottom, Kw, Atom):
        return phi
    if t is Not:
        return Not(_expand_kw_connectives(phi.sub))
    if t is And:
        return And(_expand_kw_connectives(phi.left), _expand_kw_connectives(phi.right))
    if t is Or:
        return Or(_expand_kw_connectives(phi.left), _expand_kw_connectives(phi.right))
    if t is Implies:
        return Or(Not(_expand_kw_connectives(phi.left)), _expand_kw_connectives(phi.right))
    if t is Iff:
        a = _expand_kw_connectives(phi.left)
        b = _expand_kw_connectives(phi.right)
        return And(Or(Not(a), b), Or(Not(b), a))
    raise TypeError(phi)


def _nnf(phi, neg, kw_literals):
    t = type(phi)
    if t is Top:
        return Bottom() if neg else phi
    if t is Bottom:
        return Top() if neg else phi
    if t is Atom:
        return Not(phi) if neg else phi
    if t is Kw:  # only reached in kw-literal mode
        return Not(phi) if neg else phi
    if t is Not:
        return _nnf(phi.sub, not neg, kw_literals)
    if t is And:
        l = _nnf(phi.left, neg, kw_literals)
        r = _nnf(phi.right, neg, kw_literals)
        return Or(l, r) if neg else And(l, r)
    if t is Or:
        l = _nnf(phi.left, neg, kw_literals)
        r = _nnf(phi.right, neg, kw_literals)
        return And(l, r) if neg else Or(l, r)
    if t is K:
        sub = _nnf(phi.sub, neg, kw_literals)
        return KHat(phi.player, sub) if neg else K(phi.player, sub)
    if t is KHat:
        sub = _nnf(phi.sub, neg, kw_literals)
        return K(phi.player, sub) if neg else KHat(phi.player, sub)
    raise TypeError(phi)


def _is_nnf(phi):
    # membership in the NNF fragment of the full language (no Kw nodes)
    t = type(phi)
    if t in (Atom, Top, Bottom):
        return True
    if t is Not:
        return isinstance(phi.sub, Atom)
    if t in (And, Or):
        return _is_nnf(phi.left) and _is_nnf(phi.right)
    if t in (K, KHat):
        return _is_nnf(phi.sub)
    return False


def _is_positive(phi):
    # NNF without Kh modalities
    t = type(phi)
    if t in (Atom, Top, Bottom):
        return True
    if t is Not:
        return isinstance(phi.sub, Atom)
    if t in (And, Or):
        return _is_positive(phi.left) and _is_positive(phi.right)
    if t is K:
        return _is_positive(phi.sub)
    return False


def _is_self_positive(phi, j):
    # NNF where every K_j occurs positively and Kh_j does not occur
    t = type(phi)
    if t in (Atom, Top, Bottom):
        return True
    if t is Not:
        return isinstance(phi.sub, Atom)
    if t in (And, Or):
        return _is_self_positive(phi.left, j) and _is_self_positive(phi.right, j)
    if t is K:
        return _is_self_positive(phi.sub, j)
    if t is KHat:
        return phi.player != j and _is_self_positive(phi.sub, j)
    return False


@dataclass(frozen=True)
class FragmentReport:
    is_boolean: bool
    is_kw: bool
    is_nnf: bool
    is_positive: bool
    self_positive_for: int | None
    is_guarded: bool


def normalize_trivial(phi, signature):
    """Replace always-true ``Kw_i a`` constituents (owner reading its own
    variable) by T, warning once per call when any were found."""
    found = []

    def walk(node):
        t = type(node)
        if t is Kw and isinstance(node.sub, Atom) and \
                signature.owner.get(node.sub.name) == node.player:
            found.append(node)
            return Top()
        if t in (Atom, Top, Bottom):
            return node
        if t is Not:
            return Not(walk(node.sub))
        if t in _MODAL:
            return t(node.player, walk(node.sub))
        return t(walk(node.left), walk(node.right))

    result = walk(phi)
    if found:
        warnings.warn(
            f"goal contains trivially true constituents: "
            f"{', '.join(pretty(f) for f in found)}", TrivialGoalWarning,
            stacklevel=2)
    return result


def classify(phi, owner, signature=None):
    """Fragment membership flags for a goal owned by ``owner``.

    Guardedness is judged on the original shape (an outermost ``K_owner``);
    the other flags on the abbreviation-free form.  When a signature is given,
    trivially true ``Kw_i a`` constituents are normalized to T first.
    """
    original = phi
    if signature is not None:
        phi = normalize_trivial(phi, signature)
    expanded = expand_abbreviations(phi)
    modal_free = not any(isinstance(n, _MODAL) for n in subformulas(expanded))
    report = FragmentReport(
        is_boolean=modal_free,
        is_kw=is_kw_formula(phi),
        is_nnf=_is_nnf(expanded),
        is_positive=_is_positive(expanded),
        self_positive_for=owner if _is_self_positive(expanded, owner) else None,
        is_guarded=isinstance(original, K) and original.player == owner,
    )
    return report


# ---------------------------------------------------------------------------
# Positive/negative assertion types


def goal_type(game, i):
    """The subset of {+, -, c+, c-} of epistemic assertions in player i's goal.

    Computed on the NNF of the abbreviation-free goal: a variable owned by j
    occurring under an even number of Kh flips is a positive assertion about
    j, an odd number a negative one.  '+'/'-' record assertions about other
    players' variables, 'c+'/'c-' about the player's own.
    """
    phi = normalize_trivial(game.goals[i - 1], game)
    plus, minus = _assertions(to_nnf(expand_abbreviations(phi)), game)
    result = set()
    if any(j != i for j in plus):
        result.add("+")
    if any(j != i for j in minus):
        result.add("-")
    if i in plus:
        result.add("c+")
    if i in minus:
        result.add("c-")
    return result


def _assertions(phi, sig):
    t = type(phi)
    if t is Atom:
        return {sig.owner[phi.name]}, set()
    if t is Not:  # NNF: negation sits on an atom
        return {sig.owner[phi.sub.name]}, set()
    if t in (Top, Bottom):
        return set(), set()
    if t in (And, Or):
        lp, lm = _assertions(phi.left, sig)
        rp, rm = _assertions(phi.right, sig)
        return lp | rp, lm | rm
    if t is K:
        return _assertions(phi.sub, sig)
    if t is KHat:
        p, m = _assertions(phi.sub, sig)
        return m, p
    raise TypeError(f"not in NNF: {phi}")


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(game, v, s, phi):
    """Truth of phi at hidden valuation v under strategy profile s."""
    return _Evaluator(game, s).eval(phi, v)


class _Evaluator:
    """Evaluates formulas over one fixed strategy profile.

    A K node for player i quantifies over the valuations that agree with the
    current one on the variables revealed to i; results are memoized per
    (subformula, information-set key) so each class is visited once.
    """

    __slots__ = ("sig", "revealed", "cache")

    def __init__(self, sig, profile):
        self.sig = sig
        self.revealed = [sig.revealed_to(profile, i) for i in range(1, sig.n + 1)]
        self.cache = {}

    def eval(self, phi, v):
        t = type(phi)
        if t is Atom:
            return bool(v & self.sig.bit[phi.name])
        if t is Top:
            return True
        if t is Bottom:
            return False
        if t is Not:
            return not self.eval(phi.sub, v)
        if t is And:
            return self.eval(phi.left, v) and self.eval(phi.right, v)
        if t is Or:
            return self.eval(phi.left, v) or self.eval(phi.right, v)
        if t is Implies:
            return (not self.eval(phi.left, v)) or self.eval(phi.right, v)
        if t is Iff:
            return self.eval(phi.left, v) == self.eval(phi.right, v)
        if t is K:
            return self._quantify(phi, v, all_of=True)
        if t is KHat:
            return self._quantify(phi, v, all_of=False)
        if t is Kw:
            if isinstance(phi.sub, Atom):
                # known-whether iff the atom is revealed to the reader
                return bool(self.revealed[phi.player - 1] & self.sig.bit[phi.sub.name])
            key = (id(phi), v & self.revealed[phi.player - 1])
            hit = self.cache.get(key)
            if hit is None:
                hit = (self._quantify_sub(phi.player, phi.sub, v, True)
                       or self._quantify_sub(phi.player, Not(phi.sub), v, True))
                self.cache[key] = hit
            return hit
        raise TypeError(phi)

    def _quantify(self, phi, v, all_of):
        i = phi.player
        mask = self.revealed[i - 1]
        sub = phi.sub
        # single-literal shortcuts: the class agrees on revealed variables
        if isinstance(sub, Atom):
            b = self.sig.bit[sub.name]
            truth = bool(v & b) if (b & mask) else None
        elif isinstance(sub, Not) and isinstance(sub.sub, Atom):
            b = self.sig.bit[sub.sub.name]
            truth = not (v & b) if (b & mask) else None
        else:
            b = None
            truth = NotImplemented
        if truth is not NotImplemented:
            if truth is not None:
                return truth
            return not all_of  # literal varies freely over the class
        key = (id(phi), v & mask)
        hit = self.cache.get(key)
        if hit is None:
            hit = self._quantify_sub(i, sub, v, all_of)
            self.cache[key] = hit
        return hit

    def _quantify_sub(self, i, sub, v, all_of):
        mask = self.revealed[i - 1]
        base = v & mask
        free = self.sig.all_mask & ~mask
        w = 0
        while True:
            truth = self.eval(sub, base | w)
            if all_of and not truth:
                return False
            if not all_of and truth:
                return True
            w = (w - free) & free
            if w == 0:
                break
        return all_of


def check_validity_small(phi, game, budget=None):
    """Brute-force validity: true at every (valuation, strategy profile).

    Only feasible on small signatures; the budget bounds the number of
    evaluation calls.
    """
    from .game import all_profiles
    for s in all_profiles(game):
        ev = _Evaluator(game, s)
        for v in range(1 << game.num_vars):
            if budget is not None:
                budget.spend()
            if not ev.eval(phi, v):
                return False
    return True
