"""C-ATL model checking on games."""

import numpy as np

from ..errors import UnknownAtom, WrongQuantifierFamily
from ..solve import pre_exists_exists, pre_exists_forall, pre_forall_exists, pre_forall_forall
from .formula import (GAME_QUANTIFIERS, P0, P1, P2, P12, And, Atom, Const, NegAtom, Next, Or,
                      Quant, WeakUntil)

PRE = {P1: pre_exists_forall, P12: pre_exists_exists, P2: pre_forall_exists, P0: pre_forall_forall}


def least_until(arena, pre, left, right):
    """μX. right ∪ (left ∩ pre(X))."""
    x = np.zeros_like(right)
    while True:
        nxt = right | (left & pre(arena, x))
        if np.array_equal(nxt, x):
            return x
        x = nxt


def greatest_until(arena, pre, left, right):
    """νX. right ∪ (left ∩ pre(X))."""
    x = np.ones_like(right)
    while True:
        nxt = right | (left & pre(arena, x))
        if np.array_equal(nxt, x):
            return x
        x = nxt


class Evaluator:
    """Bottom-up evaluation with a cache shared across subformulas.

    quantifier(q, path, masks) handles one quantified path formula given the
    masks of its arguments; subclasses provide the game and MDP variants.
    """

    def __init__(self, game, universe, strict=True):
        self.game = game
        self.ix = game.index
        self.arena = self.ix.arena
        self.universe = universe
        self.strict = strict
        self.cache = {}

    def atom(self, name):
        if name not in self.universe:
            if self.strict:
                raise UnknownAtom(name)
            return np.zeros(self.ix.n, dtype=bool)
        return np.array([name in lab for lab in self.ix.labels], dtype=bool)

    def eval(self, f):
        hit = self.cache.get(f)
        if hit is not None:
            return hit
        # iterative post-order so deep formulas do not hit the recursion limit
        stack = [(f, False)]
        while stack:
            g, ready = stack.pop()
            if g in self.cache:
                continue
            subs = _children(g)
            if not ready and any(s not in self.cache for s in subs):
                stack.append((g, True))
                stack.extend((s, False) for s in subs if s not in self.cache)
                continue
            self.cache[g] = self._node(g)
        return self.cache[f]

    def _node(self, g):
        n = self.ix.n
        if isinstance(g, Const):
            return np.full(n, g.value, dtype=bool)
        if isinstance(g, Atom):
            return self.atom(g.name)
        if isinstance(g, NegAtom):
            return ~self.atom(g.name)
        if isinstance(g, And):
            return np.logical_and.reduce([self.cache[a] for a in g.args])
        if isinstance(g, Or):
            return np.logical_or.reduce([self.cache[a] for a in g.args])
        if isinstance(g, Quant):
            p = g.path
            if isinstance(p, Next):
                masks = (self.cache[p.sub],)
            else:
                masks = (self.cache[p.left], self.cache[p.right])
            return self.quantified(g.quantifier, p, masks)
        # bare path formulas are only evaluated as part of their quantifier
        return None

    def quantified(self, q, path, masks):
        if q not in GAME_QUANTIFIERS:
            raise WrongQuantifierFamily(f"{q} cannot be evaluated on a game")
        pre = PRE[q]
        if isinstance(path, Next):
            return pre(self.arena, masks[0])
        if isinstance(path, WeakUntil):
            return greatest_until(self.arena, pre, *masks)
        return least_until(self.arena, pre, *masks)


def _children(g):
    if isinstance(g, (And, Or)):
        return g.args
    if isinstance(g, Quant):
        p = g.path
        return (p.sub,) if isinstance(p, Next) else (p.left, p.right)
    return ()


def eval_atl_mask(game, f, strict=True):
    return Evaluator(game, game.propositions, strict).eval(f)


def eval_atl(game, f, strict: bool = True) -> frozenset:
    """States of `game` satisfying the C-ATL formula f.

    With strict=False atoms outside the game's vocabulary are false
    everywhere instead of raising UnknownAtom.
    """
    mask = eval_atl_mask(game, f, strict)
    return frozenset(s for s, b in zip(game.states, mask.tolist()) if b)
