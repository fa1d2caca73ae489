"""Qualitative analysis of MDPs through their two-player interpretation.

Almost-sure and positive-probability path formulas reduce to game
quantifiers on the interpretation, except almost-sure until, which needs
the nested fixpoint over the Apre operator.
"""

import numpy as np

from ..errors import PreconditionViolated, WrongQuantifierFamily
from ..model import Mdp
from ..solve import pre_exists_exists, pre_exists_forall
from .atl import Evaluator, greatest_until, least_until
from .formula import (ALMOST, FALSE, MDP_QUANTIFIERS, P1, P12, Atom, Next, Quant,
                      WeakUntil, conj, disj)


def _p1_mask(m: Mdp):
    return np.array([s in m.player1 for s in m.states], dtype=bool)


def apre_mask(m: Mdp, y, x):
    """Apre on masks over the states of m (no precondition check)."""
    ix = m.game.index
    p1 = _p1_mask(m)
    edge_state = ix.slot_state[np.repeat(np.arange(ix.n_slots), np.diff(ix.succ_ptr))]
    in_x = np.bincount(edge_state[x[ix.succ]], minlength=ix.n)
    out_y = np.bincount(edge_state[~y[ix.succ]], minlength=ix.n)
    return np.where(p1, in_x > 0, (out_y == 0) & (in_x > 0))


def _mask(m, ids):
    ix = m.game.index
    if isinstance(ids, np.ndarray):
        return ids.astype(bool)
    return ix.mask(ids)


def _ids(m, mask):
    return frozenset(s for s, b in zip(m.states, mask.tolist()) if b)


def apre(m: Mdp, y, x) -> frozenset:
    """Player-1 states with an action into x, and probabilistic states whose
    support lies inside y and meets x."""
    ym, xm = _mask(m, y), _mask(m, x)
    if np.any(xm & ~ym):
        raise PreconditionViolated("apre needs X ⊆ Y")
    return _ids(m, apre_mask(m, ym, xm))


def almost_until_mask(m: Mdp, q, r):
    """νY. μX. r ∪ (q ∩ Apre(Y, X)), iterated from Y = S."""
    n = len(m.states)
    y = np.ones(n, dtype=bool)
    while True:
        x = np.zeros(n, dtype=bool)
        while True:
            nxt = r | (q & apre_mask(m, y, x))
            if np.array_equal(nxt, x):
                break
            x = nxt
        if np.array_equal(x, y):
            return y
        y = x


def almost_until(m: Mdp, q, r) -> frozenset:
    """States from which Player 1 can make q U r hold with probability 1."""
    return _ids(m, almost_until_mask(m, _mask(m, q), _mask(m, r)))


def f_apre_check(m: Mdp, psi1, psi2) -> frozenset:
    """<<1>>X psi1 ∧ <<1,2>>X psi2 on the two-player interpretation of m."""
    y, x = _mask(m, psi1), _mask(m, psi2)
    if np.any(x & ~y):
        raise PreconditionViolated("the second argument must be contained in the first")
    arena = m.game.index.arena
    return _ids(m, pre_exists_forall(arena, y) & pre_exists_exists(arena, x))


class QctlEvaluator(Evaluator):
    def __init__(self, m: Mdp, strict=True):
        super().__init__(m.game, m.propositions, strict)
        self.mdp = m

    def quantified(self, q, path, masks):
        if q not in MDP_QUANTIFIERS:
            raise WrongQuantifierFamily(f"{q} cannot be evaluated on an MDP")
        arena = self.arena
        if q == ALMOST:
            if isinstance(path, Next):
                return pre_exists_forall(arena, masks[0])
            if isinstance(path, WeakUntil):
                return greatest_until(arena, pre_exists_forall, *masks)
            return almost_until_mask(self.mdp, *masks)
        if isinstance(path, Next):
            return pre_exists_exists(arena, masks[0])
        if isinstance(path, WeakUntil):
            left, right = masks
            safe = greatest_until(arena, pre_exists_forall, left, np.zeros_like(left))
            return (least_until(arena, pre_exists_exists, left, right)
                    | least_until(arena, pre_exists_exists, left, safe))
        return least_until(arena, pre_exists_exists, *masks)


def eval_qctl_mask(m: Mdp, f, strict=True):
    return QctlEvaluator(m, strict).eval(f)


def eval_qctl(m: Mdp, f, strict: bool = True) -> frozenset:
    """States of the MDP satisfying the QCTL formula f."""
    return _ids(m, eval_qctl_mask(m, f, strict))


def f_apre(psi1, psi2):
    """The formula <<1>>X psi1 ∧ <<1,2>>X psi2."""
    return conj(Quant(P1, Next(psi1)), Quant(P12, Next(psi2)))


def almost_until_formula(n: int, q=Atom("q"), r=Atom("r")):
    """C-ATL formula equivalent to <Almost>(q U r) on MDPs with at most n states.

    Unrolls both fixpoints n times: phi~_0 = true, phi_{i,0} = false,
    phi_{i,j+1} = r ∨ (q ∧ F_Apre(phi~_{i-1}, phi_{i,j})), phi~_i = phi_{i,n}.
    Subformulas are shared, so the tree is exponential but the DAG is not.
    """
    outer = conj()
    for _ in range(n):
        inner = FALSE
        for _ in range(n):
            inner = disj(r, conj(q, f_apre(outer, inner)))
        outer = inner
    return outer
