"""Distinguishing formulas read off the adversary's winning strategy.

For alternating games every pair outside the combined-simulation relation
is separated by a C-ATL formula that holds on the left and fails on the
right.  It is built by induction on the adversary's attractor rank:

* a pair with different labels yields a literal;
* otherwise the adversary's strategy picks a gadget and the proponent's
  possible answers lead to Pair states of smaller rank, whose formulas
  are combined under a next-step quantifier.

When the proponent's answers vary the right-hand state (Player-1 pairs,
and the Sim gadget) the recursive formulas are conjoined: the left state
reaches one state satisfying all of them while every right successor
fails one.  When they vary the left-hand state (the Alt gadget at
Player-2 pairs) they are disjoined.
"""

import numpy as np

from ..errors import CombsimError, NotDistinguishable
from ..model import AlternatingGame, Game
from ..relations import ALT2, PAIR, SimGame
from .atl import eval_atl_mask
from .formula import P1, P12, Atom, NegAtom, Next, Quant, conj, disj


def _literal(g, h, s, t):
    ls, lt = g.labels.get(s, frozenset()), h.labels.get(t, frozenset())
    only_left = sorted(ls - lt)
    if only_left:
        return Atom(only_left[0])
    return NegAtom(sorted(lt - ls)[0])


class _Builder:
    def __init__(self, game: SimGame, owner_left):
        self.game = game
        self.res = game.solve()
        self.owner = owner_left
        self.memo = {}

    def targets(self, v):
        """Pair nodes reached from v when the adversary follows its strategy
        and the proponent may answer in every way."""
        arena, res, kind = self.game.arena, self.res, self.game.kind
        out, stack, seen = [], [v], set()
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if kind[u] == PAIR:
                out.append(u)
            elif self.game.is_adversary(u):
                stack.append(int(res.witness[arena.slot_ptr[u]]))
            else:
                for k in arena.slots(u):
                    stack.extend(arena.successors(k).tolist())
        return sorted(out)

    def formula(self, root):
        g, h = self.game.alt, self.game.right
        rank = self.res.rank
        # collect the Pair nodes involved, then build from low to high rank
        needed, stack = set(), [root]
        plan = {}
        while stack:
            v = stack.pop()
            if v in needed or v in self.memo:
                continue
            needed.add(v)
            if self.game.bad[v]:
                continue
            w = int(self.res.witness[self.game.arena.slot_ptr[v]])
            plan[v] = (w, self.targets(w))
            stack.extend(plan[v][1])
        for v in sorted(needed, key=lambda u: rank[u]):
            s = g.states[self.game.left[v]]
            t = h.states[self.game.right_state[v]]
            if self.game.bad[v]:
                self.memo[v] = _literal(g, h, s, t)
                continue
            w, tg = plan[v]
            subs = [self.memo[u] for u in tg]
            same_left = len({int(self.game.left[u]) for u in tg}) == 1
            body = conj(*subs) if same_left else disj(*subs)
            if self.game.kind[w] == ALT2 or self.owner[s] == 1:
                q = P1
            else:
                q = P12
            self.memo[v] = Quant(q, Next(body))
        return self.memo[root]


def _prepare(g, h):
    ga, ha = AlternatingGame.of(g), AlternatingGame.of(h)
    return ga, ha


def distinguishing_formulas(g: Game, h: Game) -> dict:
    """Distinguishing formulas for every pair outside combined simulation."""
    ga, ha = _prepare(g, h)
    game = SimGame(ga, ga, ha)
    b = _Builder(game, ga.owner)
    out = {}
    for v in np.flatnonzero(b.res.adversary_win[:game.n_pairs]).tolist():
        st = game.state(v)
        out[(st.left, st.right)] = b.formula(v)
    return out


def distinguishing_formula(g: Game, h: Game, s: str, t: str, verify: bool = True):
    """A C-ATL formula true at s in g and false at t in h.

    Raises NotDistinguishable when t combined-simulates s, and
    NotAlternating when either game is not alternating.
    """
    ga, ha = _prepare(g, h)
    seed = ga.index.pos[s] * ha.index.n + ha.index.pos[t]
    game = SimGame(ga, ga, ha, seeds=[seed])
    b = _Builder(game, ga.owner)
    v = game.pair_node(s, t)
    if b.res.proponent_win[v]:
        raise NotDistinguishable(f"{t!r} combined-simulates {s!r}")
    f = b.formula(v)
    if verify:
        left = eval_atl_mask(ga, f, strict=False)[ga.index.pos[s]]
        right = eval_atl_mask(ha, f, strict=False)[ha.index.pos[t]]
        if not left or right:
            raise CombsimError(f"constructed formula does not separate {s!r} and {t!r}")
    return f
