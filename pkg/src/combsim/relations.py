"""Simulation, alternating simulation and combined simulation.

Combined simulation is decided by a safety game whose states are pairs of
game states plus the intermediate stages of two gadgets:

  Pair(s,s')              adversary picks the Sim or the Alt gadget
  SimStage2(s,s')         adversary picks t, a successor of s
  SimStage1(t,s')         proponent picks t', a successor of s'  -> Pair(t,t')
  AltStage2(s,s')         adversary picks an action a of s
  AltStage1(s,s',a)       proponent picks an action a' of s'
  AltStage2b(s,s',a,a')   adversary picks t' in δ'(s',a')
  AltStage1b(s,t',a,a')   proponent picks t in δ(s,a)            -> Pair(t,t')

The adversary wins by reaching a pair with different labels.  The game is
built with numpy, one family of stages at a time.  The coinductive
refinement algorithms at the bottom of the module compute the same
relations directly and serve as the reference implementation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MismatchedCarriers
from .model import Game, as_alternating
from .solve import SafetyInstance, expand, solve_safety

PAIR, ALT2, SIM2, SIM1, ALT1, ALT2B, ALT1B = range(7)
KIND_NAMES = ("Pair", "AltStage2", "SimStage2", "SimStage1", "AltStage1", "AltStage2b", "AltStage1b")
ADVERSARY_KINDS = frozenset({PAIR, ALT2, SIM2, ALT2B})


@dataclass(frozen=True)
class SimGameState:
    """Decoded game state.  `left` and `right` are state ids of the two games."""
    kind: str
    left: str
    right: str
    action: str | None = None
    action2: str | None = None

    def __str__(self):
        parts = [self.left, self.right] + [a for a in (self.action, self.action2) if a is not None]
        return f"{self.kind}({','.join(parts)})"


def _label_ids(g, h):
    ids = {}
    lg = np.array([ids.setdefault(lab, len(ids)) for lab in g.index.labels], dtype=np.int64)
    lh = np.array([ids.setdefault(lab, len(ids)) for lab in h.index.labels], dtype=np.int64)
    return lg, lh


def _union_post(a, b):
    """Per-state union of the successor lists of two indexed games on the same states."""
    if a is b:
        return a.post_ptr, a.post
    rows_a = np.repeat(np.arange(a.n), np.diff(a.post_ptr))
    rows_b = np.repeat(np.arange(b.n), np.diff(b.post_ptr))
    codes = np.unique(np.concatenate([rows_a * a.n + a.post, rows_b * b.n + b.post]))
    ptr = np.zeros(a.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(codes // a.n, minlength=a.n), out=ptr[1:])
    return ptr, codes % a.n


def _reachable_pairs(gi, hi, ptr, post, seeds):
    n2 = hi.n
    visited = np.zeros(gi.n * n2, dtype=bool)
    visited[seeds] = True
    frontier = np.asarray(seeds, dtype=np.int64)
    while frontier.size:
        rows, us = expand(frontier // n2, ptr, post)
        rows2, vs = expand(frontier[rows] % n2, hi.post_ptr, hi.post)
        codes = us[rows2] * n2 + vs
        codes = np.unique(codes[~visited[codes]])
        visited[codes] = True
        frontier = codes
    return np.flatnonzero(visited)


class SimGame:
    """The combined-simulation game (or its modified variant) over dense node ids.

    Node ids are grouped by stage kind in the order of KIND_NAMES; the Pair
    nodes come first, in increasing (s, s') order.
    """

    def __init__(self, alt: Game, sim: Game, right: Game, seeds=None, skip_step=False):
        self.alt, self.sim, self.right = alt, sim, right
        ai, si, hi = alt.index, sim.index, right.index
        n, n2 = ai.n, hi.n
        self.skip_step = False
        p1_left = p1_right = None
        if skip_step:
            la, ls, lr = as_alternating(alt), as_alternating(sim), as_alternating(right)
            if la is not None and ls is not None and lr is not None:
                self.skip_step = True
                p1_left = np.array([la.owner[s] == 1 for s in alt.states], dtype=bool)
                p1_right = np.array([lr.owner[s] == 1 for s in right.states], dtype=bool)

        if seeds is None:
            pairs = np.arange(n * n2, dtype=np.int64)
        else:
            ptr, post = _union_post(ai, si)
            pairs = _reachable_pairs(ai, hi, ptr, post, np.unique(np.asarray(seeds, dtype=np.int64)))
        self.pair_codes = pairs
        n_pairs = len(pairs)
        ps, pt = pairs // n2, pairs % n2

        def pair_node(codes):
            idx = np.searchsorted(pairs, codes)
            assert np.all(pairs[np.minimum(idx, n_pairs - 1)] == codes), "pair closure broken"
            return idx

        K2 = hi.n_slots
        m2 = max(len(right.actions), 1)
        adv_src, adv_dst = [], []          # adversary edges (node, successor)
        pro_src, pro_dst = [], []          # proponent edges, one slot each
        adv_nodes = [np.arange(3 * n_pairs, dtype=np.int64)]   # Pair, Alt2, Sim2

        # Pair -> Alt2, Sim2
        base = np.arange(n_pairs, dtype=np.int64)
        adv_src += [base, base]
        adv_dst += [base + n_pairs, base + 2 * n_pairs]

        # Sim2 -> Sim1 -> Pair
        rows, ts = expand(ps, si.post_ptr, si.post)
        sim1_edge_codes = ts * n2 + pt[rows]
        sim1 = np.unique(sim1_edge_codes)
        off_sim1 = 3 * n_pairs
        adv_src.append(rows + 2 * n_pairs)
        adv_dst.append(off_sim1 + np.searchsorted(sim1, sim1_edge_codes))
        rows, tps = expand(sim1 % n2, hi.post_ptr, hi.post)
        pro_src.append(off_sim1 + rows)
        pro_dst.append(pair_node((sim1 // n2)[rows] * n2 + tps))

        if self.skip_step:
            both1 = p1_left[ps] & p1_right[pt]
            both2 = ~p1_left[ps] & ~p1_right[pt]
        else:
            both1 = both2 = np.zeros(n_pairs, dtype=bool)

        # Alt2 -> Alt1 for ordinary pairs
        keep = np.flatnonzero(~both2)
        rows, ks = expand(ps[keep], ai.slot_ptr, np.arange(ai.n_slots, dtype=np.int64))
        alt1_k, alt1_r = ks, pt[keep][rows]
        alt1_skip = both1[keep][rows]
        off_alt1 = off_sim1 + len(sim1)
        adv_src.append(keep[rows] + n_pairs)
        adv_dst.append(off_alt1 + np.arange(len(ks), dtype=np.int64))

        # Alt1 -> (skipped) Pair for Player-1 pairs
        sk = np.flatnonzero(alt1_skip)
        rows, k2s = expand(alt1_r[sk], hi.slot_ptr, np.arange(K2, dtype=np.int64))
        if len(rows):
            t = ai.succ[ai.succ_ptr[alt1_k[sk][rows]]]
            t2 = hi.succ[hi.succ_ptr[k2s]]
            pro_src.append(off_alt1 + sk[rows])
            pro_dst.append(pair_node(t * n2 + t2))

        # Alt1 -> Alt2b for the others; Alt2 -> Alt2b directly for Player-2 pairs
        nk = np.flatnonzero(~alt1_skip)
        rows, k2s = expand(alt1_r[nk], hi.slot_ptr, np.arange(K2, dtype=np.int64))
        alt1_edge_codes = alt1_k[nk][rows] * K2 + k2s
        direct = np.flatnonzero(both2)
        direct_codes = ai.slot_ptr[ps[direct]] * K2 + hi.slot_ptr[pt[direct]]
        alt2b = np.unique(np.concatenate([alt1_edge_codes, direct_codes]))
        off_alt2b = off_alt1 + len(ks)
        pro_src.append(off_alt1 + nk[rows])
        pro_dst.append(off_alt2b + np.searchsorted(alt2b, alt1_edge_codes))
        adv_src.append(direct + n_pairs)
        adv_dst.append(off_alt2b + np.searchsorted(alt2b, direct_codes))

        # Alt2b -> Alt1b -> Pair
        b_k, b_k2 = alt2b // K2, alt2b % K2
        rows, t2s = expand(b_k2, hi.succ_ptr, hi.succ)
        alt1b_edge_codes = (b_k[rows] * n2 + t2s) * m2 + hi.slot_action[b_k2[rows]]
        alt1b = np.unique(alt1b_edge_codes)
        off_alt1b = off_alt2b + len(alt2b)
        adv_src.append(off_alt2b + rows)
        adv_dst.append(off_alt1b + np.searchsorted(alt1b, alt1b_edge_codes))
        c_k = alt1b // (n2 * m2)
        c_t2 = (alt1b // m2) % n2
        c_a2 = alt1b % m2
        rows, ts = expand(c_k, ai.succ_ptr, ai.succ)
        pro_src.append(off_alt1b + rows)
        pro_dst.append(pair_node(ts * n2 + c_t2[rows]))
        n_nodes = off_alt1b + len(alt1b)
        adv_nodes.append(np.arange(off_alt2b, off_alt1b, dtype=np.int64))

        # decoding tables
        kind = np.empty(n_nodes, dtype=np.int8)
        left = np.empty(n_nodes, dtype=np.int64)
        right_ = np.empty(n_nodes, dtype=np.int64)
        act = np.full(n_nodes, -1, dtype=np.int64)
        act2 = np.full(n_nodes, -1, dtype=np.int64)
        for k, off in ((PAIR, 0), (ALT2, n_pairs), (SIM2, 2 * n_pairs)):
            kind[off:off + n_pairs] = k
            left[off:off + n_pairs] = ps
            right_[off:off + n_pairs] = pt
        sl = slice(off_sim1, off_alt1)
        kind[sl], left[sl], right_[sl] = SIM1, sim1 // n2, sim1 % n2
        sl = slice(off_alt1, off_alt2b)
        kind[sl], left[sl], right_[sl] = ALT1, ai.slot_state[alt1_k], alt1_r
        act[sl] = ai.slot_action[alt1_k]
        sl = slice(off_alt2b, off_alt1b)
        kind[sl], left[sl], right_[sl] = ALT2B, ai.slot_state[b_k], hi.slot_state[b_k2]
        act[sl], act2[sl] = ai.slot_action[b_k], hi.slot_action[b_k2]
        sl = slice(off_alt1b, n_nodes)
        kind[sl], left[sl], right_[sl] = ALT1B, ai.slot_state[c_k], c_t2
        act[sl], act2[sl] = ai.slot_action[c_k], c_a2
        self.kind, self.left, self.right_state = kind, left, right_
        self.act, self.act2 = act, act2
        self.n_pairs = n_pairs

        self.arena = _assemble(n_nodes, np.concatenate(adv_nodes),
                               np.concatenate(adv_src), np.concatenate(adv_dst),
                               np.concatenate(pro_src), np.concatenate(pro_dst))
        lg, lh = _label_ids(alt, right)
        bad = np.zeros(n_nodes, dtype=bool)
        bad[:n_pairs] = lg[ps] != lh[pt]
        self.instance = SafetyInstance(self.arena, bad)

    @property
    def n_nodes(self):
        return self.arena.n_nodes

    @property
    def bad(self):
        return self.instance.bad

    def pair_node(self, s, t):
        """Node id of Pair(s,t), or -1 if it was not materialized."""
        code = self.alt.index.pos[s] * self.right.index.n + self.right.index.pos[t]
        i = int(np.searchsorted(self.pair_codes, code))
        if i < self.n_pairs and self.pair_codes[i] == code:
            return i
        return -1

    def is_adversary(self, v):
        return int(self.kind[v]) in ADVERSARY_KINDS

    def state(self, v) -> SimGameState:
        k = int(self.kind[v])
        a = int(self.act[v])
        a2 = int(self.act2[v])
        return SimGameState(
            KIND_NAMES[k], self.alt.states[self.left[v]], self.right.states[self.right_state[v]],
            self.alt.actions[a] if a >= 0 else None,
            self.right.actions[a2] if a2 >= 0 else None)

    def counts(self):
        """Number of nodes of each stage kind."""
        c = np.bincount(self.kind, minlength=len(KIND_NAMES))
        return dict(zip(KIND_NAMES, c.tolist()))

    def solve(self):
        return solve_safety(self.instance)

    def pair_matrix(self, result):
        """Proponent-winning Pair states as a boolean |S| x |S'| matrix."""
        m = np.zeros((self.alt.index.n, self.right.index.n), dtype=bool)
        n2 = self.right.index.n
        win = result.proponent_win[:self.n_pairs]
        m[self.pair_codes // n2, self.pair_codes % n2] = win
        return m


def _assemble(n_nodes, adv_nodes, adv_src, adv_dst, pro_src, pro_dst):
    """Arena from adversary nodes (one slot, many successors) and proponent edges."""
    from .solve import Arena
    n_adv = len(adv_nodes)
    slot_node = np.concatenate([adv_nodes, pro_src])
    slot_key = np.concatenate([np.full(n_adv, -1, dtype=np.int64), pro_dst])
    order = np.lexsort((slot_key, slot_node))
    new_id = np.empty_like(order)
    new_id[order] = np.arange(len(order))
    adv_slot = np.empty(n_nodes, dtype=np.int64)
    adv_slot[adv_nodes] = np.arange(n_adv)
    e_slot = np.concatenate([new_id[adv_slot[adv_src]], new_id[n_adv + np.arange(len(pro_src))]])
    e_dst = np.concatenate([adv_dst, pro_dst])
    eorder = np.lexsort((e_dst, e_slot))
    e_slot, e_dst = e_slot[eorder], e_dst[eorder]
    n_slots = len(slot_node)
    slot_ptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(np.bincount(slot_node, minlength=n_nodes), out=slot_ptr[1:])
    succ_ptr = np.zeros(n_slots + 1, dtype=np.int64)
    np.cumsum(np.bincount(e_slot, minlength=n_slots), out=succ_ptr[1:])
    return Arena(slot_ptr, succ_ptr, e_dst)


def build_combined_game(g: Game, h: Game, full: bool = True, skip_step: bool = False) -> SimGame:
    """Combined-simulation game between g and h.

    With full=False only the part reachable from the initial pair is built.
    skip_step shortens the alternating gadget when both games are
    alternating (it is silently ignored otherwise).
    """
    seeds = None if full else [g.index.pos[g.initial] * h.index.n + h.index.pos[h.initial]]
    return SimGame(g, g, h, seeds, skip_step)


def check_carriers(g_alt: Game, g_sim: Game):
    if (g_alt.states != g_sim.states or g_alt.initial != g_sim.initial
            or set(g_alt.actions) != set(g_sim.actions)
            or any(g_alt.labels.get(s, frozenset()) != g_sim.labels.get(s, frozenset())
                   for s in g_alt.states)):
        raise MismatchedCarriers("the two abstractions must share states, actions, labels and initial state")


def build_modified_game(g_alt: Game, g_sim: Game, h: Game, full: bool = False,
                        skip_step: bool = False) -> SimGame:
    """Like build_combined_game(g_alt, h) but the Sim gadget reads g_sim's transitions."""
    check_carriers(g_alt, g_sim)
    seeds = None if full else [g_alt.index.pos[g_alt.initial] * h.index.n + h.index.pos[h.initial]]
    return SimGame(g_alt, g_sim, h, seeds, skip_step)


class RelationMatrix:
    """A relation between the states of two games, stored as a boolean matrix."""

    def __init__(self, left: Game, right: Game, matrix):
        self.left, self.right = left, right
        self.matrix = np.asarray(matrix, dtype=bool)

    def __contains__(self, pair):
        s, t = pair
        return bool(self.matrix[self.left.index.pos[s], self.right.index.pos[t]])

    def pairs(self):
        return {(self.left.states[i], self.right.states[j]) for i, j in zip(*np.nonzero(self.matrix))}

    def __eq__(self, other):
        return isinstance(other, RelationMatrix) and np.array_equal(self.matrix, other.matrix)

    def __le__(self, other):
        return not np.any(self.matrix & ~other.matrix)

    def __and__(self, other):
        return RelationMatrix(self.left, self.right, self.matrix & other.matrix)

    def compose(self, other: "RelationMatrix") -> "RelationMatrix":
        prod = self.matrix.astype(np.int64) @ other.matrix.astype(np.int64)
        return RelationMatrix(self.left, other.right, prod > 0)

    def __len__(self):
        return int(self.matrix.sum())

    def __repr__(self):
        return f"RelationMatrix({len(self)} of {self.matrix.size} pairs)"


def max_combined_simulation(g: Game, h: Game, skip_step: bool = False) -> RelationMatrix:
    game = build_combined_game(g, h, full=True, skip_step=skip_step)
    return RelationMatrix(g, h, game.pair_matrix(game.solve()))


def combined_simulates(g: Game, h: Game, skip_step: bool = False) -> bool:
    """True iff the initial state of h combined-simulates the initial state of g."""
    game = build_combined_game(g, h, full=False, skip_step=skip_step)
    res = game.solve()
    return bool(res.proponent_win[game.pair_node(g.initial, h.initial)])


# Direct coinductive refinement.

def refine_relation(g: Game, h: Game, sim: bool, alt: bool):
    """Greatest relation with matching labels closed under the chosen step conditions.

    Starts from all label-equal pairs and deletes every violating pair in
    rounds until nothing changes.  Returns (matrix, number of rounds).
    """
    gi, hi = g.index, h.index
    post_g = [set(g.index.post[gi.post_ptr[i]:gi.post_ptr[i + 1]].tolist()) for i in range(gi.n)]
    post_h = [hi.post[hi.post_ptr[j]:hi.post_ptr[j + 1]].tolist() for j in range(hi.n)]
    slots_g = [[gi.succ[gi.succ_ptr[k]:gi.succ_ptr[k + 1]].tolist()
                for k in range(gi.slot_ptr[i], gi.slot_ptr[i + 1])] for i in range(gi.n)]
    slots_h = [[hi.succ[hi.succ_ptr[k]:hi.succ_ptr[k + 1]].tolist()
                for k in range(hi.slot_ptr[j], hi.slot_ptr[j + 1])] for j in range(hi.n)]
    rel = {(i, j) for i in range(gi.n) for j in range(hi.n) if gi.labels[i] == hi.labels[j]}

    def sim_ok(i, j):
        return all(any((t, u) in rel for u in post_h[j]) for t in post_g[i])

    def alt_ok(i, j):
        return all(any(all(any((t, u) in rel for t in succ) for u in succ2) for succ2 in slots_h[j])
                   for succ in slots_g[i])

    rounds = 0
    while True:
        bad = [p for p in rel if (sim and not sim_ok(*p)) or (alt and not alt_ok(*p))]
        if not bad:
            break
        rounds += 1
        rel.difference_update(bad)
    m = np.zeros((gi.n, hi.n), dtype=bool)
    for i, j in rel:
        m[i, j] = True
    return m, rounds


def max_simulation(g: Game, h: Game) -> RelationMatrix:
    return RelationMatrix(g, h, refine_relation(g, h, sim=True, alt=False)[0])


def max_alternating_simulation(g: Game, h: Game) -> RelationMatrix:
    return RelationMatrix(g, h, refine_relation(g, h, sim=False, alt=True)[0])


def coinductive_combined_simulation(g: Game, h: Game) -> RelationMatrix:
    return RelationMatrix(g, h, refine_relation(g, h, sim=True, alt=True)[0])


def simulates(g: Game, h: Game) -> bool:
    return (g.initial, h.initial) in max_simulation(g, h)


def alternating_simulates(g: Game, h: Game) -> bool:
    return (g.initial, h.initial) in max_alternating_simulation(g, h)
