"""Safety/reachability games solved by attractor computation.

An arena is stored in compressed form: node i owns the slots
slot_ptr[i]:slot_ptr[i+1] (one per available action of the proponent) and
slot k owns the successors succ[succ_ptr[k]:succ_ptr[k+1]] (picked by the
adversary).  A node with no slot is a dead end for the proponent, a slot
with no successor is a dead end for the adversary.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def expand(keys, ptr, data):
    """Pair every position i with each entry of data[ptr[keys[i]]:ptr[keys[i]+1]].

    Returns (row, values) where row[j] is the position in keys that produced
    values[j].  Rows come out in order.
    """
    keys = np.asarray(keys, dtype=np.int64)
    starts = ptr[keys]
    counts = ptr[keys + 1] - starts
    total = int(counts.sum())
    rows = np.repeat(np.arange(len(keys), dtype=np.int64), counts)
    if total == 0:
        return rows, data[:0]
    first = np.cumsum(counts) - counts
    idx = np.arange(total, dtype=np.int64) + np.repeat(starts - first, counts)
    return rows, data[idx]


@dataclass(frozen=True, eq=False)
class Arena:
    slot_ptr: np.ndarray
    succ_ptr: np.ndarray
    succ: np.ndarray

    @property
    def n_nodes(self):
        return len(self.slot_ptr) - 1

    @property
    def n_slots(self):
        return len(self.succ_ptr) - 1

    @property
    def n_edges(self):
        return len(self.succ)

    @cached_property
    def slot_node(self):
        return np.repeat(np.arange(self.n_nodes, dtype=np.int64), np.diff(self.slot_ptr))

    @cached_property
    def edge_slot(self):
        return np.repeat(np.arange(self.n_slots, dtype=np.int64), np.diff(self.succ_ptr))

    @cached_property
    def slot_degree(self):
        return np.diff(self.succ_ptr)

    @cached_property
    def node_degree(self):
        return np.diff(self.slot_ptr)

    @cached_property
    def reverse(self):
        """Edges grouped by target: (ptr over nodes, edge ids)."""
        order = np.argsort(self.succ, kind="stable")
        ptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.succ, minlength=self.n_nodes), out=ptr[1:])
        return ptr, order

    def successors(self, slot):
        return self.succ[self.succ_ptr[slot]:self.succ_ptr[slot + 1]]

    def slots(self, node):
        return range(self.slot_ptr[node], self.slot_ptr[node + 1])


def _as_mask(arena, X):
    X = np.asarray(X)
    if X.dtype == bool:
        return X
    m = np.zeros(arena.n_nodes, dtype=bool)
    m[X.astype(np.int64)] = True
    return m


def _slot_hits(arena, X):
    """Number of successors of every slot lying in X."""
    inx = _as_mask(arena, X)[arena.succ]
    return np.bincount(arena.edge_slot[inx], minlength=arena.n_slots)


def _node_count(arena, slot_ok):
    return np.bincount(arena.slot_node[slot_ok], minlength=arena.n_nodes)


def pre_exists_forall(arena, X):
    """{ s | some action a has all of δ(s,a) inside X } as a boolean mask."""
    return _node_count(arena, _slot_hits(arena, X) == arena.slot_degree) > 0


def pre_exists_exists(arena, X):
    """{ s | some action a has a successor inside X }."""
    return _node_count(arena, _slot_hits(arena, X) > 0) > 0


def pre_forall_exists(arena, X):
    """{ s | every action a has a successor inside X }."""
    return _node_count(arena, _slot_hits(arena, X) > 0) == arena.node_degree


def pre_forall_forall(arena, X):
    """{ s | every successor under every action lies inside X }."""
    return _node_count(arena, _slot_hits(arena, X) == arena.slot_degree) == arena.node_degree


@dataclass(frozen=True, eq=False)
class SafetyInstance:
    """The proponent must keep the play out of `bad` forever."""
    arena: Arena
    bad: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bad", _as_mask(self.arena, self.bad))


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Winning regions and memoryless strategies.

    rank[s] is the attractor round in which s was won by the adversary (-1
    on the proponent's region).  choice[s] is the proponent's slot at s
    (-1 where undefined) and witness[k] the adversary's answer to slot k.
    """
    instance: SafetyInstance
    rank: np.ndarray
    choice: np.ndarray
    witness: np.ndarray

    @property
    def arena(self):
        return self.instance.arena

    @cached_property
    def adversary_win(self):
        return self.rank >= 0

    @cached_property
    def proponent_win(self):
        return self.rank < 0

    def proponent_strategy(self):
        """{node: slot} on the proponent's winning region."""
        nodes = np.flatnonzero(self.choice >= 0)
        return dict(zip(nodes.tolist(), self.choice[nodes].tolist()))

    def adversary_strategy(self):
        """{(node, slot): successor} on the adversary's winning region."""
        out = {}
        arena = self.arena
        for v in np.flatnonzero(self.adversary_win & ~self.instance.bad).tolist():
            for k in arena.slots(v):
                out[(v, k)] = int(self.witness[k])
        return out


def solve_safety(inst: SafetyInstance) -> SolveResult:
    """Attractor of `bad` for the adversary, computed round by round.

    A slot is hit once one of its successors is attracted; a node is
    attracted once all of its slots are hit.  Every node and edge is
    processed once, so the running time is linear in the arena size.
    Ties are broken towards the lowest successor index.
    """
    arena = inst.arena
    n = arena.n_nodes
    remaining = arena.node_degree.copy()
    rank = np.full(n, -1, dtype=np.int64)
    hit = np.zeros(arena.n_slots, dtype=bool)
    witness = np.full(arena.n_slots, -1, dtype=np.int64)
    rev_ptr, rev_edge = arena.reverse
    slot_node = arena.slot_node
    edge_slot = arena.edge_slot

    frontier = np.flatnonzero(inst.bad | (remaining == 0))
    rank[frontier] = 0
    rnd = 0
    while frontier.size:
        tgt, edges = expand(frontier, rev_ptr, rev_edge)
        tgt = frontier[tgt]
        slots = edge_slot[edges]
        fresh = ~hit[slots]
        slots, tgt = slots[fresh], tgt[fresh]
        if slots.size == 0:
            break
        order = np.lexsort((tgt, slots))
        slots, tgt = slots[order], tgt[order]
        first = np.ones(len(slots), dtype=bool)
        first[1:] = slots[1:] != slots[:-1]
        slots, tgt = slots[first], tgt[first]
        hit[slots] = True
        witness[slots] = tgt
        nodes, counts = np.unique(slot_node[slots], return_counts=True)
        remaining[nodes] -= counts
        done = nodes[(remaining[nodes] == 0) & (rank[nodes] < 0)]
        rnd += 1
        rank[done] = rnd
        frontier = done

    choice = np.full(n, -1, dtype=np.int64)
    safe_slots = np.flatnonzero(~hit)
    owners = slot_node[safe_slots]
    keep = rank[owners] < 0
    owners, safe_slots = owners[keep], safe_slots[keep]
    uniq, first = np.unique(owners, return_index=True)
    choice[uniq] = safe_slots[first]
    return SolveResult(inst, rank, choice, witness)
