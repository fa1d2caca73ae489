import random

import numpy as np
from hypothesis import given, settings, strategies as st

from combsim.model import make_game
from combsim.solve import (Arena, SafetyInstance, pre_exists_exists, pre_exists_forall,
                           pre_forall_exists, pre_forall_forall, solve_safety)
from oracles import brute_attractor


def arena_from_lists(slots):
    """slots[v] is a list of successor lists, one per proponent choice."""
    slot_ptr = np.zeros(len(slots) + 1, dtype=np.int64)
    np.cumsum([len(x) for x in slots], out=slot_ptr[1:])
    flat = [succ for x in slots for succ in x]
    succ_ptr = np.zeros(len(flat) + 1, dtype=np.int64)
    np.cumsum([len(x) for x in flat], out=succ_ptr[1:])
    succ = np.array([t for x in flat for t in x], dtype=np.int64)
    return Arena(slot_ptr, succ_ptr, succ)


def random_slots(rng, n, dead_ends=True):
    out = []
    for _ in range(n):
        k = rng.randint(0 if dead_ends else 1, 3)
        out.append([sorted(rng.sample(range(n), rng.randint(0 if dead_ends else 1, min(3, n))))
                     for _ in range(k)])
    return out


def oracle(slots, bad):
    nodes, owner, edges = [], {}, {}
    for v, choices in enumerate(slots):
        nodes.append(("n", v))
        owner[("n", v)] = "pro"
        edges[("n", v)] = [("k", v, i) for i in range(len(choices))]
        for i, succ in enumerate(choices):
            key = ("k", v, i)
            nodes.append(key)
            owner[key] = "adv"
            edges[key] = [("n", t) for t in succ]
    attr = brute_attractor(nodes, owner, edges, {("n", v) for v in bad})
    return {v for v in range(len(slots)) if ("n", v) in attr}


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_winning_regions_match_naive_fixpoint(seed, n):
    rng = random.Random(seed)
    slots = random_slots(rng, n)
    bad = {v for v in range(n) if rng.random() < 0.25}
    res = solve_safety(SafetyInstance(arena_from_lists(slots), sorted(bad)))
    assert set(np.flatnonzero(res.adversary_win).tolist()) == oracle(slots, bad)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_strategies_and_ranks(seed, n):
    rng = random.Random(seed)
    slots = random_slots(rng, n)
    arena = arena_from_lists(slots)
    bad = np.array([rng.random() < 0.25 for _ in range(n)])
    res = solve_safety(SafetyInstance(arena, bad))
    win = res.proponent_win
    # determinacy
    assert np.all(win ^ res.adversary_win)
    # the proponent's choice keeps every successor inside its region
    for v, k in res.proponent_strategy().items():
        assert win[v] and not bad[v]
        assert all(win[t] for t in arena.successors(k))
    assert set(res.proponent_strategy()) == set(np.flatnonzero(win).tolist())
    # every adversary answer decreases the rank
    for (v, k), t in res.adversary_strategy().items():
        assert 0 <= res.rank[t] < res.rank[v]
        assert t in arena.successors(k).tolist()
    assert np.all(res.rank[bad] == 0)
    assert res.rank.max() <= n


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_proponent_strategy_never_reaches_bad(seed, n):
    """Play 2n steps under the proponent strategy against every memoryless adversary."""
    rng = random.Random(seed)
    slots = random_slots(rng, n, dead_ends=False)
    arena = arena_from_lists(slots)
    bad = np.array([rng.random() < 0.3 for _ in range(n)])
    res = solve_safety(SafetyInstance(arena, bad))
    strat = res.proponent_strategy()
    for v in strat:
        frontier, seen = {v}, set()
        for _ in range(2 * n):
            nxt = set()
            for u in frontier:
                assert not bad[u]
                nxt |= set(arena.successors(strat[u]).tolist())
            seen |= frontier
            frontier = nxt - seen
            if not frontier:
                break


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_enlarging_bad_is_monotone(seed, n):
    rng = random.Random(seed)
    arena = arena_from_lists(random_slots(rng, n))
    bad = np.array([rng.random() < 0.2 for _ in range(n)])
    more = bad | np.array([rng.random() < 0.2 for _ in range(n)])
    a = solve_safety(SafetyInstance(arena, bad)).adversary_win
    b = solve_safety(SafetyInstance(arena, more)).adversary_win
    assert np.all(b[a])


def test_empty_and_full_bad():
    rng = random.Random(3)
    arena = arena_from_lists(random_slots(rng, 6, dead_ends=False))
    res = solve_safety(SafetyInstance(arena, np.zeros(6, dtype=bool)))
    assert res.proponent_win.all()
    res = solve_safety(SafetyInstance(arena, np.ones(6, dtype=bool)))
    assert res.adversary_win.all() and np.all(res.rank == 0)


def test_ties_go_to_lowest_index():
    # one adversary slot with successors 1 and 2, both bad
    arena = arena_from_lists([[[2, 1]], [[1]], [[2]]])
    res = solve_safety(SafetyInstance(arena, [1, 2]))
    assert res.witness[0] == 1


def pre_instance():
    g = make_game(["s", "t", "u"], [("s", "a", ["t"]), ("s", "b", ["t", "u"]),
                                    ("t", "a", ["t"]), ("u", "a", ["u"])], "s")
    return g.index.arena, g.index


def test_pre_exists_forall_examples():
    arena, ix = pre_instance()
    assert pre_exists_forall(arena, np.ones(3, dtype=bool)).all()
    assert not pre_exists_forall(arena, np.zeros(3, dtype=bool)).any()
    assert pre_exists_forall(arena, ix.mask({"t"}))[ix.pos["s"]]


def test_pre_exists_exists_examples():
    arena, ix = pre_instance()
    assert not pre_exists_exists(arena, np.zeros(3, dtype=bool)).any()
    assert pre_exists_exists(arena, np.ones(3, dtype=bool)).all()
    assert pre_exists_exists(arena, ix.mask({"u"}))[ix.pos["s"]]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7))
def test_pre_operators_match_definitions(seed, n):
    rng = random.Random(seed)
    slots = random_slots(rng, n, dead_ends=False)
    arena = arena_from_lists(slots)
    x = {v for v in range(n) if rng.random() < 0.5}
    mask = np.array([v in x for v in range(n)])
    expect = {
        pre_exists_forall: [any(set(k) <= x for k in slots[v]) for v in range(n)],
        pre_exists_exists: [any(set(k) & x for k in slots[v]) for v in range(n)],
        pre_forall_exists: [all(set(k) & x for k in slots[v]) for v in range(n)],
        pre_forall_forall: [all(set(k) <= x for k in slots[v]) for v in range(n)],
    }
    for op, want in expect.items():
        assert op(arena, mask).tolist() == want
