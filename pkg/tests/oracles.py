"""Slow reference implementations used as test oracles.

Each one works directly on the dictionaries of a Game or Mdp with plain
Python sets, so it shares no code with the numpy engine under test.
"""

import itertools

import networkx as nx

from combsim.logic.formula import (ALMOST, P0, P1, P2, P12, And, Atom, Const, NegAtom, Next, Or,
                                   Quant, WeakUntil)


# Safety games on explicit arenas

def brute_attractor(nodes, owner, edges, bad):
    """Adversary attractor of `bad` by naive iteration.

    owner[v] is "adv" or "pro"; edges[v] lists the successors.  A
    proponent node without successors is lost for the proponent.
    """
    attr = set(bad)
    while True:
        new = set(attr)
        for v in nodes:
            if v in attr:
                continue
            succ = edges[v]
            if owner[v] == "adv" and any(u in attr for u in succ):
                new.add(v)
            if owner[v] == "pro" and all(u in attr for u in succ):
                new.add(v)
        if new == attr:
            return attr
        attr = new


# C-ATL by strategy enumeration

def _paths_ok(states, edges, sat_left, sat_right, weak):
    """States from which every path in the graph satisfies left U right
    (or left W right when weak).  edges maps a state to its successor set."""
    good = set()
    for s in states:
        # explore left-and-not-right states reachable from s
        stack, seen, ok = [s], set(), True
        while stack and ok:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            if v in sat_right:
                continue
            if v not in sat_left:
                ok = False
                break
            stack.extend(edges[v])
        if ok and not weak:
            # no cycle inside the explored left-and-not-right region
            region = {v for v in seen if v not in sat_right}
            sub = nx.DiGraph()
            sub.add_nodes_from(region)
            sub.add_edges_from((v, u) for v in region for u in edges[v] if u in region)
            if not nx.is_directed_acyclic_graph(sub):
                ok = False
        if ok:
            good.add(s)
    return good


def _some_path(states, edges, sat_left, sat_right, weak):
    """States with some path satisfying left U right (or left W right)."""
    g = nx.DiGraph()
    g.add_nodes_from(states)
    g.add_edges_from((v, u) for v in states for u in edges[v] if v in sat_left)
    out = set()
    for s in states:
        reach = nx.descendants(g, s) | {s}
        if any(v in sat_right for v in reach):
            out.add(s)
            continue
        if weak:
            inner = g.subgraph([v for v in reach if v in sat_left])
            if any(len(c) > 1 or inner.has_edge(next(iter(c)), next(iter(c)))
                   for c in nx.strongly_connected_components(inner)):
                out.add(s)
    return out


def atl_oracle(game, f):
    """C-ATL semantics through memoryless strategy enumeration."""
    states = list(game.states)
    cache = {}

    def ev(h):
        if h in cache:
            return cache[h]
        if isinstance(h, Const):
            r = set(states) if h.value else set()
        elif isinstance(h, Atom):
            r = {s for s in states if h.name in game.labels[s]}
        elif isinstance(h, NegAtom):
            r = {s for s in states if h.name not in game.labels[s]}
        elif isinstance(h, And):
            r = set.intersection(*(ev(a) for a in h.args))
        elif isinstance(h, Or):
            r = set.union(*(ev(a) for a in h.args))
        else:
            r = quant(h)
        cache[h] = r
        return r

    def quant(h: Quant):
        p, q = h.path, h.quantifier
        if isinstance(p, Next):
            left, right, kind = None, ev(p.sub), "next"
        else:
            left, right = ev(p.left), ev(p.right)
            kind = "weak" if isinstance(p, WeakUntil) else "until"
        if kind == "next":
            out = set()
            for s in states:
                succ = [set(game.delta[(s, a)]) for a in game.avail[s]]
                if q == P1:
                    ok = any(x <= right for x in succ)
                elif q == P12:
                    ok = any(x & right for x in succ)
                elif q == P2:
                    ok = all(x & right for x in succ)
                else:
                    ok = all(x <= right for x in succ)
                if ok:
                    out.add(s)
            return out
        weak = kind == "weak"
        if q == P1:
            out = set()
            for sigma in itertools.product(*(game.avail[s] for s in states)):
                edges = {s: set(game.delta[(s, a)]) for s, a in zip(states, sigma)}
                out |= _paths_ok(states, edges, left, right, weak)
            return out
        if q == P12:
            edges = {s: {t for a in game.avail[s] for t in game.delta[(s, a)]} for s in states}
            return _some_path(states, edges, left, right, weak)
        if q == P0:
            edges = {s: {t for a in game.avail[s] for t in game.delta[(s, a)]} for s in states}
            return _paths_ok(states, edges, left, right, weak)
        # <<2>>: Player 2 fixes a memoryless answer per (state, action)
        keys = [(s, a) for s in states for a in game.avail[s]]
        out = set()
        for theta in itertools.product(*(game.delta[k] for k in keys)):
            choice = dict(zip(keys, theta))
            edges = {s: {choice[(s, a)] for a in game.avail[s]} for s in states}
            out |= _paths_ok(states, edges, left, right, weak)
        return out

    return ev(f)


# Qualitative MDP analysis by memoryless strategies and BSCCs

def _strategies(m):
    p1 = [s for s in m.states if s in m.player1]
    for choice in itertools.product(*(m.avail[s] for s in p1)):
        yield dict(zip(p1, choice))


def _chain(m, sigma):
    return {s: ({m.delta1[(s, sigma[s])]} if s in m.player1 else set(m.dist[s]))
            for s in m.states}


def _almost_reach(states, edges, target, allowed):
    """Probability-1 reachability of target through `allowed` in a Markov chain."""
    g = nx.DiGraph()
    g.add_nodes_from(states)
    for v in states:
        if v in target or v not in allowed:
            g.add_edge(v, v)                 # absorbing
        else:
            g.add_edges_from((v, u) for u in edges[v])
    good = set()
    bsccs = [c for c in nx.attracting_components(g)]
    win = {frozenset(c) for c in bsccs if c & target}
    for s in states:
        reach = nx.descendants(g, s) | {s}
        if all(frozenset(c) in win for c in bsccs if c <= reach):
            good.add(s)
    return good


def _positive_weak(states, edges, left, right):
    """Positive probability of left W right in a Markov chain."""
    g = nx.DiGraph()
    g.add_nodes_from(states)
    g.add_edges_from((v, u) for v in states for u in edges[v])
    full_bsccs = [c for c in nx.attracting_components(g)]
    inner = nx.DiGraph()
    inner.add_nodes_from(states)
    inner.add_edges_from((v, u) for v in states for u in edges[v]
                         if v in left and v not in right)
    out = set()
    for s in states:
        reach = nx.descendants(inner, s) | {s}
        if any(v in right for v in reach) or any(c <= left and c & reach for c in full_bsccs):
            out.add(s)
    return out


def qctl_oracle(m, f):
    """QCTL semantics on an MDP by memoryless strategy enumeration."""
    states = list(m.states)
    cache = {}

    def ev(h):
        if h in cache:
            return cache[h]
        if isinstance(h, Const):
            r = set(states) if h.value else set()
        elif isinstance(h, Atom):
            r = {s for s in states if h.name in m.labels[s]}
        elif isinstance(h, NegAtom):
            r = {s for s in states if h.name not in m.labels[s]}
        elif isinstance(h, And):
            r = set.intersection(*(ev(a) for a in h.args))
        elif isinstance(h, Or):
            r = set.union(*(ev(a) for a in h.args))
        else:
            r = quant(h)
        cache[h] = r
        return r

    def quant(h):
        p, almost = h.path, h.quantifier == ALMOST
        out = set()
        if isinstance(p, Next):
            x = ev(p.sub)
            for sigma in _strategies(m):
                for s, succ in _chain(m, sigma).items():
                    if (succ <= x) if almost else (succ & x):
                        out.add(s)
            return out
        left, right = ev(p.left), ev(p.right)
        weak = isinstance(p, WeakUntil)
        for sigma in _strategies(m):
            edges = _chain(m, sigma)
            if almost and weak:
                # probability one of a safety-like objective means no bad finite path
                out |= _paths_ok(states, edges, left, right, weak=True)
            elif almost:
                out |= _almost_reach(states, edges, right, left)
            elif weak:
                out |= _positive_weak(states, edges, left, right)
            else:
                out |= _some_path(states, edges, left, right, weak=False)
        return out

    return ev(f)


def almost_until_oracle(m, q, r):
    """States where Player 1 can reach r through q with probability one."""
    out = set()
    for sigma in _strategies(m):
        out |= _almost_reach(list(m.states), _chain(m, sigma), set(r), set(q))
    return out
