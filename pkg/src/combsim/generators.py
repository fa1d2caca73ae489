"""Seeded random games, MDPs, partitions and formulas.

Used by the benchmark command and by the randomized tests.  Everything is
driven by an explicit random.Random so instances are reproducible.
"""

import random
from fractions import Fraction

from .logic.formula import (FALSE, P1, P12, TRUE, Atom, NegAtom, Next, Quant, Until, WeakUntil,
                            conj, disj)
from .model import TURN, Game, make_game, make_mdp


def random_game(rng: random.Random, n: int, actions=("a", "b"), props=("p",),
                p_avail=0.6, max_succ=2, p_label=0.3, prefix="s", full_avail=False) -> Game:
    states = [f"{prefix}{i}" for i in range(n)]
    transitions = []
    for s in states:
        if full_avail:
            av = list(actions)
        else:
            av = [a for a in actions if rng.random() < p_avail] or [rng.choice(actions)]
        for a in av:
            k = rng.randint(1, min(max_succ, n))
            transitions.append((s, a, sorted(rng.sample(states, k), key=states.index)))
    labels = {s: [q for q in props if rng.random() < p_label] for s in states}
    return make_game(states, transitions, states[0], labels, props)


def random_alternating_game(rng: random.Random, n: int, actions=("a", "b"), props=("p",),
                            max_succ=3, p_label=0.3, prefix="s") -> Game:
    """Game with Player-1 states (labelled turn, deterministic actions) and
    Player-2 states (a single action)."""
    states = [f"{prefix}{i}" for i in range(n)]
    p1 = {s for s in states if rng.random() < 0.5}
    p1.add(states[0])
    transitions = []
    for s in states:
        if s in p1:
            av = [a for a in actions if rng.random() < 0.7] or [rng.choice(actions)]
            for a in av:
                transitions.append((s, a, [rng.choice(states)]))
        else:
            k = rng.randint(1, min(max_succ, n))
            transitions.append((s, rng.choice(actions), sorted(rng.sample(states, k), key=states.index)))
    labels = {s: [q for q in props if rng.random() < p_label] + ([TURN] if s in p1 else [])
              for s in states}
    return make_game(states, transitions, states[0], labels, tuple(props) + (TURN,))


def perturb(rng: random.Random, g: Game, prefix="t", changes=1) -> Game:
    """Copy of g (renamed) with a few random edits to transitions or labels.

    Keeps alternation when g is alternating: only successors of Player-2
    states gain or lose members and Player-1 states keep singletons.
    """
    ren = {s: prefix + s[1:] if s.startswith("s") else prefix + s for s in g.states}
    states = [ren[s] for s in g.states]
    trans = {(ren[s], a): [ren[t] for t in g.delta[(s, a)]] for s in g.states for a in g.avail[s]}
    labels = {ren[s]: set(g.labels[s]) for s in g.states}
    props = sorted(g.propositions - {TURN})
    for _ in range(changes):
        key = rng.choice(sorted(trans))
        kind = rng.random()
        succ = trans[key]
        turn = TURN in labels[key[0]]
        if kind < 0.4 and props:
            s = rng.choice(states)
            q = rng.choice(props)
            labels[s] ^= {q}
        elif turn or kind < 0.7:
            succ[rng.randrange(len(succ))] = rng.choice(states)
        elif len(succ) > 1:
            succ.pop(rng.randrange(len(succ)))
        else:
            succ.append(rng.choice(states))
        trans[key] = sorted(set(succ), key=states.index)
    transitions = [(s, a, ts) for (s, a), ts in trans.items()]
    return make_game(states, transitions, ren[g.initial], labels, g.propositions)


def random_mdp(rng: random.Random, n: int, actions=("a", "b"), props=("q", "r"), p_label=0.4,
               strictly_alternating=False, prefix="s"):
    states = [f"{prefix}{i}" for i in range(n)]
    if strictly_alternating:
        p1 = [s for i, s in enumerate(states) if i % 2 == 0]
    else:
        p1 = [s for s in states if rng.random() < 0.5]
        if not p1:
            p1 = [states[0]]
    probs = [s for s in states if s not in p1]
    moves, dists = [], {}
    for s in p1:
        av = [a for a in actions if rng.random() < 0.7] or [rng.choice(actions)]
        pool = probs if strictly_alternating and probs else states
        for a in av:
            moves.append((s, a, rng.choice(pool)))
    for s in probs:
        pool = p1 if strictly_alternating else states
        k = rng.randint(1, min(3, len(pool)))
        supp = sorted(rng.sample(pool, k), key=states.index)
        weights = [rng.randint(1, 3) for _ in supp]
        tot = sum(weights)
        dists[s] = {t: Fraction(w, tot) for t, w in zip(supp, weights)}
    labels = {s: [q for q in props if rng.random() < p_label] for s in states}
    return make_mdp(states, p1, moves, dists, states[0], labels, props)


def random_partition_blocks(rng: random.Random, g: Game):
    """Random label-respecting partition, as a list of state lists."""
    groups = {}
    for s in g.states:
        groups.setdefault(g.labels[s], []).append(s)
    blocks = []
    for members in groups.values():
        k = rng.randint(1, len(members))
        parts = [[] for _ in range(k)]
        for s in members:
            parts[rng.randrange(k)].append(s)
        blocks += [p for p in parts if p]
    return blocks


def random_formula(rng: random.Random, props, depth=3, quantifiers=(P1, P12)):
    """Random state formula with at most `depth` nested quantifiers."""
    r = rng.random()
    if depth == 0 or r < 0.25:
        c = rng.random()
        if c < 0.08:
            return TRUE
        if c < 0.12:
            return FALSE
        q = rng.choice(sorted(props))
        return Atom(q) if rng.random() < 0.6 else NegAtom(q)
    if r < 0.4:
        op = conj if rng.random() < 0.5 else disj
        return op(random_formula(rng, props, depth, quantifiers),
                  random_formula(rng, props, depth - 1, quantifiers))
    q = rng.choice(quantifiers)
    k = rng.random()
    sub = lambda: random_formula(rng, props, depth - 1, quantifiers)
    if k < 0.35:
        return Quant(q, Next(sub()))
    if k < 0.7:
        return Quant(q, Until(sub(), sub()))
    if k < 0.85:
        return Quant(q, WeakUntil(sub(), FALSE))
    return Quant(q, WeakUntil(sub(), sub()))


def random_triple(rng: random.Random, max_states=6, actions=("a", "b")):
    """Random (g1, g2, spec) instance for the assume-guarantee check.

    The specification is drawn from a mix of shapes so that both verdicts
    are common: the exact composition, an edited copy of it, a quotient of
    it, or an unrelated random game.
    """
    from .model import compose_games
    from .errors import EmptyAvailInComposite
    while True:
        g1 = random_game(rng, rng.randint(1, max_states), actions, ("p",), prefix="u")
        g2 = random_game(rng, rng.randint(1, max_states), actions, ("q",), p_label=0.4, prefix="v")
        try:
            comp = compose_games(g1, g2)
        except EmptyAvailInComposite:
            continue
        shape = rng.random()
        if shape < 0.25:
            spec = comp
        elif shape < 0.6:
            spec = perturb(rng, comp, prefix="w", changes=rng.randint(1, 2))
        elif shape < 0.8:
            spec = _quotient(rng, comp)
        else:
            spec = random_game(rng, rng.randint(1, max_states), actions, ("p", "q"), prefix="w")
        return g1, g2, spec


def _quotient(rng, g):
    from .abstraction import Partition, simulation_abstraction
    part = Partition.from_blocks(g, random_partition_blocks(rng, g))
    return simulation_abstraction(g, part)
