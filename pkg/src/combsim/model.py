"""Games, MDPs, structural validation and parallel composition.

State and action ids are strings.  Every model keeps the order in which its
states and actions were given; dense integer indices follow that order so
that all derived structures (and therefore all outputs) are reproducible.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import (DanglingReference, DuplicateId, EmptyAvail, EmptyAvailInComposite,
                     EmptyDelta, ModelError, NotAlternating, NotStrictlyAlternating,
                     ReservedName)

BOTTOM = "⊥"
TURN = "turn"


def _freeze(d):
    return MappingProxyType(dict(d))


def pair_id(s, t):
    return f"({s},{t})"


@dataclass(frozen=True, eq=False)
class Game:
    """Two-player game graph.

    Player 1 picks an available action, Player 2 picks one of its
    successors.  `extra_props` lists propositions that belong to the
    vocabulary even though no state carries them.
    """
    states: tuple
    actions: tuple
    avail: Mapping
    delta: Mapping
    labels: Mapping
    initial: str
    extra_props: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "avail", _freeze({s: tuple(v) for s, v in self.avail.items()}))
        object.__setattr__(self, "delta", _freeze({k: tuple(v) for k, v in self.delta.items()}))
        object.__setattr__(self, "labels", _freeze({s: frozenset(v) for s, v in self.labels.items()}))
        object.__setattr__(self, "extra_props", frozenset(self.extra_props))

    @cached_property
    def propositions(self):
        props = set(self.extra_props)
        for lab in self.labels.values():
            props |= lab
        return frozenset(props)

    @cached_property
    def index(self):
        return GameIndex(self)

    def post(self, s):
        """All successors of s under any action, in state order."""
        ix = self.index
        i = ix.pos[s]
        return tuple(self.states[j] for j in ix.post[ix.post_ptr[i]:ix.post_ptr[i + 1]])

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"Game({len(self.states)} states, {len(self.actions)} actions, initial={self.initial!r})"


class GameIndex:
    """Dense integer view of a game.

    Slots enumerate the available (state, action) pairs state by state; the
    successors of each slot are stored in CSR form.
    """

    def __init__(self, g):
        self.n = len(g.states)
        self.pos = {s: i for i, s in enumerate(g.states)}
        self.apos = {a: i for i, a in enumerate(g.actions)}
        slot_ptr = [0]
        slot_state, slot_action, succ_ptr, succ = [], [], [0], []
        post_ptr, post = [0], []
        for i, s in enumerate(g.states):
            seen = set()
            for a in g.avail.get(s, ()):
                slot_state.append(i)
                slot_action.append(self.apos[a])
                targets = [self.pos[t] for t in g.delta.get((s, a), ())]
                succ.extend(targets)
                succ_ptr.append(len(succ))
                seen.update(targets)
            slot_ptr.append(len(slot_state))
            post.extend(sorted(seen))
            post_ptr.append(len(post))
        self.slot_ptr = np.array(slot_ptr, dtype=np.int64)
        self.slot_state = np.array(slot_state, dtype=np.int64)
        self.slot_action = np.array(slot_action, dtype=np.int64)
        self.succ_ptr = np.array(succ_ptr, dtype=np.int64)
        self.succ = np.array(succ, dtype=np.int64)
        self.post_ptr = np.array(post_ptr, dtype=np.int64)
        self.post = np.array(post, dtype=np.int64)
        self.labels = [g.labels.get(s, frozenset()) for s in g.states]

    @property
    def n_slots(self):
        return len(self.slot_state)

    @cached_property
    def arena(self):
        from .solve import Arena
        return Arena(self.slot_ptr, self.succ_ptr, self.succ)

    def mask(self, ids):
        m = np.zeros(self.n, dtype=bool)
        for s in ids:
            m[self.pos[s]] = True
        return m


def make_game(states: Iterable[str], transitions: Iterable, initial: str,
              labels: Mapping | None = None, propositions: Iterable[str] = ()) -> Game:
    """Build and validate a game from (state, action, successors) triples.

    The action order is the order of first appearance in `transitions`.
    """
    states = list(states)
    seen = set()
    for s in states:
        if s in seen:
            raise DuplicateId(s)
        seen.add(s)
    actions, avail, delta = [], {s: [] for s in states}, {}
    for s, a, targets in transitions:
        if s not in seen:
            raise DanglingReference(s)
        if a == BOTTOM:
            raise ReservedName(a)
        if (s, a) in delta:
            raise DuplicateId(f"{s}/{a}")
        if a not in actions:
            actions.append(a)
        targets = list(targets)
        if len(set(targets)) != len(targets):
            raise DuplicateId(f"{s}/{a} successor")
        avail[s].append(a)
        delta[(s, a)] = targets
    labels = {s: frozenset((labels or {}).get(s, ())) for s in states}
    g = Game(tuple(states), tuple(actions), avail, delta, labels, initial, frozenset(propositions))
    return validate_game(g)


def validate_game(g: Game) -> Game:
    """Check every Game invariant; return g unchanged."""
    ids = set(g.states)
    if len(ids) != len(g.states):
        raise DuplicateId(next(s for s in g.states if g.states.count(s) > 1))
    if g.initial not in ids:
        raise DanglingReference(g.initial)
    acts = set(g.actions)
    for s in g.states:
        av = g.avail.get(s, ())
        if not av:
            raise EmptyAvail(s)
        for a in av:
            if a not in acts:
                raise DanglingReference(a)
            succ = g.delta.get((s, a), ())
            if not succ:
                raise EmptyDelta(s, a)
            for t in succ:
                if t not in ids:
                    raise DanglingReference(t)
    for (s, a) in g.delta:
        if s not in ids:
            raise DanglingReference(s)
        if a not in g.avail.get(s, ()):
            raise ModelError(f"transition for unavailable action {a!r} at {s!r}")
    for s in g.labels:
        if s not in ids:
            raise DanglingReference(s)
    return g


@dataclass(frozen=True, eq=False)
class AlternatingGame(Game):
    """A game where every state is owned by one player.

    owner[s] is 1 for Player-1 states (labelled `turn`, one successor per
    action) and 2 for Player-2 states (exactly one action).
    """
    owner: Mapping = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "owner", _freeze(self.owner))
        for s in self.states:
            who = self.owner.get(s)
            if who not in (1, 2):
                raise NotAlternating(f"state {s!r} has no owner")
            if (TURN in self.labels.get(s, ())) != (who == 1):
                raise NotAlternating(f"turn label of {s!r} does not match its owner")
            if who == 2 and len(self.avail.get(s, ())) != 1:
                raise NotAlternating(f"Player-2 state {s!r} must have exactly one action")
            if who == 1 and any(len(self.delta[(s, a)]) != 1 for a in self.avail.get(s, ())):
                raise NotAlternating(f"Player-1 state {s!r} must have singleton successors")

    @classmethod
    def of(cls, g: Game) -> "AlternatingGame":
        """Classify the states of g by the `turn` proposition."""
        if isinstance(g, AlternatingGame):
            return g
        owner = {s: 1 if TURN in g.labels.get(s, ()) else 2 for s in g.states}
        return cls(g.states, g.actions, g.avail, g.delta, g.labels, g.initial,
                   g.extra_props, owner)


def as_alternating(g: Game):
    """AlternatingGame view of g, or None when g is not alternating."""
    try:
        return AlternatingGame.of(g)
    except NotAlternating:
        return None


@dataclass(frozen=True, eq=False)
class Mdp:
    """MDP with Player-1 states and probabilistic states.

    delta1 maps (player-1 state, action) to a single state; dist maps each
    probabilistic state to a distribution with Fraction weights.
    """
    states: tuple
    player1: frozenset
    actions: tuple
    avail: Mapping
    delta1: Mapping
    dist: Mapping
    labels: Mapping
    initial: str
    extra_props: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "player1", frozenset(self.player1))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "avail", _freeze({s: tuple(v) for s, v in self.avail.items()}))
        object.__setattr__(self, "delta1", _freeze(self.delta1))
        object.__setattr__(self, "dist", _freeze({s: _freeze(d) for s, d in self.dist.items()}))
        object.__setattr__(self, "labels", _freeze({s: frozenset(v) for s, v in self.labels.items()}))
        object.__setattr__(self, "extra_props", frozenset(self.extra_props))

    @property
    def prob_states(self):
        return tuple(s for s in self.states if s not in self.player1)

    @cached_property
    def propositions(self):
        props = set(self.extra_props)
        for lab in self.labels.values():
            props |= lab
        return frozenset(props)

    @cached_property
    def game(self):
        """The two-player interpretation (computed once)."""
        return mdp_to_game(self)

    @cached_property
    def _order(self):
        return {s: i for i, s in enumerate(self.states)}

    def support(self, s):
        """States reached with positive probability from probabilistic state s."""
        order = self._order
        return tuple(sorted((t for t, p in self.dist[s].items() if p > 0), key=order.__getitem__))

    def successors(self, s):
        if s in self.player1:
            return tuple(dict.fromkeys(self.delta1[(s, a)] for a in self.avail[s]))
        return self.support(s)

    def __repr__(self):
        return (f"Mdp({len(self.player1)} player-1 states, {len(self.states) - len(self.player1)} "
                f"probabilistic states, initial={self.initial!r})")


def make_mdp(states: Iterable[str], player1: Iterable[str], moves: Iterable, dists: Mapping,
             initial: str, labels: Mapping | None = None, propositions: Iterable[str] = ()) -> Mdp:
    """Build and validate an MDP.

    moves holds (state, action, successor) triples for Player-1 states;
    dists maps each probabilistic state to {successor: weight}.
    """
    states = list(states)
    ids = set()
    for s in states:
        if s in ids:
            raise DuplicateId(s)
        ids.add(s)
    player1 = set(player1)
    actions, avail, delta1 = [], {s: [] for s in states if s in player1}, {}
    for s, a, t in moves:
        if s not in ids:
            raise DanglingReference(s)
        if s not in player1:
            raise ModelError(f"action move from probabilistic state {s!r}")
        if a == BOTTOM:
            raise ReservedName(a)
        if (s, a) in delta1:
            raise DuplicateId(f"{s}/{a}")
        if a not in actions:
            actions.append(a)
        avail[s].append(a)
        delta1[(s, a)] = t
    dist = {}
    for s, d in dists.items():
        if s not in ids:
            raise DanglingReference(s)
        if s in player1:
            raise ModelError(f"distribution on player-1 state {s!r}")
        dist[s] = {t: Fraction(p) for t, p in d.items()}
    labels = {s: frozenset((labels or {}).get(s, ())) for s in states}
    m = Mdp(tuple(states), frozenset(player1), tuple(actions), avail, delta1, dist, labels,
            initial, frozenset(propositions))
    return validate_mdp(m)


def validate_mdp(m: Mdp) -> Mdp:
    ids = set(m.states)
    if m.initial not in ids:
        raise DanglingReference(m.initial)
    for s in m.player1:
        if s not in ids:
            raise DanglingReference(s)
    for s in m.states:
        if TURN in m.labels.get(s, ()):
            raise ReservedName(TURN)
        if s in m.player1:
            if not m.avail.get(s):
                raise EmptyAvail(s)
            for a in m.avail[s]:
                if m.delta1.get((s, a)) not in ids:
                    raise DanglingReference(m.delta1.get((s, a)))
        else:
            d = m.dist.get(s)
            if not d:
                raise EmptyDelta(s, BOTTOM)
            for t, p in d.items():
                if t not in ids:
                    raise DanglingReference(t)
                if p < 0:
                    raise ModelError(f"negative probability at {s!r}")
            if sum(d.values()) != 1:
                raise ModelError(f"distribution at {s!r} does not sum to 1")
    return m


def is_strictly_alternating(m: Mdp) -> bool:
    if m.initial not in m.player1:
        return False
    for s in m.states:
        here = s in m.player1
        if any((t in m.player1) == here for t in m.successors(s)):
            return False
    return True


def check_strictly_alternating(m: Mdp) -> Mdp:
    if not is_strictly_alternating(m):
        raise NotStrictlyAlternating("MDP is not strictly alternating")
    return m


def mdp_to_game(m: Mdp) -> AlternatingGame:
    """Two-player interpretation: probabilistic choice becomes Player 2."""
    avail, delta, labels, owner = {}, {}, {}, {}
    for s in m.states:
        if s in m.player1:
            avail[s] = m.avail[s]
            for a in m.avail[s]:
                delta[(s, a)] = (m.delta1[(s, a)],)
            labels[s] = m.labels.get(s, frozenset()) | {TURN}
            owner[s] = 1
        else:
            avail[s] = (BOTTOM,)
            delta[(s, BOTTOM)] = m.support(s)
            labels[s] = m.labels.get(s, frozenset())
            owner[s] = 2
    actions = m.actions + ((BOTTOM,) if len(m.player1) < len(m.states) else ())
    return AlternatingGame(m.states, actions, avail, delta, labels, m.initial,
                           m.extra_props | {TURN}, owner)


def compose_indexed(g: Game, h: Game, strict: bool = True):
    """Reachable parallel composition of g and h.

    Returns the composite game and the list of (g-state, h-state) pairs in
    composite state order.  With strict=False a reachable pair without a
    common action is kept as a deadlocked state instead of raising.
    """
    hact = set(h.actions)
    start = (g.initial, h.initial)
    order, seen = [start], {start}
    queue = deque([start])
    avail, delta = {}, {}
    while queue:
        s, t = queue.popleft()
        pid = pair_id(s, t)
        hav = set(h.avail.get(t, ()))
        av = [a for a in g.avail.get(s, ()) if a in hav]
        if not av and strict:
            raise EmptyAvailInComposite(pid)
        avail[pid] = av
        for a in av:
            succ = []
            for u in g.delta[(s, a)]:
                for v in h.delta[(t, a)]:
                    succ.append(pair_id(u, v))
                    if (u, v) not in seen:
                        seen.add((u, v))
                        order.append((u, v))
                        queue.append((u, v))
            delta[(pid, a)] = succ
    ids = [pair_id(s, t) for s, t in order]
    if len(set(ids)) != len(ids):
        raise DuplicateId("composite state names collide")
    labels = {pair_id(s, t): g.labels.get(s, frozenset()) | h.labels.get(t, frozenset())
              for s, t in order}
    actions = tuple(a for a in g.actions if a in hact)
    comp = Game(ids, actions, avail, delta, labels, pair_id(*start),
                g.extra_props | h.extra_props)
    return comp, order


def compose_games(g: Game, h: Game) -> Game:
    """Parallel composition restricted to the pairs reachable from the initial pair."""
    return compose_indexed(g, h)[0]


def compose_mdps(m: Mdp, n: Mdp) -> Mdp:
    """Parallel composition of two strictly alternating MDPs."""
    check_strictly_alternating(m)
    check_strictly_alternating(n)
    start = (m.initial, n.initial)
    order, seen = [start], {start}
    queue = deque([start])
    player1, avail, delta1, dist = set(), {}, {}, {}

    def visit(u, v):
        if (u, v) not in seen:
            seen.add((u, v))
            order.append((u, v))
            queue.append((u, v))
        return pair_id(u, v)

    while queue:
        s, t = queue.popleft()
        pid = pair_id(s, t)
        if s in m.player1:
            player1.add(pid)
            nav = set(n.avail[t])
            av = [a for a in m.avail[s] if a in nav]
            if not av:
                raise EmptyAvailInComposite(pid)
            avail[pid] = av
            for a in av:
                delta1[(pid, a)] = visit(m.delta1[(s, a)], n.delta1[(t, a)])
        else:
            d = {}
            for u in m.support(s):
                for v in n.support(t):
                    d[visit(u, v)] = m.dist[s][u] * n.dist[t][v]
            dist[pid] = d
    ids = [pair_id(s, t) for s, t in order]
    if len(set(ids)) != len(ids):
        raise DuplicateId("composite state names collide")
    labels = {pair_id(s, t): m.labels.get(s, frozenset()) | n.labels.get(t, frozenset())
              for s, t in order}
    actions = tuple(a for a in m.actions if a in set(n.actions))
    return Mdp(ids, player1, actions, avail, delta1, dist, labels, pair_id(*start),
               m.extra_props | n.extra_props)
