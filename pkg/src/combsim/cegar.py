"""Assume-guarantee check of g1 ∥ g2 against a specification, with
counterexample-guided refinement of a partition of g2.

Each iteration abstracts g2 twice (alternating and simulation abstraction),
composes both with g1 over the same carrier of (g1 state, block) pairs,
and solves the modified combined-simulation game against the
specification.  A proponent win proves the property.  Otherwise the
adversary's strategy is turned into a counterexample DAG, every node is
concretized to the g2 states of its block from which the strategy can be
replayed, and the counterexample is either genuine (the initial state of
g2 survives at the root) or used to split blocks.
"""

import logging
import time
from dataclasses import dataclass, field, replace

from .abstraction import (Partition, alternating_simulation_abstraction, coarsest_partition,
                          simulation_abstraction)
from .errors import MalformedDag, NoCounterexample, NotRefinable
from .model import Game, compose_games, compose_indexed, mdp_to_game, pair_id
from .relations import SimGame, build_modified_game, combined_simulates

log = logging.getLogger(__name__)

HOLDS, REFUTED, EXHAUSTED = "holds", "refuted", "exhausted"


def _compose_on_carrier(g1: Game, abs2: Game, order):
    """Composition of g1 with abs2 over a given list of (g1 state, block) pairs."""
    ids = [pair_id(s, b) for s, b in order]
    avail, delta = {}, {}
    for (s, b), pid in zip(order, ids):
        have = set(abs2.avail[b])
        acts = [a for a in g1.avail[s] if a in have]
        avail[pid] = acts
        for a in acts:
            delta[(pid, a)] = [pair_id(u, v) for u in g1.delta[(s, a)] for v in abs2.delta[(b, a)]]
    labels = {pid: g1.labels[s] | abs2.labels[b] for (s, b), pid in zip(order, ids)}
    actions = tuple(a for a in g1.actions if a in set(abs2.actions))
    return Game(ids, actions, avail, delta, labels, ids[0], g1.extra_props | abs2.extra_props)


@dataclass(eq=False)
class Premise:
    """Outcome of one premise check."""
    g1: Game
    g2: Game
    spec: Game
    partition: Partition
    game: SimGame
    result: object
    carrier: list           # composite state index -> (g1 state, block index)

    @property
    def root(self):
        return self.game.pair_node(self.game.alt.initial, self.spec.initial)

    @property
    def holds(self):
        return bool(self.result.proponent_win[self.root])


def check_ag_premise(g1: Game, g2: Game, part: Partition, spec: Game,
                     skip_step: bool = False) -> Premise:
    """Solve the modified combined-simulation game of the two abstractions against spec."""
    sim_abs = simulation_abstraction(g2, part)
    alt_abs = alternating_simulation_abstraction(g2, part)
    g_sim, order = compose_indexed(g1, sim_abs, strict=False)
    g_alt = _compose_on_carrier(g1, alt_abs, order)
    game = build_modified_game(g_alt, g_sim, spec, skip_step=skip_step)
    block_index = {name: i for i, name in enumerate(part.names())}
    carrier = [(s, block_index[b]) for s, b in order]
    return Premise(g1, g2, spec, part, game, game.solve(), carrier)


@dataclass(frozen=True)
class CexNode:
    node: int
    kind: str
    left: str               # g1 component of the abstract left state
    block: int              # g2 block of the abstract left state
    right: str              # specification state
    action: str | None
    action2: str | None
    rank: int
    succ: tuple
    conc: frozenset | None = None

    @property
    def is_leaf(self):
        return not self.succ


@dataclass(frozen=True, eq=False)
class CexDag:
    """Adversary strategy restricted to the nodes reachable from the root."""
    root: int
    nodes: dict
    partition: Partition
    g1: Game
    bad: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.nodes)

    def topological(self):
        """Node ids ordered so that successors come first."""
        return sorted(self.nodes, key=lambda v: (self.nodes[v].rank, v))

    def to_dict(self):
        part = self.partition
        out = []
        for v in sorted(self.nodes):
            n = self.nodes[v]
            out.append({
                "id": v, "kind": n.kind, "left": n.left, "block": list(part.blocks[n.block]),
                "right": n.right, "action": n.action, "action2": n.action2, "rank": n.rank,
                "succ": list(n.succ),
                "conc": None if n.conc is None else [s for s in part.game.states if s in n.conc],
            })
        return {"root": self.root, "nodes": out}


def extract_cex(premise: Premise) -> CexDag:
    """Counterexample DAG of a failed premise check."""
    game, res = premise.game, premise.result
    root = premise.root
    if res.proponent_win[root]:
        raise NoCounterexample("the proponent wins the initial pair")
    arena = game.arena
    nodes, stack = {}, [root]
    while stack:
        v = stack.pop()
        if v in nodes:
            continue
        r = int(res.rank[v])
        if r == 0:
            succ = ()
        elif game.is_adversary(v):
            succ = (int(res.witness[arena.slot_ptr[v]]),)
        else:
            succ = tuple(sorted({int(t) for k in arena.slots(v) for t in arena.successors(k)}))
        for u in succ:
            if not 0 <= res.rank[u] < r:
                raise MalformedDag(f"edge {v}->{u} does not decrease the rank")
        st = game.state(v)
        s1, b = premise.carrier[int(game.left[v])]
        nodes[v] = CexNode(v, st.kind, s1, b, st.right, st.action, st.action2, r, succ)
        stack.extend(succ)
    bad = frozenset(v for v in nodes if game.bad[v])
    return CexDag(root, nodes, premise.partition, premise.g1, bad)


def concretize(cex: CexDag, g2: Game) -> CexDag:
    """Fill in, bottom-up, the g2 states of each node's block from which the
    counterexample can be replayed concretely."""
    part, g1 = cex.partition, cex.g1
    conc = {}
    nodes = cex.nodes

    def covered(s, a, n, children):
        """Every concrete answer to a from (n.left, s) lands in some child's conc."""
        if a not in g2.avail[s]:
            return True
        by_t1 = {}
        for c in children:
            by_t1.setdefault(nodes[c].left, set()).update(conc[c])
        succ2 = set(g2.delta[(s, a)])
        return all(succ2 <= by_t1.get(t1, set()) for t1 in g1.delta[(n.left, a)])

    for v in cex.topological():
        n = nodes[v]
        block = part.blocks[n.block]
        kids = n.succ
        for c in kids:
            if c not in conc:
                raise MalformedDag(f"successor {c} of {v} is missing")
        if n.kind == "Pair":
            if not kids:
                if v not in cex.bad:
                    raise MalformedDag(f"leaf {v} is not a label mismatch")
                val = set(block)
            else:
                val = set(conc[kids[0]])
        elif n.kind == "AltStage2b":
            val = set(conc[kids[0]]) if kids else set()
        elif n.kind == "SimStage2":
            (c,) = kids
            t1 = nodes[c].left
            val = {s for s in block
                   if any(a in g2.avail[s] and t1 in g1.delta[(n.left, a)]
                          and not conc[c].isdisjoint(g2.delta[(s, a)])
                          for a in g1.avail[n.left])}
        elif n.kind == "SimStage1":
            val = set.intersection(*(set(conc[c]) for c in kids)) if kids else set(block)
        elif n.kind == "AltStage2":
            (c,) = kids
            a = nodes[c].action
            val = {s for s in block if a in g2.avail[s] and s in conc[c]}
        elif n.kind == "AltStage1":
            if kids and nodes[kids[0]].kind == "Pair":
                # shortened gadget: the answer is a pair of successors directly
                val = {s for s in block if all(covered(s, n.action, n, (c,)) for c in kids)}
            else:
                val = set.intersection(*(set(conc[c]) for c in kids)) if kids else set(block)
        elif n.kind == "AltStage1b":
            val = {s for s in block if covered(s, n.action, n, kids)}
        else:
            raise MalformedDag(f"unknown node kind {n.kind!r}")
        conc[v] = frozenset(val)
    return replace(cex, nodes={v: replace(n, conc=conc[v]) for v, n in nodes.items()})


def is_feasible(cex: CexDag, g2: Game) -> bool:
    """True when the counterexample can be replayed from g2's initial state."""
    root = cex.nodes[cex.root]
    if root.conc is None:
        raise MalformedDag("counterexample has not been concretized")
    return g2.initial in root.conc


def _split(part: Partition, signatures):
    """Split every block by the given per-state signatures (lists of keys)."""
    blocks = []
    for i, block in enumerate(part.blocks):
        groups = {}
        for s in block:
            groups.setdefault(tuple(signatures.get(s, ())), []).append(s)
        blocks.extend(groups.values())
    return Partition(part.game, blocks)


def _step_signature(part, g2, s, a):
    if a not in g2.avail[s]:
        return None
    return frozenset(part.block_of[t] for t in g2.delta[(s, a)])


def refine(part: Partition, cex: CexDag, improved: bool = False) -> Partition:
    """Split each block by membership in the conc sets of the DAG nodes on it.

    If that separates nothing, the imprecision sits in an alternating step
    whose must-successors miss some concrete successors; the blocks of such
    steps are then split by the blocks their members reach.  With
    improved=True the complement of every conc set is split further by the
    one-step behaviour of its states.
    """
    g2 = part.game
    sig = {}
    for v in sorted(cex.nodes):
        n = cex.nodes[v]
        for s in part.blocks[n.block]:
            sig.setdefault(s, []).append(s in n.conc)
    new = _split(part, sig)
    if improved:
        for v in sorted(cex.nodes):
            n = cex.nodes[v]
            a = _node_action(cex, n)
            for s in part.blocks[n.block]:
                if s in n.conc:
                    key = "in"
                elif a is not None:
                    key = _step_signature(part, g2, s, a)
                else:
                    key = frozenset((b, part.block_of[t]) for b in g2.avail[s] for t in g2.delta[(s, b)])
                sig[s].append(key)
        new = _split(part, sig)
    if len(new) == len(part):
        for v in sorted(cex.nodes):
            n = cex.nodes[v]
            if n.kind in ("AltStage1b", "AltStage1") and n.conc != frozenset(part.blocks[n.block]):
                for s in part.blocks[n.block]:
                    sig[s].append(_step_signature(part, g2, s, n.action))
        new = _split(part, sig)
    if len(new) == len(part):
        raise NotRefinable("no block of the partition can be split")
    return new


def _node_action(cex, n):
    if n.action is not None:
        return n.action
    if n.kind == "AltStage2" and n.succ:
        return cex.nodes[n.succ[0]].action
    return None


@dataclass(frozen=True)
class RunStats:
    iterations: int         # refinements performed
    checks: int             # premise checks performed
    partition_size: int
    time_s: float
    peak_arena: int
    verdict: str

    def to_dict(self, timing=True):
        d = {"verdict": self.verdict, "iterations": self.iterations, "checks": self.checks,
             "partition_size": self.partition_size, "peak_arena": self.peak_arena}
        if timing:
            d["time_s"] = round(self.time_s, 6)
        return d


@dataclass(eq=False)
class CegarResult:
    verdict: str
    counterexample: CexDag | None
    stats: RunStats
    partition: Partition
    trace: list             # (partition, concretized cex, feasible) per failed check

    @property
    def holds(self):
        return self.verdict == HOLDS


def ag_cegar(g1: Game, g2: Game, spec: Game, max_iters: int | None = None,
             improved_refine: bool = False, skip_step: bool = False) -> CegarResult:
    """Decide whether spec combined-simulates g1 ∥ g2 by abstraction refinement.

    max_iters bounds the number of premise checks; when it runs out the
    verdict is EXHAUSTED.
    """
    start = time.perf_counter()
    part = coarsest_partition(g2)
    checks = refinements = peak = 0
    trace = []
    verdict, cex = None, None
    while verdict is None:
        if max_iters is not None and checks >= max_iters:
            verdict = EXHAUSTED
            break
        checks += 1
        prem = check_ag_premise(g1, g2, part, spec, skip_step=skip_step)
        peak = max(peak, prem.game.n_nodes)
        if prem.holds:
            verdict = HOLDS
            break
        cex = concretize(extract_cex(prem), g2)
        feasible = is_feasible(cex, g2)
        trace.append((part, cex, feasible))
        log.debug("check %d: |Π|=%d, counterexample of %d nodes, feasible=%s",
                  checks, len(part), len(cex), feasible)
        if feasible:
            verdict = REFUTED
            break
        part = refine(part, cex, improved=improved_refine)
        refinements += 1
    stats = RunStats(refinements, checks, len(part), time.perf_counter() - start, peak, verdict)
    return CegarResult(verdict, cex if verdict == REFUTED else None, stats, part, trace)


def ag_cegar_mdp(m1, m2, spec, **kw) -> CegarResult:
    """ag_cegar on the two-player interpretations of three MDPs."""
    return ag_cegar(mdp_to_game(m1), mdp_to_game(m2), mdp_to_game(spec), **kw)


def monolithic_check(g1: Game, g2: Game, spec: Game, skip_step: bool = False) -> bool:
    """Combined simulation of g1 ∥ g2 by spec, without abstraction."""
    return combined_simulates(compose_games(g1, g2), spec, skip_step=skip_step)
