"""Partitions and the two partition abstractions of a game."""

from .errors import ModelError
from .model import Game


class Partition:
    """Label-respecting partition of a game's states.

    Blocks are kept in a canonical order: members by state order, blocks
    by their first member.
    """

    def __init__(self, game: Game, blocks):
        pos = game.index.pos
        blocks = [sorted(set(b), key=pos.__getitem__) for b in blocks]
        blocks = [b for b in blocks if b]
        blocks.sort(key=lambda b: pos[b[0]])
        self.game = game
        self.blocks = tuple(tuple(b) for b in blocks)
        self.block_of = {}
        for i, b in enumerate(self.blocks):
            lab = game.labels[b[0]]
            for s in b:
                if s not in pos:
                    raise ModelError(f"unknown state {s!r} in partition")
                if s in self.block_of:
                    raise ModelError(f"state {s!r} appears in two blocks")
                if game.labels[s] != lab:
                    raise ModelError(f"block {i} mixes labels")
                self.block_of[s] = i
        if len(self.block_of) != len(game.states):
            raise ModelError("partition does not cover every state")

    @classmethod
    def from_blocks(cls, game, blocks):
        return cls(game, blocks)

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def name(self, i):
        return "{" + ",".join(self.blocks[i]) + "}"

    def names(self):
        return [self.name(i) for i in range(len(self.blocks))]

    def refines(self, other: "Partition") -> bool:
        """True when every block of self lies inside a block of other."""
        return all(len({other.block_of[s] for s in b}) == 1 for b in self.blocks)

    def __repr__(self):
        return "Partition(" + ", ".join(self.names()) + ")"


def coarsest_partition(g: Game) -> Partition:
    """One block per label set."""
    groups = {}
    for s in g.states:
        groups.setdefault(g.labels[s], []).append(s)
    return Partition(g, groups.values())


def singleton_partition(g: Game) -> Partition:
    return Partition(g, [[s] for s in g.states])


def _abstract(g: Game, part: Partition, must: bool) -> Game:
    names = part.names()
    avail, delta = {}, {}
    for i, block in enumerate(part.blocks):
        have = set()
        for s in block:
            have.update(g.avail[s])
        acts = [a for a in g.actions if a in have]
        avail[names[i]] = acts
        for a in acts:
            reach = [{part.block_of[t] for t in g.delta[(s, a)]} if a in g.avail[s] else set()
                     for s in block]
            if must:
                hits = set.intersection(*reach) if all(a in g.avail[s] for s in block) else set()
            else:
                hits = set.union(*reach)
            delta[(names[i], a)] = [names[j] for j in sorted(hits)]
    labels = {names[i]: g.labels[b[0]] for i, b in enumerate(part.blocks)}
    return Game(names, g.actions, avail, delta, labels, names[part.block_of[g.initial]],
                g.extra_props)


def simulation_abstraction(g: Game, part: Partition) -> Game:
    """Quotient where a block moves to every block some member can reach."""
    return _abstract(g, part, must=False)


def alternating_simulation_abstraction(g: Game, part: Partition) -> Game:
    """Quotient where a block moves to the blocks that all members reach.

    An action that some member lacks, or whose members reach no common
    block, keeps an empty successor set: Player 2 has no answer to it.
    """
    return _abstract(g, part, must=True)
