"""Formula syntax trees for C-ATL and QCTL in positive normal form.

Nodes are immutable and compare structurally.  Hashes are computed once at
construction, so shared subformulas (as produced by the distinguishing
formula construction) stay cheap to hash and to use as cache keys.
"""

P1 = "<<1>>"
P2 = "<<2>>"
P12 = "<<1,2>>"
P0 = "<<0>>"
ALMOST = "<Almost>"
POSITIVE = "<Positive>"
GAME_QUANTIFIERS = (P1, P2, P12, P0)
MDP_QUANTIFIERS = (ALMOST, POSITIVE)


class Formula:
    __slots__ = ("_key", "_hash")

    def __init__(self, *key):
        self._key = (type(self).__name__,) + key
        self._hash = hash(self._key)

    def __eq__(self, other):
        return self is other or (isinstance(other, Formula) and self._hash == other._hash
                                 and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self._key[1:]))})"


class Const(Formula):
    __slots__ = ()

    @property
    def value(self):
        return self._key[1]

    def __str__(self):
        return "true" if self.value else "false"


class Atom(Formula):
    __slots__ = ()

    @property
    def name(self):
        return self._key[1]

    def __str__(self):
        return self.name


class NegAtom(Formula):
    __slots__ = ()

    @property
    def name(self):
        return self._key[1]

    def __str__(self):
        return "!" + self.name


class And(Formula):
    __slots__ = ()

    def __init__(self, *args):
        super().__init__(*args)

    @property
    def args(self):
        return self._key[1:]

    def __str__(self):
        return " & ".join(_wrap(a) for a in self.args)


class Or(Formula):
    __slots__ = ()

    def __init__(self, *args):
        super().__init__(*args)

    @property
    def args(self):
        return self._key[1:]

    def __str__(self):
        return " | ".join(_wrap(a) for a in self.args)


class Next(Formula):
    __slots__ = ()

    @property
    def sub(self):
        return self._key[1]

    def __str__(self):
        return "X " + _wrap(self.sub)


class Until(Formula):
    __slots__ = ()

    @property
    def left(self):
        return self._key[1]

    @property
    def right(self):
        return self._key[2]

    def __str__(self):
        return f"{_wrap(self.left)} U {_wrap(self.right)}"


class WeakUntil(Until):
    __slots__ = ()

    def __str__(self):
        return f"{_wrap(self.left)} W {_wrap(self.right)}"


class Quant(Formula):
    __slots__ = ()

    @property
    def quantifier(self):
        return self._key[1]

    @property
    def path(self):
        return self._key[2]

    def __str__(self):
        if isinstance(self.path, Next):
            return f"{self.quantifier} {self.path}"
        return f"{self.quantifier}({self.path})"


def _wrap(f):
    return f"({f})" if isinstance(f, (And, Or)) else str(f)


TRUE = Const(True)
FALSE = Const(False)


def conj(*fs):
    """Conjunction with flattening, constant folding and duplicate removal."""
    out = []
    for f in fs:
        parts = f.args if isinstance(f, And) else (f,)
        for p in parts:
            if p == FALSE:
                return FALSE
            if p != TRUE and p not in out:
                out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(*out)


def disj(*fs):
    """Disjunction with flattening, constant folding and duplicate removal."""
    out = []
    for f in fs:
        parts = f.args if isinstance(f, Or) else (f,)
        for p in parts:
            if p == TRUE:
                return TRUE
            if p != FALSE and p not in out:
                out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(*out)


def always(f):
    """□f, written as f W false."""
    return WeakUntil(f, FALSE)


def depth(f):
    """Nesting depth of path quantifiers."""
    if isinstance(f, Quant):
        p = f.path
        subs = (p.sub,) if isinstance(p, Next) else (p.left, p.right)
        return 1 + max(depth(s) for s in subs)
    if isinstance(f, (And, Or)):
        return max(depth(a) for a in f.args)
    return 0


def atoms(f):
    seen, stack, out = set(), [f], set()
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, (Atom, NegAtom)):
            out.add(g.name)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, Quant):
            stack.append(g.path)
        elif isinstance(g, Next):
            stack.append(g.sub)
        elif isinstance(g, Until):
            stack.extend((g.left, g.right))
    return out


def quantifiers(f):
    seen, stack, out = set(), [f], set()
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, Quant):
            out.add(g.quantifier)
            stack.append(g.path)
        elif isinstance(g, Next):
            stack.append(g.sub)
        elif isinstance(g, Until):
            stack.extend((g.left, g.right))
    return out


def size(f):
    """Number of nodes of the formula viewed as a tree."""
    memo = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, (And, Or)):
            r = 1 + sum(go(a) for a in g.args)
        elif isinstance(g, Quant):
            r = 1 + go(g.path)
        elif isinstance(g, Next):
            r = 1 + go(g.sub)
        elif isinstance(g, Until):
            r = 1 + go(g.left) + go(g.right)
        else:
            r = 1
        memo[g] = r
        return r
    return go(f)
