"""Text syntax for formulas.

    f ::= f | f  |  f & f  |  !atom  |  atom  |  true  |  false  |  ( f )
        | Q X f  |  Q G f  |  Q ( X f )  |  Q ( G f )  |  Q ( f U f )  |  Q ( f W f )

with Q one of <<1>>, <<2>>, <<1,2>>, <<0>>, <Almost>, <Positive>.
`G f` abbreviates `f W false`.  `&` binds tighter than `|`; a quantified
formula binds tighter than both.
"""

import re

from ..errors import FormulaSyntaxError
from .formula import (ALMOST, FALSE, P0, P1, P2, P12, POSITIVE, TRUE, Atom, NegAtom, Next, Quant,
                      Until, WeakUntil, conj, disj)

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<quant><<\s*1\s*,\s*2\s*>>|<<\s*[120∅]\s*>>|<\s*Almost\s*>|<\s*Positive\s*>)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'.]*)
  | (?P<sym>[!&|()])
""", re.VERBOSE)

_QUANTS = {"<<1>>": P1, "<<2>>": P2, "<<1,2>>": P12, "<<0>>": P0, "<<∅>>": P0,
           "<Almost>": ALMOST, "<Positive>": POSITIVE}
_KEYWORDS = {"X", "G", "U", "W", "true", "false"}


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "quant":
                val = _QUANTS[re.sub(r"\s+", "", val)]
            elif kind == "ident" and val in _KEYWORDS:
                kind = "kw"
            out.append((kind, val, pos))
        pos = m.end()
    out.append(("end", None, pos))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, val=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (val and tok[1] != val):
            want = val or kind
            got = tok[1] if tok[1] is not None else "end of input"
            raise FormulaSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def at(self, kind, val=None):
        tok = self.toks[self.i]
        return tok[0] == kind and (val is None or tok[1] == val)

    def formula(self):
        f = self.disjunction()
        self.take("end")
        return f

    def disjunction(self):
        parts = [self.conjunction()]
        while self.at("sym", "|"):
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else disj(*parts)

    def conjunction(self):
        parts = [self.unary()]
        while self.at("sym", "&"):
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else conj(*parts)

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "sym" and val == "!":
            self.take()
            if not self.at("ident"):
                raise FormulaSyntaxError("negation is only allowed in front of an atom", pos)
            return NegAtom(self.take()[1])
        if kind == "ident":
            self.take()
            return Atom(val)
        if kind == "kw" and val in ("true", "false"):
            self.take()
            return TRUE if val == "true" else FALSE
        if kind == "sym" and val == "(":
            self.take()
            f = self.disjunction()
            self.take("sym", ")")
            return f
        if kind == "quant":
            self.take()
            return Quant(val, self.path())
        got = val if val is not None else "end of input"
        raise FormulaSyntaxError(f"unexpected {got!r}", pos)

    def path(self):
        if self.at("kw", "X"):
            self.take()
            return Next(self.unary())
        if self.at("kw", "G"):
            self.take()
            return WeakUntil(self.unary(), FALSE)
        self.take("sym", "(")
        if self.at("kw", "X"):
            self.take()
            p = Next(self.disjunction())
        elif self.at("kw", "G"):
            self.take()
            p = WeakUntil(self.disjunction(), FALSE)
        else:
            left = self.disjunction()
            kind, val, pos = self.peek()
            if kind == "kw" and val in ("U", "W"):
                self.take()
                right = self.disjunction()
                p = Until(left, right) if val == "U" else WeakUntil(left, right)
            else:
                raise FormulaSyntaxError("expected 'U' or 'W' in path formula", pos)
        self.take("sym", ")")
        return p


def parse_formula(text: str):
    """Parse a formula from its text syntax."""
    return _Parser(text).formula()
