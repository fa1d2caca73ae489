"""JSON model files.

A game file looks like

    {"kind": "game", "initial": "s0",
     "states": [{"id": "s0", "labels": ["p"]}, ...],
     "transitions": [{"from": "s0", "action": "a", "to": ["s1", "s2"]}, ...]}

An MDP file gives every state a role ("player1" or "prob"); Player-1
transitions have a single target and probabilistic states carry a
distribution of rational strings:

    {"from": "s1", "action": "a", "to": "s2"}
    {"from": "s2", "dist": {"s0": "1/2", "s3": "1/2"}}

An optional "propositions" list extends the vocabulary beyond the labels
that occur.  serialize_model writes the canonical form: states sorted by
id, transitions by (from, action), keys sorted, two-space indent.
"""

import json
from fractions import Fraction
from pathlib import Path

from .errors import ModelSyntaxError, SchemaError
from .model import TURN, Game, Mdp, make_game, make_mdp

ROLES = ("player1", "prob")


def _field(obj, key, typ, where, optional=False, default=None):
    if not isinstance(obj, dict):
        raise SchemaError(where, "expected an object")
    if key not in obj:
        if optional:
            return default
        raise SchemaError(f"{where}.{key}", "missing")
    val = obj[key]
    if not isinstance(val, typ) or isinstance(val, bool):
        raise SchemaError(f"{where}.{key}", f"expected {_type_name(typ)}")
    return val


def _type_name(typ):
    if isinstance(typ, tuple):
        return " or ".join(t.__name__ for t in typ)
    return typ.__name__


def _id_list(val, where):
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise SchemaError(where, "expected a list of strings")
    return val


def _rational(text, where):
    if not isinstance(text, str):
        raise SchemaError(where, "probabilities are written as strings such as \"1/2\"")
    try:
        p = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SchemaError(where, f"not a rational number: {text!r}") from None
    if not 0 < p <= 1:
        raise SchemaError(where, f"probability {text} outside (0, 1]")
    return p


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelSyntaxError(e.msg, e.lineno, e.colno) from None


def parse_model(source) -> Game | Mdp:
    """Parse a model from a path or from JSON text."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")
                                    and Path(source).exists()):
        source = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        source = source.decode("utf-8")
    return model_from_dict(load_json(source))


def model_from_dict(doc) -> Game | Mdp:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    kind = _field(doc, "kind", str, "$")
    if kind not in ("game", "mdp"):
        raise SchemaError("$.kind", "expected \"game\" or \"mdp\"")
    initial = _field(doc, "initial", str, "$")
    props = _id_list(_field(doc, "propositions", list, "$", optional=True, default=[]),
                     "$.propositions")
    states, labels, roles = [], {}, {}
    for i, st in enumerate(_field(doc, "states", list, "$")):
        where = f"$.states[{i}]"
        sid = _field(st, "id", str, where)
        states.append(sid)
        labels[sid] = _id_list(_field(st, "labels", list, where, optional=True, default=[]),
                               f"{where}.labels")
        if kind == "mdp":
            role = _field(st, "role", str, where)
            if role not in ROLES:
                raise SchemaError(f"{where}.role", "expected \"player1\" or \"prob\"")
            roles[sid] = role
    trans = _field(doc, "transitions", list, "$")
    if kind == "game":
        triples = []
        for i, tr in enumerate(trans):
            where = f"$.transitions[{i}]"
            triples.append((_field(tr, "from", str, where), _field(tr, "action", str, where),
                            _id_list(_field(tr, "to", list, where), f"{where}.to")))
        return make_game(states, triples, initial, labels, props)
    moves, dists = [], {}
    for i, tr in enumerate(trans):
        where = f"$.transitions[{i}]"
        src = _field(tr, "from", str, where)
        if "dist" in tr:
            d = _field(tr, "dist", dict, where)
            if src in dists:
                raise SchemaError(where, f"second distribution for {src!r}")
            dist = {t: _rational(p, f"{where}.dist.{t}") for t, p in d.items()}
            if sum(dist.values()) != 1:
                raise SchemaError(f"{where}.dist", "probabilities do not sum to 1")
            dists[src] = dist
        else:
            moves.append((src, _field(tr, "action", str, where), _field(tr, "to", str, where)))
    player1 = [s for s in states if roles[s] == "player1"]
    return make_mdp(states, player1, moves, dists, initial, labels, props)


def _label_list(labels):
    return sorted(labels)


def model_to_dict(model: Game | Mdp) -> dict:
    """Canonical dictionary form of a game or MDP."""
    used = set()
    for s in model.states:
        used |= model.labels.get(s, frozenset())
    if isinstance(model, Mdp):
        states = [{"id": s, "labels": _label_list(model.labels[s]),
                   "role": "player1" if s in model.player1 else "prob"}
                  for s in sorted(model.states)]
        trans = []
        for s in sorted(model.states):
            if s in model.player1:
                for a in sorted(model.avail[s]):
                    trans.append({"from": s, "action": a, "to": model.delta1[(s, a)]})
            else:
                d = model.dist[s]
                trans.append({"from": s, "dist": {t: _fraction_text(d[t]) for t in sorted(d)}})
        doc = {"kind": "mdp"}
    else:
        states = [{"id": s, "labels": _label_list(model.labels.get(s, ()))}
                  for s in sorted(model.states)]
        trans = [{"from": s, "action": a, "to": sorted(model.delta[(s, a)])}
                 for s in sorted(model.states) for a in sorted(model.avail[s])]
        doc = {"kind": "game"}
    doc.update(initial=model.initial, states=states, transitions=trans)
    extra = sorted(set(model.extra_props) - used - {TURN})
    if extra:
        doc["propositions"] = extra
    return doc


def _fraction_text(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_model(model: Game | Mdp) -> str:
    return dumps(model_to_dict(model))


def same_model(a, b) -> bool:
    """Structural equality of two models, ignoring declaration order."""
    return type(a) is type(b) and model_to_dict(a) == model_to_dict(b)
