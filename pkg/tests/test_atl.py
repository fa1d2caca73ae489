import random

import pytest
from hypothesis import given, settings, strategies as st

from combsim.errors import UnknownAtom, WrongQuantifierFamily
from combsim.generators import random_formula, random_game
from combsim.logic import eval_atl, parse_formula
from combsim.logic.formula import ALMOST, P0, P1, P2, P12, Atom, Quant, WeakUntil
from combsim.model import make_game
from oracles import atl_oracle


def line_game():
    # s0 -a-> s1 -a-> s2 (p), s2 loops; s0 -b-> {s0, s3}; s3 loops
    return make_game(["s0", "s1", "s2", "s3"],
                     [("s0", "a", ["s1"]), ("s0", "b", ["s0", "s3"]), ("s1", "a", ["s2"]),
                      ("s2", "a", ["s2"]), ("s3", "a", ["s3"])], "s0", {"s2": ["p"]})


def test_always_true_holds_everywhere():
    g = line_game()
    assert eval_atl(g, parse_formula("<<1>>(true W false)")) == set(g.states)


def test_cooperative_until_is_reachability():
    g = line_game()
    assert eval_atl(g, parse_formula("<<1,2>>(true U p)")) == {"s0", "s1", "s2"}


def test_single_player_until():
    g = line_game()
    # Player 1 picks a at s0 and reaches p whatever Player 2 does
    assert eval_atl(g, parse_formula("<<1>>(true U p)")) == {"s0", "s1", "s2"}
    # with b only, Player 2 can stay at s0 or move to s3: no guarantee
    assert eval_atl(g, parse_formula("<<0>>(true U p)")) == {"s1", "s2"}


def test_next_operators():
    g = make_game(["s", "t", "u"], [("s", "a", ["t"]), ("s", "b", ["t", "u"]),
                                    ("t", "a", ["t"]), ("u", "a", ["u"])], "s", {"t": ["p"]})
    assert "s" in eval_atl(g, parse_formula("<<1>> X p"))
    assert "s" in eval_atl(g, parse_formula("<<2>> X p"))
    assert "s" not in eval_atl(g, parse_formula("<<0>> X p"))
    assert "s" in eval_atl(g, parse_formula("<<1,2>> X !p"))


def test_unknown_atom():
    g = line_game()
    with pytest.raises(UnknownAtom):
        eval_atl(g, parse_formula("<<1>> X zz"))
    assert eval_atl(g, parse_formula("<<1>> X zz"), strict=False) == set()


def test_probabilistic_quantifier_rejected_on_games():
    with pytest.raises(WrongQuantifierFamily):
        eval_atl(line_game(), Quant(ALMOST, WeakUntil(Atom("p"), Atom("p"))))


@settings(max_examples=250, deadline=None)
@given(st.integers(0, 10**9))
def test_matches_strategy_enumeration(seed):
    rng = random.Random(seed)
    g = random_game(rng, rng.randint(1, 6), props=("p", "q"), p_label=0.4)
    f = random_formula(rng, ("p", "q"), depth=3, quantifiers=(P1, P12, P0))
    assert eval_atl(g, f) == atl_oracle(g, f)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_player2_matches_strategy_enumeration(seed):
    rng = random.Random(seed)
    g = random_game(rng, rng.randint(1, 4), props=("p", "q"), p_label=0.4)
    f = random_formula(rng, ("p", "q"), depth=2, quantifiers=(P2, P1))
    assert eval_atl(g, f) == atl_oracle(g, f)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_monotone_in_atom_valuation(seed):
    rng = random.Random(seed)
    g = random_game(rng, rng.randint(1, 6), props=("p", "q"), p_label=0.4)
    f = random_formula(rng, ("p", "q"), depth=3)
    f = parse_formula(str(f).replace("!", ""))
    more = make_game(g.states, [(s, a, g.delta[(s, a)]) for s in g.states for a in g.avail[s]],
                     g.initial, {s: set(g.labels[s]) | ({"p"} if rng.random() < 0.5 else set())
                                 for s in g.states}, ("p", "q"))
    assert eval_atl(g, f) <= eval_atl(more, f)
