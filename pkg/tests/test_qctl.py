import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from combsim.errors import PreconditionViolated, UnknownAtom, WrongQuantifierFamily
from combsim.generators import random_formula, random_mdp
from combsim.logic import (almost_until, almost_until_formula, apre, eval_atl, eval_qctl,
                           f_apre_check, parse_formula)
from combsim.logic.formula import ALMOST, POSITIVE, Atom
from combsim.model import make_mdp
from oracles import almost_until_oracle, qctl_oracle


def example_mdp(labels=None):
    moves = [("s0", "a", "s1"), ("s0", "b", "s4"), ("s2", "a", "s4"), ("s2", "b", "s4"),
             ("s3", "b", "s4")]
    dists = {"s1": {"s2": Fraction(1, 2), "s3": Fraction(1, 2)}, "s4": {"s3": 1}}
    return make_mdp(["s0", "s1", "s2", "s3", "s4"], ["s0", "s2", "s3"], moves, dists, "s0",
                    labels or {}, ("q", "r"))


def rand_mdp(rng, n):
    return random_mdp(rng, rng.randint(1, n), props=("q", "r"), p_label=0.45)


def test_apre_example():
    m = example_mdp()
    assert apre(m, {"s3", "s4"}, {"s4"}) == {"s0", "s2", "s3"}


def test_apre_trivial_cases():
    m = example_mdp()
    everything = set(m.states)
    assert apre(m, everything, everything) == everything
    assert apre(m, {"s3", "s4"}, set()) == set()
    with pytest.raises(PreconditionViolated):
        apre(m, {"s3"}, {"s4"})


def test_almost_until_trivial_cases():
    m = example_mdp()
    everything = set(m.states)
    assert almost_until(m, set(), everything) == everything
    assert almost_until(m, set(), set()) == set()


def test_f_apre_check_trivial_cases():
    m = example_mdp()
    everything = set(m.states)
    assert f_apre_check(m, everything, everything) == everything
    assert f_apre_check(m, everything, set()) == set()
    with pytest.raises(PreconditionViolated):
        f_apre_check(m, {"s3"}, {"s4"})


def test_simple_qctl_examples():
    m = example_mdp()
    assert eval_qctl(m, parse_formula("<Almost> X true")) == set(m.states)
    assert eval_qctl(m, parse_formula("<Positive>(true U q)")) == set()


def test_example_almost_reachability():
    # r at s3: from s1 both branches lead to s3 eventually (s2 -> s4 -> s3)
    m = example_mdp({"s3": ["r"]})
    assert eval_qctl(m, parse_formula("<Almost>(true U r)")) == set(m.states)
    assert eval_qctl(m, parse_formula("<Almost> X r")) == {"s4"}


def test_game_quantifier_rejected_on_mdp():
    with pytest.raises(WrongQuantifierFamily):
        eval_qctl(example_mdp(), parse_formula("<<1>> X q"))


def test_unknown_atom_on_mdp():
    with pytest.raises(UnknownAtom):
        eval_qctl(example_mdp(), parse_formula("<Almost> X zz"))


TRANSLATIONS = [
    ("<Almost> X q", "<<1>> X q"),
    ("<Almost>(q W r)", "<<1>>(q W r)"),
    ("<Positive> X q", "<<1,2>> X q"),
    ("<Positive>(q U r)", "<<1,2>>(q U r)"),
    ("<Positive>(q W r)", "<<1,2>>(q U r) | <<1,2>>(q U <<1>>(q W false))"),
]


@pytest.mark.parametrize("lhs,rhs", TRANSLATIONS)
@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_translation_identities(lhs, rhs, seed):
    m = rand_mdp(random.Random(seed), 6)
    f, g = parse_formula(lhs), parse_formula(rhs)
    oracle = qctl_oracle(m, f)
    assert eval_qctl(m, f) == oracle
    assert eval_atl(m.game, g) == oracle


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_positive_always_identity(seed):
    m = rand_mdp(random.Random(seed), 8)
    lhs = eval_qctl(m, parse_formula("<Positive> G r"))
    rhs = eval_qctl(m, parse_formula("<Positive>(r U <Almost> G r)"))
    assert lhs == rhs


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_f_apre_equals_apre(seed):
    rng = random.Random(seed)
    m = rand_mdp(rng, 8)
    psi1 = {s for s in m.states if rng.random() < 0.6}
    psi2 = {s for s in psi1 if rng.random() < 0.5}
    assert f_apre_check(m, psi1, psi2) == apre(m, psi1, psi2)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_almost_until_matches_strategy_oracle(seed):
    rng = random.Random(seed)
    m = rand_mdp(rng, 5)
    q = {s for s in m.states if rng.random() < 0.5}
    r = {s for s in m.states if rng.random() < 0.3}
    assert almost_until(m, q, r) == almost_until_oracle(m, q, r)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_nested_formula_encoding(seed):
    m = rand_mdp(random.Random(seed), 4)
    f = almost_until_formula(len(m.states), Atom("q"), Atom("r"))
    q = {s for s in m.states if "q" in m.labels[s]}
    r = {s for s in m.states if "r" in m.labels[s]}
    assert eval_atl(m.game, f) == almost_until(m, q, r)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_nested_qctl_matches_oracle(seed):
    rng = random.Random(seed)
    m = rand_mdp(rng, 5)
    f = random_formula(rng, ("q", "r"), depth=2, quantifiers=(ALMOST, POSITIVE))
    assert eval_qctl(m, f) == qctl_oracle(m, f)


def test_almost_until_contains_targets():
    rng = random.Random(0)
    for _ in range(50):
        m = rand_mdp(rng, 8)
        q = np.array([rng.random() < 0.6 for _ in m.states])
        r = np.array([rng.random() < 0.2 for _ in m.states])
        res = almost_until(m, set(np.array(m.states)[q]), set(np.array(m.states)[r]))
        assert res >= set(np.array(m.states)[r])
