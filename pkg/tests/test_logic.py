import pytest
from hypothesis import given
from hypothesis import strategies as st

import generators as gen
import oracles
from mcsc import (AlphabetTooLarge, ChoiceClause, Constraint, Program, Rule, RuleNotDefinite,
                  Semantics, answer_sets, fact, least_model, minimal_models, reduct)
from mcsc.logic import acceptable_sets, is_acceptable, is_grounded_ruleset, state_key

randoms = st.randoms(use_true_random=False)


def prog(*rules, **kw):
    return Program(tuple(rules), **kw)


def test_least_model_chain():
    p = prog(fact("a"), Rule("b", {"a"}), Rule("c", {"b", "d"}))
    assert least_model(p) == {"a", "b"}
    assert least_model(p, ["d"]) == {"a", "b", "c", "d"}


def test_least_model_rejects_negation_and_choices():
    with pytest.raises(RuleNotDefinite):
        least_model(prog(Rule("a", neg={"b"})))
    with pytest.raises(RuleNotDefinite):
        least_model(Program(choices=[("a", "b")], semantics=Semantics.MINIMAL_MODEL))


def test_answer_sets_even_loop():
    p = prog(Rule("a", neg={"b"}), Rule("b", neg={"a"}))
    assert answer_sets(p) == [frozenset({"b"}), frozenset({"a"})]


def test_answer_sets_odd_loop_has_none():
    assert answer_sets(prog(Rule("a", neg={"a"}))) == []


def test_answer_sets_honour_denials():
    p = Program((Rule("a", neg={"b"}), Rule("b", neg={"a"})), constraints=(Constraint({"a"}),))
    assert answer_sets(p) == [frozenset({"b"})]


def test_minimal_models_choice_picks_one():
    p = Program((Rule("c", {"a"}),), choices=(ChoiceClause(("a", "b")),),
                semantics=Semantics.MINIMAL_MODEL)
    assert minimal_models(p) == [frozenset({"b"}), frozenset({"a", "c"})]


def test_minimal_models_denial_filters():
    p = Program(choices=(ChoiceClause(("a", "b")),), constraints=(Constraint({"a"}),),
                semantics=Semantics.MINIMAL_MODEL)
    assert minimal_models(p) == [frozenset({"b"})]


def test_program_validation():
    with pytest.raises(ValueError):
        Program(choices=(ChoiceClause(("a",)),))  # choices need minimal-model semantics
    with pytest.raises(RuleNotDefinite):
        Program((Rule("a", neg={"b"}),), semantics=Semantics.MINIMAL_MODEL)
    with pytest.raises(ValueError):
        Program((fact("a"),), alphabet={"b"})
    with pytest.raises(ValueError):
        Constraint()
    with pytest.raises(ValueError):
        Rule("not")


def test_alphabet_bound():
    p = Program(alphabet={f"x{i}" for i in range(5)})
    with pytest.raises(AlphabetTooLarge):
        answer_sets(p, max_atoms=4)
    assert answer_sets(p, max_atoms=5) == [frozenset()]


def test_reduct_keeps_degrees_and_drops_negation():
    p = prog(Rule("a", {"b"}, {"c"}, "0.4"), Rule("d", neg={"a"}))
    assert reduct(p, {"a"}).rules == (Rule("a", {"b"}, necessity="0.4"),)
    assert reduct(p, set()).rules == (Rule("a", {"b"}, necessity="0.4"), Rule("d"))


@pytest.mark.parametrize("rules,expected", [
    ([fact("a")], True),
    ([Rule("a", {"b"}), Rule("b", {"a"})], False),
    ([fact("a"), Rule("b", {"a"})], True),
    ([Rule("b", {"a"}), fact("a")], True),
])
def test_grounded_ruleset(rules, expected):
    assert is_grounded_ruleset(rules) is expected


def test_state_key_orders_absent_first():
    alphabet = {"a", "b"}
    keys = sorted([{"a", "b"}, {"a"}, set(), {"b"}], key=lambda s: state_key(s, alphabet))
    assert keys == [set(), {"b"}, {"a"}, {"a", "b"}]


@given(randoms)
def test_answer_sets_match_reduct_oracle(rng):
    p = gen.random_program(rng)
    expected = sorted(oracles.gl_answer_sets(p.rules, p.alphabet), key=sorted)
    assert sorted(answer_sets(p), key=sorted) == expected
    for t in oracles.subsets(p.alphabet):
        assert is_acceptable(p, t) == (t in expected)


@given(randoms)
def test_least_model_closed_and_minimal(rng):
    p = gen.random_program(rng, neg=False)
    m = least_model(p)
    for r in p.rules:
        assert not r.pos <= m or r.head in m
    for a in m:
        smaller = m - {a}
        assert any(r.pos <= smaller and r.head not in smaller for r in p.rules)


@given(randoms)
def test_minimal_models_match_brute_force(rng):
    p = gen.random_choice_program(rng)
    got = minimal_models(p)
    assert sorted(got, key=sorted) == sorted(
        oracles.brute_minimal_models(p.rules, p.choices, p.constraints, p.alphabet), key=sorted)
    assert not any(a < b for a in got for b in got)
    assert acceptable_sets(p) == got
    for t in oracles.subsets(p.alphabet):
        assert is_acceptable(p, t) == (t in got)


@given(randoms)
def test_reduct_shrinks_as_interpretation_grows(rng):
    p = gen.random_program(rng)
    t2 = frozenset(a for a in p.alphabet if rng.random() < 0.5)
    t1 = frozenset(a for a in t2 if rng.random() < 0.5)
    assert set(reduct(p, t1).rules) >= set(reduct(p, t2).rules)
