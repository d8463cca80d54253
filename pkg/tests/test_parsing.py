import copy
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import generators as gen
from mcsc import (DegreeOutOfRange, ParseError, SchemaError, Semantics, SemanticError,
                  UnknownAgent, UnknownContext, load_bundled, parse_mcs, parse_problem, print_mcs)

randoms = st.randoms(use_true_random=False)


def robots_raw():
    return json.loads(load_bundled("robots.json"))


@pytest.mark.parametrize("name", ["example1.mcs", "example2.mcs"])
def test_bundled_round_trip(name):
    m = parse_mcs(load_bundled(name)).mcs
    assert parse_mcs(print_mcs(m)).mcs == m


def test_example1_shape(example1):
    assert example1.names == ("c1", "c2", "c3")
    assert len(example1.bridge_rules) == 4
    # bridge heads and body atoms join the context alphabets
    assert "middleware" in example1.contexts[1].program.alphabet
    assert "profB" in example1.contexts[1].program.alphabet
    assert example1.contexts[0].program.semantics is Semantics.ANSWER_SET


def test_locations_recorded():
    doc = parse_mcs("context a {\n  x.\n}\ncontext b { }\n(b:y) :- (a:x).\n")
    assert doc.locations[("context", "b")] == (4, 9)
    assert doc.locations[("bridge", 0)] == (5, 1)


def test_semantics_keywords():
    m = parse_mcs("context c minimal { a. }\ncontext d { choice x | y. }").mcs
    assert m.contexts[0].program.semantics is Semantics.MINIMAL_MODEL
    assert m.contexts[1].program.semantics is Semantics.MINIMAL_MODEL
    assert parse_mcs(print_mcs(m)).mcs == m


def test_explicit_alphabet_survives_round_trip():
    m = parse_mcs("context c { atoms a, b, z. a. }").mcs
    assert m.contexts[0].program.alphabet == {"a", "b", "z"}
    assert parse_mcs(print_mcs(m)).mcs == m


@pytest.mark.parametrize("text,error,where", [
    ("context c { a :- . }", ParseError, (1, 18)),
    ("context c { a }", ParseError, (1, 15)),
    ("context c {\n  a [1.5].\n}", DegreeOutOfRange, (2, 6)),
    ("context c { a. }\ncontext c { b. }", SemanticError, (2, 9)),
    ("context c { a. }\n(c:a) :- (d:b).", UnknownContext, (2, 11)),
    ("context c { atoms a. a. }\n(c:q).", SemanticError, (2, 1)),
    ("context c { a $ }", ParseError, (1, 15)),
])
def test_errors_carry_positions(text, error, where):
    with pytest.raises(error) as err:
        parse_mcs(text)
    assert (err.value.line, err.value.column) == where
    assert str(err.value).startswith(f"{where[0]}:{where[1]}: ")


@given(randoms)
def test_random_round_trip(rng):
    m = gen.random_mcs(rng, max_total=12, choices=True, degrees=True)
    text = print_mcs(m)
    again = parse_mcs(text).mcs
    assert again == m
    assert print_mcs(again) == text


def test_problem_document(robots):
    doc = parse_problem(load_bundled("robots.json"))
    assert doc.problem == robots
    assert doc.title
    assert list(robots.agent_ids) == ["ag_1", "ag_2", "ag_3", "ag_4"]
    assert list(robots.goals) == ["g_1", "g_2", "g_3", "g_4"]


def _broken(mutate):
    raw = robots_raw()
    mutate(raw)
    return json.dumps(raw)


@pytest.mark.parametrize("mutate,error,path", [
    (lambda r: r.pop("goals"), SchemaError, ""),
    (lambda r: r["plans"][2].__setitem__("steps", []), SchemaError, "plans/2/steps"),
    (lambda r: r["agents"][1].__setitem__("id", 7), SchemaError, "agents/1/id"),
    (lambda r: r["plans"][0]["steps"][0].__setitem__(0, "ag_9"), UnknownAgent, "plans/0/steps/0"),
    (lambda r: r["uncertainty"].__setitem__("model", "cubic"), SchemaError, "uncertainty/model"),
    (lambda r: r["exclusions"][0]["carry_actions"].__setitem__("ag_9", "a_1c"), UnknownAgent,
     "exclusions/0/carry_actions/ag_9"),
])
def test_problem_errors_name_the_path(mutate, error, path):
    with pytest.raises(error) as err:
        parse_problem(_broken(mutate))
    assert err.value.path == path


def test_invalid_json():
    with pytest.raises(SchemaError, match="invalid JSON"):
        parse_problem("{")


def test_distances_optional():
    raw = robots_raw()
    raw = copy.deepcopy(raw)
    del raw["distances"], raw["uncertainty"]
    for p in raw["plans"]:
        p["possibility"] = 0.5
    problem = parse_problem(json.dumps(raw)).problem
    assert problem.distances is None
