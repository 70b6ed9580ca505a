import random

import pytest

from lpecleave import corpus_path, explore, parse_spec
from lpecleave.data import BOOL, NAT
from lpecleave.errors import StateLimitExceeded, UnboundedSum
from lpecleave.explore import ExploreLimits, enumerate_bindings, interpret_multiaction
from lpecleave.lts import write_aut, write_states
from lpecleave.multiaction import ActionMultiset
from lpecleave.syntax import parse_expr

from conftest import GOLDEN, load
from lpegen import LIMITS, random_lpe
from oracles import reachable_transitions


def test_machine_matches_golden_files(machine):
    lts = explore(machine.lpe, machine.init)
    assert (lts.num_states, lts.num_transitions) == (8, 8)
    assert write_aut(lts) == (GOLDEN / "machine.aut").read_text()
    assert write_states(lts) == (GOLDEN / "machine.states").read_text()


def test_naive_left_component():
    spec = load("machine_naive_left.alp")
    lts = explore(spec.lpe, spec.init)
    assert (lts.num_states, lts.num_transitions) == (4, 8)


def test_naive_right_component_is_infinitely_branching():
    spec = load("machine_naive_right.alp")
    with pytest.raises(UnboundedSum) as info:
        explore(spec.lpe, spec.init)
    assert info.value.var == "n"


def test_fallback_bound_makes_it_finite():
    spec = load("machine_naive_right.alp")
    lts = explore(spec.lpe, spec.init, ExploreLimits(nat_sum_fallback_bound=3))
    assert lts.num_states == 2


def test_state_limit(machine):
    with pytest.raises(StateLimitExceeded):
        explore(machine.lpe, machine.init, ExploreLimits(max_states=4))
    with pytest.raises(ValueError):
        ExploreLimits(max_states=0)


def test_interpret_multiaction(machine):
    toggle = machine.lpe.summands[1].action
    assert interpret_multiaction(toggle, {"s": True}) == ActionMultiset([("toggle", (True,))])
    spec = parse_spec("act count; proc P() = count|count . P() + tau . P(); init P();")
    assert interpret_multiaction(spec.lpe.summands[0].action, {}) == ActionMultiset.of("count", "count")
    assert interpret_multiaction(spec.lpe.summands[1].action, {}) == ActionMultiset()


def test_bindings_without_sum_variables():
    cond = parse_expr("n > 0", extra_vars=["n"])
    assert list(enumerate_bindings((), cond, {"n": 3})) == [{"n": 3}]


def test_bindings_bounded_by_condition():
    cond = parse_expr("n > 0 && n <= 3", extra_vars=["n"])
    envs = list(enumerate_bindings((("n", NAT),), cond, {"s": False}))
    assert [e["n"] for e in envs] == [1, 2, 3]


@pytest.mark.parametrize("text, expected", [("n < 2", [0, 1]), ("2 >= n", [0, 1, 2]), ("m == n", [1]), ("n == 5 && n < 3", [])])
def test_bound_patterns(text, expected):
    cond = parse_expr(text, extra_vars=["n", "m"])
    assert [e["n"] for e in enumerate_bindings((("n", NAT),), cond, {"m": 1})] == expected


def test_unbounded_sum():
    cond = parse_expr("n > 0", extra_vars=["n"])
    with pytest.raises(UnboundedSum):
        list(enumerate_bindings((("n", NAT),), cond, {}))


def test_bool_sums_enumerate_fully():
    envs = list(enumerate_bindings((("b", BOOL),), parse_expr("true"), {}))
    assert [e["b"] for e in envs] == [False, True]


def test_exploration_is_deterministic(abp):
    a = explore(abp.lpe, abp.init)
    b = explore(abp.lpe, abp.init)
    assert write_aut(a) == write_aut(b)
    assert a.states[0] == abp.init


@pytest.mark.parametrize("seed", range(150))
def test_agrees_with_fixpoint_oracle(seed):
    lpe, init = random_lpe(random.Random(seed))
    lts = explore(lpe, init, LIMITS)
    states, transitions = reachable_transitions(lpe, init, 3)
    assert set(lts.states) == states
    assert len(lts.states) == len(states)
    assert {(lts.states[s], lbl, lts.states[t]) for s, lbl, t in lts.transitions} == transitions
    assert len(lts.transitions) == len(transitions)


def test_corpus_specs_parse():
    for name in ("machine.alp", "machine_naive_left.alp", "machine_naive_right.alp", "abp.alp"):
        parse_spec(corpus_path(name).read_text())
