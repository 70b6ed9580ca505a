import random

import pytest

from lpecleave import bisimilar, compose, explore, minimise
from lpecleave.cleave import Partition, cleave
from lpecleave.compose import Allow, Comm, Hide, Leaf, Par, format_context, parse_context, render_context
from lpecleave.errors import ParseError, StateLimitExceeded, UnknownComponent
from lpecleave.explore import ExploreLimits
from lpecleave.lts import Lts
from lpecleave.multiaction import ActionMultiset, CommSet

from lpegen import random_lts

A, B = ActionMultiset.of("a"), ActionMultiset.of("b")
LOOP_A = Lts([0], 0, [(0, A, 0)])


def labels(lts):
    return sorted(str(l) for _, l, _ in lts.transitions)


def test_allow_filters_everything():
    one_b = Lts([0, 1], 0, [(0, B, 1)])
    out = compose(Allow(frozenset({("a",)}), Leaf("L")), {"L": one_b})
    assert (out.num_states, out.num_transitions) == (1, 0)


def test_par_of_self_loops():
    out = compose(Par(Leaf("L"), Leaf("L")), {"L": LOOP_A})
    assert out.num_states == 1
    # the left and right moves give the same triple, and transitions form a set
    assert labels(out) == ["a", "a|a"]


def test_comm_and_hide():
    left = Lts([0, 1], 0, [(0, ActionMultiset([("s", (1,))]), 1)])
    right = Lts([0, 1], 0, [(0, ActionMultiset([("r", (1,))]), 1)])
    ctx = Hide(
        frozenset({"c"}),
        Allow(frozenset({("c",)}), Comm(CommSet([(("r", "s"), "c")]), Par(Leaf("L"), Leaf("R")))),
    )
    out = compose(ctx, {"L": left, "R": right})
    assert (out.num_states, out.num_transitions) == (2, 1)
    assert labels(out) == ["tau"]


def test_leaf_is_identity_on_reachable_part():
    lts = Lts([0, 1, 2], 0, [(0, A, 1), (2, B, 0)])
    out = compose(Leaf("L"), {"L": lts})
    assert (out.num_states, out.num_transitions) == (2, 1)


def test_unknown_component_and_limits():
    with pytest.raises(UnknownComponent):
        compose(Leaf("X"), {})
    chain = Lts(list(range(5)), 0, [(k, A, k + 1) for k in range(4)])
    with pytest.raises(StateLimitExceeded):
        compose(Leaf("L"), {"L": chain}, ExploreLimits(max_states=3))


def test_context_text_round_trip(machine):
    ctx = cleave(machine.lpe, Partition({0}, {1})).context
    text = format_context(ctx, {"left": "pv.aut", "right": "pw.aut"})
    assert text == (
        'hide {tag} (allow {{count},{count,tag},{toggle}} (hide {sync#1} '
        '(comm {sync#1#left|sync#1#right -> sync#1} (par (lts "pv.aut") (lts "pw.aut")))))'
    )
    back = parse_context(text)
    assert render_context(back) == render_context(ctx, {"left": "pv.aut", "right": "pw.aut"})
    assert parse_context("(" + text + ")") == back


@pytest.mark.parametrize("text", ["", "lts", "par (lts \"a\")", "comm {a|b} (lts \"x\")", "frob (lts \"x\")", "hide {a} lts \"x\""])
def test_bad_contexts(text):
    with pytest.raises(ParseError):
        parse_context(text)


@pytest.mark.parametrize("seed", range(40))
def test_minimising_components_is_a_congruence(seed):
    rng = random.Random(seed)
    a, b = random_lts(rng, labels=("a", "b")), random_lts(rng, labels=("b", "c"))
    ctx = Hide(
        frozenset({"x"}),
        Allow(frozenset({("a",), ("x",), ("c",), ()}), Comm(CommSet([(("b", "b"), "x")]), Par(Leaf("L"), Leaf("R")))),
    )
    full = compose(ctx, {"L": a, "R": b})
    reduced = compose(ctx, {"L": minimise(a)[0], "R": minimise(b)[0]})
    assert bisimilar(full, reduced)


def test_congruence_on_abp(abp):
    part = Partition.from_names(abp.lpe, "s sd sb k kd kb".split(), "r rd rb l lb".split())
    c = cleave(abp.lpe, part)
    iv, iw = c.initial_states(abp.init)
    lv, lw = explore(c.left, iv), explore(c.right, iw)
    full = compose(c.context, {"left": lv, "right": lw})
    reduced = compose(c.context, {"left": minimise(lv)[0], "right": minimise(lw)[0]})
    assert bisimilar(full, reduced)
