import random

import pytest

from lpecleave import bisimilar, explore, minimise
from lpecleave.cleave import Partition, cleave
from lpecleave.lts import Lts
from lpecleave.multiaction import ActionMultiset

from lpegen import LIMITS, random_lts
from oracles import gfp_bisimulation, oracle_bisimilar

A, B = ActionMultiset.of("a"), ActionMultiset.of("b")


def loop(label):
    return Lts([0], 0, [(0, label, 0)])


def test_machine_is_already_minimal(machine):
    quotient, block = minimise(explore(machine.lpe, machine.init))
    assert (quotient.num_states, quotient.num_transitions) == (8, 8)
    assert block == list(range(8))


def test_identical_futures_collapse():
    tau = ActionMultiset()
    lts = Lts([0, 1, 2], 0, [(0, tau, 1), (0, tau, 2), (1, A, 1), (2, A, 2)])
    quotient, block = minimise(lts)
    assert quotient.num_states == 2
    assert block[1] == block[2]


def test_naive_left_component_has_no_reduction():
    machine_v = explore(__import__("conftest").load("machine_naive_left.alp").lpe, (0,))
    quotient, _ = minimise(machine_v)
    assert (quotient.num_states, quotient.num_transitions) == (4, 8)


def test_basic_verdicts(machine):
    m = explore(machine.lpe, machine.init)
    assert bisimilar(m, m)
    assert bisimilar(loop(A), loop(A))
    verdict = bisimilar(loop(A), loop(B))
    assert not verdict
    assert verdict.depth == 1


def test_composition_of_machine_cleave(machine):
    c = cleave(machine.lpe, Partition({0}, {1}))
    iv, iw = c.initial_states(machine.init)
    from lpecleave import compose

    composed = compose(c.context, {"left": explore(c.left, iv), "right": explore(c.right, iw)})
    assert bisimilar(explore(machine.lpe, machine.init), composed)


def test_blocks_numbered_by_smallest_member():
    lts = Lts([0, 1, 2, 3], 0, [(0, A, 1), (1, B, 2), (2, A, 3), (3, B, 2)])
    _, block = minimise(lts)
    seen = []
    for b in block:
        if b not in seen:
            seen.append(b)
    assert seen == sorted(seen)


@pytest.mark.parametrize("seed", range(200))
def test_against_greatest_fixed_point(seed):
    rng = random.Random(seed)
    a, b = random_lts(rng), random_lts(rng)
    assert bool(bisimilar(a, b)) == oracle_bisimilar(a, b)
    quotient, block = minimise(a)
    rel = gfp_bisimulation(a.successors(), a.successors())
    for p in range(a.num_states):
        for q in range(a.num_states):
            assert (block[p] == block[q]) == ((p, q) in rel)


@pytest.mark.parametrize("seed", range(50))
def test_minimise_laws(seed):
    lts = random_lts(random.Random(seed))
    once, _ = minimise(lts)
    twice, _ = minimise(once)
    assert (once.num_states, once.num_transitions) == (twice.num_states, twice.num_transitions)
    assert bisimilar(lts, once)
    once.validate()
