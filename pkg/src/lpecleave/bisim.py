"""Strong bisimulation: signature-based partition refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .lts import Lts


def _refine(succ, n, watch=None):
    """Coarsest stable partition of states ``0..n-1``.

    Returns ``(block, split_round)``; *split_round* is the refinement round
    in which the two states of *watch* were first separated (or None).
    """
    block = [0] * n
    count = 1 if n else 0
    rounds = 0
    split = None
    while True:
        ids = {}
        new = [0] * n
        for s in range(n):
            sig = (block[s], frozenset((lbl, block[t]) for lbl, t in succ[s]))
            b = ids.get(sig)
            if b is None:
                b = ids[sig] = len(ids)
            new[s] = b
        rounds += 1
        if watch is not None and split is None and new[watch[0]] != new[watch[1]]:
            split = rounds
        if len(ids) == count:
            return new, split
        block, count = new, len(ids)


def minimise(lts: Lts):
    """Quotient of *lts* modulo strong bisimilarity.

    Blocks are numbered by their smallest member.  Returns the quotient and
    the map from old state index to block.
    """
    succ = lts.successors()
    block, _ = _refine(succ, lts.num_states)
    nblocks = max(block) + 1 if block else 0
    members: List[list] = [[] for _ in range(nblocks)]
    for s, b in enumerate(block):
        members[b].append(s)
    seen = set()
    transitions = []
    for s in range(lts.num_states):
        for lbl, t in succ[s]:
            tr = (block[s], lbl, block[t])
            if tr not in seen:
                seen.add(tr)
                transitions.append(tr)
    quotient = Lts([tuple(m) for m in members], block[lts.initial], transitions)
    return quotient, block


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    depth: Optional[int] = None

    def __bool__(self):
        return self.equivalent


def disjoint_union(a: Lts, b: Lts):
    """Successor lists of a and b side by side; b's states are shifted by |a|."""
    off = a.num_states
    succ = a.successors() + [[(lbl, t + off) for lbl, t in row] for row in b.successors()]
    return succ, off


def bisimilar(a: Lts, b: Lts) -> Verdict:
    """Decide strong bisimilarity of the initial states of *a* and *b*.

    On a negative answer ``depth`` is the refinement round that separated
    the two initial states.
    """
    succ, off = disjoint_union(a, b)
    watch = (a.initial, b.initial + off)
    block, split = _refine(succ, len(succ), watch)
    if block[watch[0]] == block[watch[1]]:
        return Verdict(True)
    return Verdict(False, split)
