"""Semantic multi-actions and the communication, hiding and data-stripping operators.

A multi-action is a multiset of events ``(label, args)``.  It is stored as a
sorted tuple with repetitions, so equal multisets are equal tuples and hash
alike; the empty multiset is tau.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Tuple

from .data import format_value
from .errors import IllFormedCommSet


class ActionMultiset(tuple):
    """Canonical sorted tuple of ``(label, args)`` events."""

    __slots__ = ()

    def __new__(cls, events: Iterable = ()):
        return super().__new__(cls, sorted((lbl, tuple(args)) for lbl, args in events))

    @classmethod
    def of(cls, *labels):
        """Shorthand: ``ActionMultiset.of("a", ("b", (1,)))``."""
        return cls((x, ()) if isinstance(x, str) else x for x in labels)

    @property
    def is_tau(self):
        return len(self) == 0

    def counts(self) -> Counter:
        return Counter(self)

    def __add__(self, other):
        return madd(self, other)

    def __sub__(self, other):
        return msub(self, other)

    def __repr__(self):
        return "{" + render_label(self) + "}"

    def __str__(self):
        return render_label(self)


TAU = ActionMultiset()


def madd(a: ActionMultiset, b: ActionMultiset) -> ActionMultiset:
    return ActionMultiset(tuple(a) + tuple(b))


def msub(a: ActionMultiset, b: ActionMultiset) -> ActionMultiset:
    left = Counter(a)
    left.subtract(Counter(b))
    return ActionMultiset(ev for ev, n in left.items() for _ in range(max(n, 0)))


def included(a, b) -> bool:
    """Multiset inclusion ``a <= b``."""
    cb = Counter(b)
    return all(cb[x] >= n for x, n in Counter(a).items())


def render_event(event) -> str:
    label, args = event
    if not args:
        return label
    return f"{label}({','.join(format_value(v) for v in args)})"


def render_label(m: ActionMultiset) -> str:
    if not m:
        return "tau"
    return "|".join(render_event(ev) for ev in m)


@dataclass(frozen=True)
class CommRule:
    lhs: Tuple[str, ...]
    rhs: str

    def __post_init__(self):
        if not self.lhs:
            raise IllFormedCommSet("communication needs a non-empty left-hand side")
        object.__setattr__(self, "lhs", tuple(sorted(self.lhs)))

    def __str__(self):
        return f"{'|'.join(self.lhs)} -> {self.rhs}"


class CommSet:
    """A well-formed set of communication rules.

    Left-hand sides must use pairwise disjoint labels and no right-hand side
    may appear in another rule's left-hand side.  When *sorts* (label to
    argument sorts) is given, every left-hand side must be sort-uniform.
    """

    def __init__(self, rules: Iterable = (), sorts=None):
        rules = [r if isinstance(r, CommRule) else CommRule(tuple(r[0]), r[1]) for r in rules]
        owner = {}
        for k, rule in enumerate(rules):
            for label in set(rule.lhs):
                if label in owner:
                    raise IllFormedCommSet(f"label {label!r} occurs in the left-hand side of two communications")
                owner[label] = k
        for k, rule in enumerate(rules):
            if rule.rhs in owner and owner[rule.rhs] != k:
                raise IllFormedCommSet(f"result {rule.rhs!r} occurs in another left-hand side")
        if sorts is not None:
            for rule in rules:
                found = {tuple(sorts[l]) for l in rule.lhs if l in sorts}
                if len(found) > 1:
                    raise IllFormedCommSet(f"communication {rule} mixes argument sorts")
        self.rules = tuple(rules)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        return isinstance(other, CommSet) and set(self.rules) == set(other.rules)

    def __hash__(self):
        return hash(frozenset(self.rules))

    def __repr__(self):
        return "CommSet([" + ", ".join(str(r) for r in self.rules) + "])"


def _apply_rule(rule: CommRule, multiset: Counter) -> Counter:
    need = Counter(rule.lhs)
    first = rule.lhs[0]
    candidates = sorted({args for (lbl, args) in multiset if lbl == first})
    out = Counter()
    for args in candidates:
        while all(multiset[(lbl, args)] >= n for lbl, n in need.items()):
            for lbl, n in need.items():
                multiset[(lbl, args)] -= n
            out[(rule.rhs, args)] += 1
    multiset = +multiset
    multiset.update(out)
    return multiset


def comm_apply(comm: CommSet, multiset: ActionMultiset) -> ActionMultiset:
    """Apply every communication exhaustively to *multiset*."""
    if not comm.rules:
        return multiset
    bag = Counter(multiset)
    for rule in comm.rules:
        bag = _apply_rule(rule, bag)
    return ActionMultiset(ev for ev, n in bag.items() for _ in range(n))


def hide_apply(hidden, multiset: ActionMultiset) -> ActionMultiset:
    """Drop every event whose label is in *hidden*."""
    if not any(lbl in hidden for lbl, _ in multiset):
        return multiset
    return ActionMultiset(ev for ev in multiset if ev[0] not in hidden)


def strip_data(multiset: ActionMultiset) -> Tuple[str, ...]:
    """The multiset of labels of *multiset*, as a sorted tuple."""
    return tuple(lbl for lbl, _ in multiset)


def label_multiset(labels: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(labels))


def allow_set(multisets: Iterable[Iterable[str]]) -> frozenset:
    return frozenset(label_multiset(m) for m in multisets)
