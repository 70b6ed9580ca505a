"""Breadth-first generation of the representative state space of an LPE.

States are canonical value vectors, so data-equivalent successor expressions
collapse into one state by construction.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

from . import data
from .data import NAT_KIND, BinOp, Var
from .errors import UnboundedSum, StateLimitExceeded
from .lpe import Lpe, MultiAction
from .lts import Lts
from .multiaction import ActionMultiset

DEFAULT_MAX_STATES = 10_000_000


@dataclass(frozen=True)
class ExploreLimits:
    max_states: int = DEFAULT_MAX_STATES
    nat_sum_fallback_bound: Optional[int] = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")


def interpret_multiaction(m: MultiAction, env) -> ActionMultiset:
    return ActionMultiset(
        (a.label, tuple(x.evaluate(env) for x in a.args)) for a in m.actions
    )


def _nat_upper_bound(var, cond, base):
    """Inclusive upper bound on Nat variable *var* implied by a top-level conjunct."""
    best = None
    known = base.keys()

    def closed(e):
        return e.free_vars() <= known

    for c in data.conjuncts(cond):
        if not isinstance(c, BinOp):
            continue
        op, lhs, rhs = c.op, c.lhs, c.rhs
        # normalise `e OP v` to `v OP' e`
        if isinstance(rhs, Var) and rhs.name == var and not (isinstance(lhs, Var) and lhs.name == var):
            op = {"==": "==", ">=": "<=", ">": "<"}.get(op)
            lhs, rhs = rhs, lhs
        if op not in ("==", "<=", "<") or not (isinstance(lhs, Var) and lhs.name == var):
            continue
        if not closed(rhs):
            continue
        bound = rhs.evaluate(base)
        if op == "<":
            bound -= 1
        if best is None or bound < best:
            best = bound
    return best


def enumerate_bindings(sum_vars, cond, base, limits: ExploreLimits = ExploreLimits(), summand=None) -> Iterator[dict]:
    """Yield every extension of *base* over *sum_vars* that satisfies *cond*.

    Nat variables are bounded by a top-level conjunct ``v == e``, ``v <= e``
    or ``v < e`` (or a mirrored form) whose right side is closed under
    *base*; otherwise the fallback bound applies, and without one the sum
    is infinitely branching.
    """
    domains = []
    for name, sort in sum_vars:
        if sort.kind == NAT_KIND:
            bound = _nat_upper_bound(name, cond, base)
            if bound is None:
                bound = limits.nat_sum_fallback_bound
                if bound is None:
                    raise UnboundedSum(name, summand)
            domains.append(range(bound + 1) if bound >= 0 else range(0))
        else:
            domains.append(data.enumerate_sort(sort))
    names = [n for n, _ in sum_vars]
    for combo in itertools.product(*domains):
        env = dict(base)
        env.update(zip(names, combo))
        if cond.evaluate(env) is True:
            yield env


def successors(lpe: Lpe, state, limits: ExploreLimits = ExploreLimits()):
    """Outgoing ``(label, next_state)`` pairs of *state*, in summand order."""
    base = dict(zip(lpe.param_names, state))
    for sm in lpe.summands:
        for env in enumerate_bindings(sm.sum_vars, sm.condition, base, limits, sm.index):
            label = interpret_multiaction(sm.action, env)
            yield label, tuple(u.evaluate(env) for u in sm.updates)


def explore(lpe: Lpe, init, limits: ExploreLimits = ExploreLimits()) -> Lts:
    init = tuple(init)
    if len(init) != len(lpe.params):
        raise ValueError(f"{lpe.name} expects {len(lpe.params)} initial values, got {len(init)}")
    for v, (name, sort) in zip(init, lpe.params):
        if not data.check_value(v, sort):
            raise ValueError(f"initial value {v!r} of {name!r} is not of sort {sort}")
    index = {init: 0}
    states = [init]
    transitions = []
    seen = set()
    queue = deque([init])
    while queue:
        state = queue.popleft()
        src = index[state]
        for label, nxt in successors(lpe, state, limits):
            dst = index.get(nxt)
            if dst is None:
                if len(states) >= limits.max_states:
                    raise StateLimitExceeded(limits.max_states)
                dst = index[nxt] = len(states)
                states.append(nxt)
                queue.append(nxt)
            t = (src, label, dst)
            if t not in seen:
                seen.add(t)
                transitions.append(t)
    return Lts(states, 0, transitions, params=lpe.param_names)
