"""State invariants and invariant-restricted LPEs."""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass
from typing import Optional

from . import data
from .data import BinOp, Expr
from .errors import DomainTooLarge, FreeVariableNotInScope
from .explore import ExploreLimits, explore
from .lpe import Lpe

GLOBAL = "global"
REACHABLE = "reachable"


@dataclass(frozen=True)
class InvariantVerdict:
    holds: bool
    mode: str
    state: Optional[tuple] = None
    summand: Optional[int] = None
    sum_values: Optional[dict] = None

    def __bool__(self):
        return self.holds

    def describe(self, lpe: Lpe) -> str:
        if self.holds:
            qualifier = " (reachable states only)" if self.mode == REACHABLE else ""
            return f"invariant holds{qualifier}"
        state = "(" + ",".join(data.format_value(v) for v in self.state) + ")"
        if self.summand is None:
            return f"invariant fails in reachable state {state}"
        extra = ""
        if self.sum_values:
            extra = " with " + ", ".join(f"{k}={data.format_value(v)}" for k, v in self.sum_values.items())
        return f"invariant not preserved by summand {self.summand} from state {state}{extra}"


def _check_scope(lpe: Lpe, invariant: Expr):
    stray = invariant.free_vars() - set(lpe.param_names)
    if stray:
        raise FreeVariableNotInScope(f"invariant mentions {', '.join(sorted(stray))}, which are not parameters of {lpe.name}")


def check_invariant(
    lpe: Lpe,
    invariant: Expr,
    nat_bound: int = 4,
    mode: str = GLOBAL,
    init=None,
    budget: Optional[int] = 10**7,
    limits: ExploreLimits = ExploreLimits(),
) -> InvariantVerdict:
    """Check that *invariant* is preserved by every summand.

    In global mode every parameter vector and every sum value (Nat up to
    *nat_bound*) is tried.  Reachable mode only checks that *invariant* holds in
    every state reachable from *init*, which is weaker.
    """
    _check_scope(lpe, invariant)
    names = lpe.param_names
    if mode == REACHABLE:
        if init is None:
            raise ValueError("reachable mode needs an initial state")
        lts = explore(lpe, init, limits)
        for state in lts.states:
            if invariant.evaluate(dict(zip(names, state))) is not True:
                return InvariantVerdict(False, mode, state)
        return InvariantVerdict(True, mode)
    if mode != GLOBAL:
        raise ValueError(f"unknown mode {mode!r}")

    doms = [data.enumerate_sort(s, nat_bound) for s in lpe.param_sorts]
    for sm in lpe.summands:
        edoms = [data.enumerate_sort(s, nat_bound) for _, s in sm.sum_vars]
        size = 1
        for d in doms + edoms:
            size *= max(len(d), 1)
        if budget is not None and size > budget:
            raise DomainTooLarge(f"summand {sm.index}: {size} combinations exceed the budget of {budget}")
    for state in itertools.product(*doms):
        env = dict(zip(names, state))
        if invariant.evaluate(env) is not True:
            continue
        for sm in lpe.summands:
            for ls in itertools.product(*(data.enumerate_sort(s, nat_bound) for _, s in sm.sum_vars)):
                full = dict(env)
                full.update(zip(sm.sum_names, ls))
                if sm.condition.evaluate(full) is not True:
                    continue
                succ = {n: u.evaluate(full) for n, u in zip(names, sm.updates)}
                if invariant.evaluate(succ) is not True:
                    return InvariantVerdict(False, mode, state, sm.index, dict(zip(sm.sum_names, ls)))
    return InvariantVerdict(True, mode)


def restrict(lpe: Lpe, invariant: Expr, summands=None, deadlock_free: bool = False, scope=None) -> Lpe:
    """Strengthen the conditions of the chosen summands (all by default) with *invariant*.

    *scope* names extra variables *invariant* may mention; by default it may use
    the parameters plus the sum variables of each restricted summand, which
    is what restricting an induced component requires.  With
    *deadlock_free* the invariant is required of the successor state
    instead.
    """
    chosen = {sm.index for sm in lpe.summands} if summands is None else set(summands)
    names = lpe.param_names
    allowed = set(names) | set(scope or ())
    out = []
    for sm in lpe.summands:
        if sm.index not in chosen:
            out.append(sm)
            continue
        stray = invariant.free_vars() - allowed - set(sm.sum_names)
        if stray:
            raise FreeVariableNotInScope(
                f"invariant mentions {', '.join(sorted(stray))}, not in scope in summand {sm.index}"
            )
        guard = data.substitute(invariant, dict(zip(names, sm.updates))) if deadlock_free else invariant
        out.append(dataclasses.replace(sm, condition=BinOp("&&", sm.condition, guard)))
    return dataclasses.replace(lpe, summands=tuple(out))
