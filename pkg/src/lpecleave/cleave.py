"""Cleaving an LPE into two synchronising components.

Given a partition of the parameter indices into a left and a right part
(which may overlap), :func:`plan_cleave` decides for every
summand whether it is *independent* on one side (it runs there alone,
marked with the ``tag`` action) or *shared* (both components take part and
agree on a vector of synchronisation arguments).  :func:`induce_component`
turns one side of the plan into an LPE and :func:`build_context` yields the
operator tree under which the two components behave like the original.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from . import data
from .compose import Allow, Comm, ContextExpr, Hide, Leaf, Par
from .data import Expr, Var
from .errors import DomainTooLarge, InvalidPartition
from .explore import interpret_multiaction
from .lpe import ActionDecl, ActionTerm, Lpe, MultiAction, Summand, project
from .multiaction import CommRule, CommSet, label_multiset

NAIVE = "naive"
REDUCED = "reduced"
MODES = (NAIVE, REDUCED)
SIDES = ("left", "right")


def sync_label(i, side=None):
    return f"sync#{i}#{side}" if side else f"sync#{i}"


@dataclass(frozen=True)
class Partition:
    left: frozenset
    right: frozenset

    def __init__(self, left, right):
        object.__setattr__(self, "left", frozenset(left))
        object.__setattr__(self, "right", frozenset(right))

    def check(self, nparams):
        everything = frozenset(range(nparams))
        stray = (self.left | self.right) - everything
        if stray:
            raise InvalidPartition(f"parameter indices {sorted(stray)} out of range")
        missing = everything - (self.left | self.right)
        if missing:
            raise InvalidPartition(f"parameter indices {sorted(missing)} are in neither part")

    @classmethod
    def from_names(cls, lpe: Lpe, left, right):
        index = {n: k for k, n in enumerate(lpe.param_names)}
        for name in list(left) + list(right):
            if name not in index:
                raise InvalidPartition(f"{name!r} is not a parameter of {lpe.name}")
        part = cls({index[n] for n in left}, {index[n] for n in right})
        part.check(len(lpe.params))
        return part


@dataclass
class SeparationTuple:
    """Recipe for one component.

    ``params`` are the parameter indices it keeps and ``summands`` the
    indices of the original summands it takes part in.  Those in
    ``independent`` run alone and reuse the original condition and action;
    ``conds``, ``actions`` and ``sync_args`` are indexed by the others.
    """

    side: str
    params: frozenset
    independent: frozenset
    summands: frozenset
    conds: Dict[int, Expr] = field(default_factory=dict)
    actions: Dict[int, MultiAction] = field(default_factory=dict)
    sync_args: Dict[int, Tuple[Expr, ...]] = field(default_factory=dict)
    tag: str = "tag"

    @property
    def shared(self):
        return self.summands - self.independent


@dataclass
class CleavePlan:
    left: SeparationTuple
    right: SeparationTuple
    mode: str = REDUCED

    @property
    def tag(self):
        return self.left.tag

    @property
    def shared(self):
        return self.left.summands & self.right.summands

    def side(self, name):
        return self.left if name == "left" else self.right

    def replace(self, side, **changes):
        """Copy of the plan with fields of one tuple replaced (dicts are merged)."""
        t = self.side(side)
        merged = {}
        for k, v in changes.items():
            old = getattr(t, k)
            merged[k] = {**old, **v} if isinstance(old, dict) else v
        new = dataclasses.replace(t, **merged)
        if side == "left":
            return dataclasses.replace(self, left=new)
        return dataclasses.replace(self, right=new)


def _is_identity(sm: Summand, names, idxs):
    return all(sm.updates[j] == Var(names[j]) for j in idxs)


def _independent(sm: Summand, names, own, other):
    allowed = {names[j] for j in own} | set(sm.sum_names)
    fv = sm.condition.free_vars() | sm.action.free_vars()
    for j in own:
        fv |= sm.updates[j].free_vars()
    return fv <= allowed and _is_identity(sm, names, other)


def _material_fv(cond, action, updates):
    fv = cond.free_vars() | action.free_vars()
    for u in updates:
        fv |= u.free_vars()
    return fv


def _fresh_tag(lpe: Lpe):
    declared = {a.label for a in lpe.actions}
    tag = "tag"
    while tag in declared:
        tag += "#"
    return tag


def plan_cleave(lpe: Lpe, partition: Partition, mode: str = REDUCED) -> CleavePlan:
    """Build both separation tuples for *partition*."""
    if mode not in MODES:
        raise ValueError(f"unknown cleave mode {mode!r}")
    partition.check(len(lpe.params))
    names = lpe.param_names
    lp, rp = partition.left, partition.right
    left_names = {names[j] for j in lp}
    right_names = {names[j] for j in rp}
    declared = {a.label for a in lpe.actions}
    for sm in lpe.summands:
        for side in (None,) + SIDES:
            if sync_label(sm.index, side) in declared:
                raise InvalidPartition(f"declared action {sync_label(sm.index, side)!r} collides with a sync label")

    every = frozenset(sm.index for sm in lpe.summands)
    # naive mode synchronises every summand, as in the plain construction
    if mode == NAIVE:
        alone_l = alone_r = frozenset()
    else:
        alone_l = frozenset(sm.index for sm in lpe.summands if _independent(sm, names, lp, rp))
        alone_r = frozenset(
            sm.index for sm in lpe.summands if sm.index not in alone_l and _independent(sm, names, rp, lp)
        )
    tag = _fresh_tag(lpe)
    left = SeparationTuple("left", lp, alone_l, every - alone_r, tag=tag)
    right = SeparationTuple("right", rp, alone_r, every - alone_l, tag=tag)

    for i in sorted(left.summands & right.summands):
        sm = lpe.summands[i]
        local = set(sm.sum_names)
        v_events, w_events = [], []
        for a in sm.action.actions:
            fv = a.free_vars()
            if fv <= left_names | local:
                v_events.append(a)
            elif mode == REDUCED and fv <= right_names | local:
                w_events.append(a)
            elif mode == REDUCED:
                v_events.append(a)
            else:
                w_events.append(a)
        if mode == NAIVE:
            cv = cw = sm.condition
            sync = tuple(Var(n) for n in names) + tuple(Var(e) for e in sm.sum_names)
        else:
            v_parts, w_parts = [], []
            for c in data.conjuncts(sm.condition):
                fv = c.free_vars()
                if fv <= left_names | local:
                    v_parts.append(c)
                elif fv <= right_names | local:
                    w_parts.append(c)
                else:
                    v_parts.append(c)
            cv, cw = data.conj(*v_parts), data.conj(*w_parts)
            v_fv = _material_fv(cv, MultiAction(tuple(v_events)), project(sm.updates, lp))
            w_fv = _material_fv(cw, MultiAction(tuple(w_events)), project(sm.updates, rp))
            sync = [Var(e) for e in sm.sum_names if e in v_fv and e in w_fv]
            sync += [Var(names[j]) for j in sorted(rp - lp) if names[j] in v_fv]
            sync += [Var(names[j]) for j in sorted(lp - rp) if names[j] in w_fv]
            sync = tuple(sync)
        left.conds[i], right.conds[i] = cv, cw
        left.actions[i] = MultiAction(tuple(v_events))
        right.actions[i] = MultiAction(tuple(w_events))
        left.sync_args[i] = right.sync_args[i] = sync
    return CleavePlan(left, right, mode)


def _summand_tenv(lpe: Lpe, sm: Summand):
    tenv = dict(lpe.params)
    tenv.update(sm.sum_vars)
    return tenv


def induce_component(
    lpe: Lpe,
    t: SeparationTuple,
    invariant: Optional[Expr] = None,
    deadlock_free: bool = False,
) -> Lpe:
    """The component LPE induced by separation tuple *t*.

    With *invariant* the conditions of the shared summands are strengthened
    by it (or, with *deadlock_free*, by the invariant evaluated at the
    successor state).  Sum variables that do not occur in a summand are
    dropped, which leaves its transitions unchanged.
    """
    names = lpe.param_names
    kept = sorted(t.params)
    dropped = [j for j in range(len(names)) if j not in t.params]
    params = project(lpe.params, kept)
    summands = []
    fresh = {}
    for i in sorted(t.summands):
        sm = lpe.summands[i]
        updates = project(sm.updates, kept)
        if i in t.independent:
            cond = sm.condition
            action = sm.action | MultiAction((ActionTerm(t.tag),))
            candidates = sm.sum_vars
            fresh[t.tag] = ()
        else:
            cond = t.conds[i]
            if invariant is not None:
                guard = invariant
                if deadlock_free:
                    guard = data.substitute(invariant, dict(zip(names, sm.updates)))
                cond = data.conj(cond, guard)
            label = sync_label(i, t.side)
            args = t.sync_args[i]
            tenv = _summand_tenv(lpe, sm)
            fresh[label] = tuple(data.infer_sort(a, tenv) for a in args)
            action = t.actions[i] | MultiAction((ActionTerm(label, tuple(args)),))
            candidates = sm.sum_vars + project(lpe.params, dropped)
        fv = _material_fv(cond, action, updates)
        sum_vars = tuple((n, s) for n, s in candidates if n in fv)
        summands.append(Summand(len(summands), sum_vars, cond, action, updates))
    decls = lpe.actions + tuple(ActionDecl(lbl, sorts) for lbl, sorts in fresh.items())
    return Lpe(f"{lpe.name}_{t.side}", params, tuple(summands), decls)


def _labels(m: MultiAction):
    return label_multiset(a.label for a in m.actions)


def build_context(lpe: Lpe, plan: CleavePlan) -> ContextExpr:
    """Operator tree synchronising the two components of *plan*."""
    shared = sorted(plan.shared)
    comm = CommSet(CommRule((sync_label(i, "left"), sync_label(i, "right")), sync_label(i)) for i in shared)
    allowed = {_labels(sm.action) for sm in lpe.summands}
    for i in sorted(plan.left.independent | plan.right.independent):
        allowed.add(label_multiset(_labels(lpe.summands[i].action) + (plan.tag,)))
    return Hide(
        frozenset((plan.tag,)),
        Allow(
            frozenset(allowed),
            Hide(frozenset(sync_label(i) for i in shared), Comm(comm, Par(Leaf("left"), Leaf("right")))),
        ),
    )


def initial_states(plan: CleavePlan, init):
    return project(init, plan.left.params), project(init, plan.right.params)


# ---------------------------------------------------------------------------
# Requirement checks


def _ok(reason="ok"):
    return {"pass": True, "reason": reason}


def _fail(reason):
    return {"pass": False, "reason": reason}


def _check_summand_sets(lpe, plan):
    """Each side takes part in every summand not independent on the other."""
    out = {}
    L, R = plan.left, plan.right
    every = {sm.index for sm in lpe.summands}
    for i in sorted(every | L.summands | R.summands):
        problems = []
        for own, other in ((L, R), (R, L)):
            if (i in own.summands) != (i in every and i not in other.independent):
                problems.append(f"{own.side} summands should be those not independent on the {other.side}")
            if i in own.independent - own.summands:
                problems.append(f"independent on the {own.side} but not among its summands")
        out[i] = _fail("; ".join(problems)) if problems else _ok()
    return out


def _check_independence_syntactic(lpe, plan):
    out = {}
    names = lpe.param_names
    for own, other in ((plan.left, plan.right), (plan.right, plan.left)):
        for i in sorted(own.independent):
            sm = lpe.summands[i]
            if not _is_identity(sm, names, other.params):
                moved = [names[j] for j in sorted(other.params) if sm.updates[j] != Var(names[j])]
                out[i] = _fail(f"independent on {own.side} but updates {', '.join(moved)}")
            elif not _independent(sm, names, own.params, other.params):
                out[i] = _fail(f"independent on {own.side} but mentions parameters outside {own.side}")
            else:
                out[i] = _ok()
    return out


def _events(m: MultiAction):
    return Counter(m.actions)


def check_cleave_syntactic(lpe: Lpe, plan: CleavePlan) -> dict:
    """Check the cleave requirements by sufficient syntactic conditions.

    Returns ``{requirement: {summand: {"pass": bool, "reason": str}}}``.
    """
    names = lpe.param_names
    report = {"summand_sets": _check_summand_sets(lpe, plan), "independence": _check_independence_syntactic(lpe, plan), "original_steps": {}, "joint_steps": {}}
    L, R = plan.left, plan.right
    for i in sorted(plan.shared):
        sm = lpe.summands[i]
        if any(i not in t.conds or i not in t.actions or i not in t.sync_args for t in (L, R)):
            report["original_steps"][i] = report["joint_steps"][i] = _fail("shared summand lacks a condition on one side")
            continue
        orig = data.conjuncts(sm.condition)
        cv, cw = data.conjuncts(L.conds[i]), data.conjuncts(R.conds[i])
        split = cv + cw
        r3, r4 = [], []
        foreign = [c for c in split if c not in orig]
        if foreign:
            r3.append("condition part not among the original conjuncts")
        if any(c not in split for c in orig):
            r4.append("an original conjunct is missing from both sides")
        if _events(L.actions[i]) + _events(R.actions[i]) != _events(sm.action):
            r3.append("actions do not partition the original multi-action")
            r4.append("actions do not partition the original multi-action")
        if L.sync_args[i] != R.sync_args[i]:
            r3.append("synchronisation vectors differ")
            r4.append("synchronisation vectors differ")
        local = set(sm.sum_names)
        v_fv = _material_fv(L.conds[i], L.actions[i], project(sm.updates, L.params))
        w_fv = _material_fv(R.conds[i], R.actions[i], project(sm.updates, R.params))
        synced = set()
        for a in L.sync_args[i]:
            if isinstance(a, Var):
                synced.add(a.name)
        need = [e for e in sm.sum_names if e in v_fv and e in w_fv]
        need += [names[j] for j in sorted(R.params - L.params) if names[j] in v_fv]
        need += [names[j] for j in sorted(L.params - R.params) if names[j] in w_fv]
        missing = [n for n in need if n not in synced]
        if missing:
            r4.append(f"not synchronised: {', '.join(missing)}")
        stray = (v_fv | w_fv) - set(names) - local
        if stray:
            r3.append(f"unknown variables {sorted(stray)}")
        report["original_steps"][i] = _fail("; ".join(r3)) if r3 else _ok()
        report["joint_steps"][i] = _fail("; ".join(r4)) if r4 else _ok()
    return report


def report_passes(report: dict) -> bool:
    return all(entry["pass"] for per in report.values() for entry in per.values())


def report_to_json(report: dict) -> dict:
    return {req: {str(i): dict(v) for i, v in per.items()} for req, per in report.items()}


def _fmt_env(env):
    return {k: data.format_value(v) for k, v in env.items()}


class _Budget:
    def __init__(self, limit):
        self.limit = limit

    def charge(self, what, *sizes):
        total = 1
        for s in sizes:
            total *= max(s, 1)
        if self.limit is not None and total > self.limit:
            raise DomainTooLarge(f"{what}: {total} combinations exceed the budget of {self.limit}")


def _domain(lpe, idxs, nat_bound):
    return [data.enumerate_sort(lpe.params[j][1], nat_bound) for j in idxs]


def _assign(names, idxs, values):
    return {names[j]: v for j, v in zip(idxs, values)}


def check_cleave_semantic(lpe: Lpe, plan: CleavePlan, nat_bound: int = 4, budget: Optional[int] = 10**8) -> dict:
    """Check the cleave requirements by exhaustive evaluation over bounded domains.

    Only parameters that occur in a summand are enumerated for it; the
    others cannot influence any of the evaluated expressions.  Nat values
    range over ``0..nat_bound``.
    """
    names = lpe.param_names
    L, R = plan.left, plan.right
    budget = _Budget(budget)
    report = {"summand_sets": _check_summand_sets(lpe, plan), "independence": {}, "original_steps": {}, "joint_steps": {}}

    for own, other in ((L, R), (R, L)):
        for i in sorted(own.independent):
            sm = lpe.summands[i]
            idxs = sorted(j for j in range(len(names)) if names[j] in sm.free_vars() or j in other.params)
            doms = _domain(lpe, idxs, nat_bound)
            edoms = [data.enumerate_sort(s, nat_bound) for _, s in sm.sum_vars]
            budget.charge(f"independence of summand {i}", *(len(d) for d in doms + edoms))
            bad = None
            for vals in itertools.product(*doms):
                env = _assign(names, idxs, vals)
                for ls in itertools.product(*edoms):
                    env.update(zip(sm.sum_names, ls))
                    if any(sm.updates[j].evaluate(env) != env[names[j]] for j in sorted(other.params)):
                        bad = dict(env)
                        break
                if bad:
                    break
            report["independence"][i] = _fail(f"updates {other.side} parameters at {_fmt_env(bad)}") if bad else _ok()

    for r in sorted(plan.shared):
        sm = lpe.summands[r]
        if any(r not in t.conds or r not in t.actions or r not in t.sync_args for t in (L, R)):
            report["original_steps"][r] = report["joint_steps"][r] = _fail("shared summand lacks a condition on one side")
            continue
        cv, cw = L.conds[r], R.conds[r]
        av, aw = L.actions[r], R.actions[r]
        sync_l, sync_r = L.sync_args[r], R.sync_args[r]
        kept_l, kept_r = sorted(L.params), sorted(R.params)
        fv = _material_fv(sm.condition, sm.action, sm.updates) | _material_fv(cv, av, sync_l) | _material_fv(cw, aw, sync_r)
        rel = [j for j in range(len(names)) if names[j] in fv]
        local = sm.sum_names
        edoms = [data.enumerate_sort(s, nat_bound) for _, s in sm.sum_vars]
        doms = _domain(lpe, rel, nat_bound)
        ls_all = list(itertools.product(*edoms))
        vecs = list(itertools.product(*doms))
        budget.charge(f"original steps of summand {r}", len(vecs), len(ls_all))

        def sync_values(args, env):
            return tuple(x.evaluate(env) for x in args)

        # every original step has a matching pair of component steps
        bad = None
        for vals in vecs:
            base = _assign(names, rel, vals)
            for ls in ls_all:
                env = dict(base)
                env.update(zip(local, ls))
                if sm.condition.evaluate(env) is not True:
                    continue
                if not (cv.evaluate(env) is True and cw.evaluate(env) is True):
                    bad = ("split conditions do not hold", env)
                elif sync_values(sync_l, env) != sync_values(sync_r, env):
                    bad = ("synchronisation vectors differ", env)
                elif interpret_multiaction(av, env) + interpret_multiaction(aw, env) != interpret_multiaction(sm.action, env):
                    bad = ("split actions differ from the original", env)
                if bad:
                    break
            if bad:
                break
        report["original_steps"][r] = _fail(f"{bad[0]} at {_fmt_env(bad[1])}") if bad else _ok()

        # every joint step is an original step: the left step fixes its own parameters from the
        # state and guesses the right-only ones, and vice versa
        rel_v = [j for j in rel if j in L.params]
        rel_w = [j for j in rel if j in R.params]
        free_wv = [j for j in rel if j in R.params and j not in L.params]
        free_vw = [j for j in rel if j in L.params and j not in R.params]
        budget.charge(
            f"joint steps of summand {r}",
            len(vecs),
            len(ls_all) ** 3,
            *(len(data.enumerate_sort(lpe.params[j][1], nat_bound)) for j in free_wv + free_vw),
        )
        pos = {j: k for k, j in enumerate(rel)}
        left_opts: Dict[tuple, Dict[tuple, dict]] = {}
        right_opts: Dict[tuple, Dict[tuple, dict]] = {}
        targets: Dict[tuple, set] = {}
        for vals in vecs:
            base = _assign(names, rel, vals)
            key_l = tuple(vals[pos[j]] for j in rel_v)
            key_r = tuple(vals[pos[j]] for j in rel_w)
            for ls in ls_all:
                env = dict(base)
                env.update(zip(local, ls))
                if cv.evaluate(env) is True:
                    key = (interpret_multiaction(av, env), tuple(sm.updates[j].evaluate(env) for j in kept_l))
                    left_opts.setdefault(key_l, {}).setdefault(sync_values(sync_l, env), {}).setdefault(key, env)
                if cw.evaluate(env) is True:
                    key = (interpret_multiaction(aw, env), tuple(sm.updates[j].evaluate(env) for j in kept_r))
                    right_opts.setdefault(key_r, {}).setdefault(sync_values(sync_r, env), {}).setdefault(key, env)
                if sm.condition.evaluate(env) is True:
                    targets.setdefault(vals, set()).add(
                        (
                            interpret_multiaction(sm.action, env),
                            tuple(sm.updates[j].evaluate(env) for j in kept_l),
                            tuple(sm.updates[j].evaluate(env) for j in kept_r),
                        )
                    )
        bad = None
        for vals in vecs:
            key_l = tuple(vals[pos[j]] for j in rel_v)
            key_r = tuple(vals[pos[j]] for j in rel_w)
            lo, ro = left_opts.get(key_l, {}), right_opts.get(key_r, {})
            goal = targets.get(vals, set())
            for h, lkeys in lo.items():
                rkeys = ro.get(h)
                if not rkeys:
                    continue
                for (a1, g1), env1 in lkeys.items():
                    for (a2, g2), env2 in rkeys.items():
                        if (a1 + a2, g1, g2) not in goal:
                            bad = (_assign(names, rel, vals), env1, env2)
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            state, env_l, env_r = bad
            report["joint_steps"][r] = _fail(
                f"components synchronise at {_fmt_env(state)} (left {_fmt_env(env_l)}, right {_fmt_env(env_r)}) "
                "without a matching original transition"
            )
        else:
            report["joint_steps"][r] = _ok()
    return report


# ---------------------------------------------------------------------------
# One-stop helper


@dataclass
class Cleave:
    lpe: Lpe
    partition: Partition
    plan: CleavePlan
    left: Lpe
    right: Lpe
    context: ContextExpr

    def initial_states(self, init):
        return initial_states(self.plan, init)


def cleave(
    lpe: Lpe,
    partition: Partition,
    mode: str = REDUCED,
    invariant: Optional[Expr] = None,
    deadlock_free: bool = False,
) -> Cleave:
    """Plan the cleave, induce both components and build their context."""
    plan = plan_cleave(lpe, partition, mode)
    return Cleave(
        lpe,
        partition,
        plan,
        induce_component(lpe, plan.left, invariant, deadlock_free),
        induce_component(lpe, plan.right, invariant, deadlock_free),
        build_context(lpe, plan),
    )
