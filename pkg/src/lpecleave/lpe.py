"""Linear process equations and their well-formedness rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from . import data
from .data import BOOL, Expr, Sort
from .errors import IndexOutOfRange, SortMismatch, UnboundVariable

RESERVED_CHAR = "#"


@dataclass(frozen=True)
class ActionDecl:
    label: str
    sorts: Tuple[Sort, ...] = ()


@dataclass(frozen=True)
class ActionTerm:
    label: str
    args: Tuple[Expr, ...] = ()

    def free_vars(self):
        out = frozenset()
        for a in self.args:
            out |= a.free_vars()
        return out


@dataclass(frozen=True)
class MultiAction:
    """A multi-action expression; the empty tuple is tau."""

    actions: Tuple[ActionTerm, ...] = ()

    @property
    def is_tau(self):
        return not self.actions

    def free_vars(self):
        out = frozenset()
        for a in self.actions:
            out |= a.free_vars()
        return out

    def __or__(self, other):
        return MultiAction(self.actions + other.actions)


TAU = MultiAction()


@dataclass(frozen=True)
class Summand:
    index: int
    sum_vars: Tuple[Tuple[str, Sort], ...]
    condition: Expr
    action: MultiAction
    updates: Tuple[Expr, ...]

    def free_vars(self):
        out = self.condition.free_vars() | self.action.free_vars()
        for u in self.updates:
            out |= u.free_vars()
        return out

    @property
    def sum_names(self):
        return tuple(n for n, _ in self.sum_vars)


@dataclass(frozen=True)
class Lpe:
    name: str
    params: Tuple[Tuple[str, Sort], ...]
    summands: Tuple[Summand, ...]
    actions: Tuple[ActionDecl, ...] = ()

    @property
    def param_names(self):
        return tuple(n for n, _ in self.params)

    @property
    def param_sorts(self):
        return tuple(s for _, s in self.params)

    def action_decl(self, label) -> Optional[ActionDecl]:
        for a in self.actions:
            if a.label == label:
                return a
        return None

    def sorts(self):
        """Every enumeration sort mentioned by the process, in first-use order."""
        seen = {}

        def note(s):
            if s.kind == data.ENUM_KIND and s.name not in seen:
                seen[s.name] = s

        for _, s in self.params:
            note(s)
        for a in self.actions:
            for s in a.sorts:
                note(s)
        for sm in self.summands:
            for _, s in sm.sum_vars:
                note(s)
        return list(seen.values())


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    summand: Optional[int] = None
    loc: Optional[tuple] = field(default=None, compare=False)

    def __str__(self):
        where = f"summand {self.summand}: " if self.summand is not None else ""
        at = f" (at {self.loc[0]}:{self.loc[1]})" if self.loc else ""
        return f"{self.kind}: {where}{self.message}{at}"


def _check_expr(expr, tenv, expected, summand, what, out):
    try:
        got = data.infer_sort(expr, tenv)
    except UnboundVariable as exc:
        out.append(Diagnostic("UnboundVariable", f"{what}: {exc}", summand, exc.loc))
        return
    except SortMismatch as exc:
        out.append(Diagnostic("SortMismatch", f"{what}: {exc}", summand, getattr(exc.node, "loc", None)))
        return
    if expected is not None and got != expected:
        out.append(
            Diagnostic("SortMismatch", f"{what} has sort {got}, expected {expected}", summand, getattr(expr, "loc", None))
        )


def well_formed(lpe: Lpe) -> list:
    """Return one diagnostic per violated well-formedness rule (empty if fine)."""
    out = []
    labels = [a.label for a in lpe.actions]
    for label in sorted({x for x in labels if labels.count(x) > 1}):
        out.append(Diagnostic("DuplicateAction", f"action {label!r} declared more than once"))
    names = lpe.param_names
    for name in sorted({x for x in names if names.count(x) > 1}):
        out.append(Diagnostic("DuplicateParameter", f"parameter {name!r} declared more than once"))
    decls = {a.label: a for a in lpe.actions}
    ptenv = dict(lpe.params)

    for pos, sm in enumerate(lpe.summands):
        i = sm.index
        if sm.index != pos:
            out.append(Diagnostic("IndexMismatch", f"summand at position {pos} has index {sm.index}", i))
        tenv = dict(ptenv)
        seen = set()
        for name, sort in sm.sum_vars:
            if name in ptenv:
                out.append(Diagnostic("SumVarShadowsParameter", f"sum variable {name!r} is also a parameter", i))
            if name in seen:
                out.append(Diagnostic("DuplicateSumVar", f"sum variable {name!r} bound twice", i))
            seen.add(name)
            tenv[name] = sort
        _check_expr(sm.condition, tenv, BOOL, i, "condition", out)
        for act in sm.action.actions:
            decl = decls.get(act.label)
            if decl is None:
                out.append(Diagnostic("UndeclaredAction", f"action {act.label!r} is not declared", i))
                continue
            if len(act.args) != len(decl.sorts):
                out.append(
                    Diagnostic(
                        "ActionArityMismatch",
                        f"action {act.label!r} takes {len(decl.sorts)} argument(s), got {len(act.args)}",
                        i,
                    )
                )
                continue
            for k, (arg, sort) in enumerate(zip(act.args, decl.sorts)):
                _check_expr(arg, tenv, sort, i, f"argument {k} of {act.label!r}", out)
        if len(sm.updates) != len(lpe.params):
            out.append(
                Diagnostic(
                    "UpdateArityMismatch",
                    f"{len(sm.updates)} update expression(s) for {len(lpe.params)} parameter(s)",
                    i,
                )
            )
        else:
            for (pname, psort), upd in zip(lpe.params, sm.updates):
                _check_expr(upd, tenv, psort, i, f"update of {pname!r}", out)
    return out


def project(items: Sequence, idxs) -> tuple:
    """Elements of *items* at the positions in *idxs*, in ascending position order."""
    idxs = sorted(set(idxs))
    for i in idxs:
        if not 0 <= i < len(items):
            raise IndexOutOfRange(f"projection index {i} out of range for length {len(items)}")
    return tuple(items[i] for i in idxs)
