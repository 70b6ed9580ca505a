"""Sorts, values and data expressions.

Semantic values use plain Python objects wherever possible so that state
vectors hash and compare cheaply: ``bool`` for Bool, ``int`` for Nat,
:class:`EnumValue` for enumeration constructors and :data:`UNIT` for the
single inhabitant of the unit sort.  A state or environment never mixes
sorts at one position, so ``True == 1`` is never observable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

from .errors import SortMismatch, UnboundVariable

BOOL_KIND = "Bool"
NAT_KIND = "Nat"
ENUM_KIND = "Enum"
UNIT_KIND = "Unit"


@dataclass(frozen=True)
class Sort:
    kind: str
    name: str = ""
    constructors: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind == ENUM_KIND:
            if not self.constructors:
                raise ValueError(f"enumeration {self.name!r} has no constructors")
            if len(set(self.constructors)) != len(self.constructors):
                raise ValueError(f"enumeration {self.name!r} repeats a constructor")
        elif self.kind not in (BOOL_KIND, NAT_KIND, UNIT_KIND):
            raise ValueError(f"unknown sort kind {self.kind!r}")

    def __str__(self):
        return self.name or self.kind

    @property
    def is_finite(self):
        return self.kind != NAT_KIND

    def value(self, constructor):
        """Return the enumeration value named *constructor*."""
        return EnumValue(self.name, self.constructors.index(constructor), constructor)


BOOL = Sort(BOOL_KIND, "Bool")
NAT = Sort(NAT_KIND, "Nat")
UNIT_SORT = Sort(UNIT_KIND, "Unit")


def enum_sort(name, constructors):
    return Sort(ENUM_KIND, name, tuple(constructors))


@dataclass(frozen=True, order=True)
class EnumValue:
    sort: str
    index: int
    name: str = field(compare=False)

    def __repr__(self):
        return self.name


@dataclass(frozen=True, order=True)
class UnitValue:
    def __repr__(self):
        return "unit"


UNIT = UnitValue()


def sort_of_value(value, enums: Mapping[str, Sort] = None) -> Sort:
    if isinstance(value, bool):
        return BOOL
    if isinstance(value, int):
        return NAT
    if isinstance(value, UnitValue):
        return UNIT_SORT
    if isinstance(value, EnumValue):
        if enums and value.sort in enums:
            return enums[value.sort]
        raise ValueError(f"unknown enumeration {value.sort!r}")
    raise TypeError(f"not a value: {value!r}")


def format_value(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, EnumValue):
        return value.name
    return str(value) if not isinstance(value, UnitValue) else "unit"


def check_value(value, sort: Sort) -> bool:
    """True iff *value* inhabits *sort*."""
    if sort.kind == BOOL_KIND:
        return isinstance(value, bool)
    if sort.kind == NAT_KIND:
        return type(value) is int and value >= 0
    if sort.kind == UNIT_KIND:
        return isinstance(value, UnitValue)
    return (
        isinstance(value, EnumValue)
        and value.sort == sort.name
        and 0 <= value.index < len(sort.constructors)
    )


# ---------------------------------------------------------------------------
# Expressions

class Expr:
    """Base class of data expressions.  Subclasses are frozen dataclasses."""

    __slots__ = ()

    def evaluate(self, env):
        raise NotImplementedError

    def free_vars(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Lit(Expr):
    value: object
    sort: Sort
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)

    def evaluate(self, env):
        return self.value

    def free_vars(self):
        return frozenset()


@dataclass(frozen=True)
class Var(Expr):
    name: str
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)

    def evaluate(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise UnboundVariable(self.name, self.loc) from None

    def free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True)
class Not(Expr):
    arg: Expr
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)

    def evaluate(self, env):
        v = self.arg.evaluate(env)
        if type(v) is not bool:
            raise SortMismatch(self, "negation of a non-boolean")
        return not v

    def free_vars(self):
        return self.arg.free_vars()


def _bool_args(node, a, b):
    if type(a) is not bool or type(b) is not bool:
        raise SortMismatch(node, f"operator {node.op!r} expects Bool operands")


def _nat_args(node, a, b):
    if type(a) is not int or type(b) is not int:
        raise SortMismatch(node, f"operator {node.op!r} expects Nat operands")


def _and(node, env):
    a = node.lhs.evaluate(env)
    if a is False:
        return False
    b = node.rhs.evaluate(env)
    _bool_args(node, a, b)
    return b


def _or(node, env):
    a = node.lhs.evaluate(env)
    if a is True:
        return True
    b = node.rhs.evaluate(env)
    _bool_args(node, a, b)
    return b


def _implies(node, env):
    a = node.lhs.evaluate(env)
    if a is False:
        return True
    b = node.rhs.evaluate(env)
    _bool_args(node, a, b)
    return b


def _strict(fn, check):
    def run(node, env):
        a = node.lhs.evaluate(env)
        b = node.rhs.evaluate(env)
        if check is not None:
            check(node, a, b)
        return fn(a, b)

    return run


def _same_sort(node, a, b):
    if type(a) is not type(b) or (
        isinstance(a, EnumValue) and a.sort != b.sort
    ):
        raise SortMismatch(node, f"operator {node.op!r} compares different sorts")


_BINARY = {
    "&&": _and,
    "||": _or,
    "=>": _implies,
    "==": _strict(lambda a, b: a == b, _same_sort),
    "!=": _strict(lambda a, b: a != b, _same_sort),
    "<": _strict(lambda a, b: a < b, _nat_args),
    "<=": _strict(lambda a, b: a <= b, _nat_args),
    ">": _strict(lambda a, b: a > b, _nat_args),
    ">=": _strict(lambda a, b: a >= b, _nat_args),
    "+": _strict(lambda a, b: a + b, _nat_args),
    "-": _strict(lambda a, b: a - b if a > b else 0, _nat_args),
}

BOOLEAN_OPS = frozenset(("&&", "||", "=>"))
COMPARISON_OPS = frozenset(("<", "<=", ">", ">="))
EQUALITY_OPS = frozenset(("==", "!="))
ARITHMETIC_OPS = frozenset(("+", "-"))


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.op not in _BINARY:
            raise ValueError(f"unknown operator {self.op!r}")

    def evaluate(self, env):
        return _BINARY[self.op](self, env)

    def free_vars(self):
        return self.lhs.free_vars() | self.rhs.free_vars()


@dataclass(frozen=True)
class Ite(Expr):
    cond: Expr
    then: Expr
    other: Expr
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)

    def evaluate(self, env):
        c = self.cond.evaluate(env)
        if type(c) is not bool:
            raise SortMismatch(self, "if-condition is not boolean")
        return self.then.evaluate(env) if c else self.other.evaluate(env)

    def free_vars(self):
        return self.cond.free_vars() | self.then.free_vars() | self.other.free_vars()


TRUE = Lit(True, BOOL)
FALSE = Lit(False, BOOL)


def nat(n: int) -> Lit:
    return Lit(n, NAT)


def evaluate(expr: Expr, env: Mapping[str, object]):
    """Evaluate *expr* under *env* (a mapping from variable name to value)."""
    return expr.evaluate(env)


def free_vars(expr: Expr) -> frozenset:
    return expr.free_vars()


def conj(*parts: Expr) -> Expr:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    parts = [p for p in parts if p != TRUE]
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = BinOp("&&", p, out)
    return out


def conjuncts(expr: Expr) -> list:
    """Top-level conjuncts of *expr*, dropping literal ``true``."""
    if isinstance(expr, BinOp) and expr.op == "&&":
        return conjuncts(expr.lhs) + conjuncts(expr.rhs)
    if expr == TRUE:
        return []
    return [expr]


def substitute(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Simultaneous syntactic substitution of variables by expressions."""
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, Lit):
        return expr
    if isinstance(expr, Not):
        return Not(substitute(expr.arg, mapping), expr.loc)
    if isinstance(expr, BinOp):
        return BinOp(expr.op, substitute(expr.lhs, mapping), substitute(expr.rhs, mapping), expr.loc)
    if isinstance(expr, Ite):
        return Ite(
            substitute(expr.cond, mapping),
            substitute(expr.then, mapping),
            substitute(expr.other, mapping),
            expr.loc,
        )
    raise TypeError(f"not an expression: {expr!r}")


def infer_sort(expr: Expr, tenv: Mapping[str, Sort]) -> Sort:
    """Sort of *expr* under the typing environment *tenv*.

    Raises UnboundVariable or SortMismatch on ill-typed input.
    """
    if isinstance(expr, Lit):
        return expr.sort
    if isinstance(expr, Var):
        try:
            return tenv[expr.name]
        except KeyError:
            raise UnboundVariable(expr.name, expr.loc) from None
    if isinstance(expr, Not):
        if infer_sort(expr.arg, tenv) != BOOL:
            raise SortMismatch(expr, "'!' expects a Bool operand")
        return BOOL
    if isinstance(expr, BinOp):
        left = infer_sort(expr.lhs, tenv)
        right = infer_sort(expr.rhs, tenv)
        if expr.op in BOOLEAN_OPS:
            if left != BOOL or right != BOOL:
                raise SortMismatch(expr, f"{expr.op!r} expects Bool operands, got {left} and {right}")
            return BOOL
        if expr.op in EQUALITY_OPS:
            if left != right:
                raise SortMismatch(expr, f"{expr.op!r} compares {left} with {right}")
            return BOOL
        if left != NAT or right != NAT:
            raise SortMismatch(expr, f"{expr.op!r} expects Nat operands, got {left} and {right}")
        return BOOL if expr.op in COMPARISON_OPS else NAT
    if isinstance(expr, Ite):
        if infer_sort(expr.cond, tenv) != BOOL:
            raise SortMismatch(expr, "if-condition is not Bool")
        a = infer_sort(expr.then, tenv)
        b = infer_sort(expr.other, tenv)
        if a != b:
            raise SortMismatch(expr, f"if-branches have sorts {a} and {b}")
        return a
    raise TypeError(f"not an expression: {expr!r}")


def enumerate_sort(sort: Sort, nat_bound: int = 0) -> list:
    """All values of *sort*, with Nat cut off at *nat_bound* (inclusive)."""
    if nat_bound < 0:
        raise ValueError("nat_bound must be non-negative")
    if sort.kind == BOOL_KIND:
        return [False, True]
    if sort.kind == NAT_KIND:
        return list(range(nat_bound + 1))
    if sort.kind == UNIT_KIND:
        return [UNIT]
    return [EnumValue(sort.name, i, c) for i, c in enumerate(sort.constructors)]


def enumerate_vectors(sorts, nat_bound: int):
    """Cartesian product of bounded domains, first position outermost."""
    return itertools.product(*(enumerate_sort(s, nat_bound) for s in sorts))
