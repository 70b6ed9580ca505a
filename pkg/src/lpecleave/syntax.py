"""Reader and writer for ``.alp`` specification files.

A file declares enumeration sorts, actions, exactly one linear process, its
initial state and optionally a state invariant::

    sort Mode = {idle, busy};
    act count, toggle: Bool;
    proc Machine(n: Nat, s: Bool) =
        (n > 0) -> count . Machine(n - 1, s)
      + (n == 0) -> toggle(s) . Machine(3, !s);
    init Machine(0, false);
    inv n <= 3;

Multi-argument actions are declared with ``*`` between sorts
(``act a: Nat * Bool;``) and a process without summands is written
``delta``.  ``%`` starts a comment running to end of line.
Identifiers containing ``#`` are reserved for labels generated by the cleave
and are rejected unless ``allow_generated`` is set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from . import data
from .data import BOOL, NAT, UNIT, UNIT_SORT, BinOp, Expr, Ite, Lit, Not, Sort, Var
from .errors import ParseError, SpecError
from .lpe import RESERVED_CHAR, ActionDecl, ActionTerm, Lpe, MultiAction, Summand, well_formed

KEYWORDS = frozenset(("sort", "act", "proc", "init", "inv", "sum", "tau", "delta", "true", "false", "if", "unit"))
BUILTIN_SORTS = {"Bool": BOOL, "Nat": NAT, "Unit": UNIT_SORT}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_'#]*)
  | (?P<op>->|=>|==|!=|<=|>=|&&|\|\||[-+*<>!|.,;:=(){}])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "a token", f"unexpected {text[pos]!r}")
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class SpecFile:
    lpe: Lpe
    init: tuple
    inv: Optional[Expr] = None


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text: str, allow_generated: bool = False):
        self.tokens = tokenize(text)
        self.pos = 0
        self.allow_generated = allow_generated
        self.sorts = dict(BUILTIN_SORTS)
        self.constructors = {}

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, expected, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ParseError(tok.line, tok.col, expected, f"found {found!r}")

    def at(self, *texts):
        t = self.tok
        return t.kind in ("op", "name") and t.text in texts

    def accept(self, text):
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.at(text):
            raise self.error(repr(text))
        tok = self.tok
        self.pos += 1
        return tok

    def name(self, what="identifier"):
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            raise self.error(what)
        if RESERVED_CHAR in t.text and not self.allow_generated:
            raise ParseError(t.line, t.col, what, f"{t.text!r} uses the reserved character '#'")
        self.pos += 1
        return t.text

    # -- sorts -----------------------------------------------------------

    def sortref(self) -> Sort:
        t = self.tok
        name = self.name("sort name")
        try:
            return self.sorts[name]
        except KeyError:
            raise ParseError(t.line, t.col, "declared sort", f"unknown sort {name!r}") from None

    # -- expressions ------------------------------------------------------

    def expr(self) -> Expr:
        return self.implies()

    def implies(self):
        left = self.disj()
        t = self.tok
        if self.accept("=>"):
            return BinOp("=>", left, self.implies(), (t.line, t.col))
        return left

    def _left_assoc(self, ops, sub):
        left = sub()
        while self.tok.kind == "op" and self.tok.text in ops:
            t = self.tok
            self.pos += 1
            left = BinOp(t.text, left, sub(), (t.line, t.col))
        return left

    def disj(self):
        return self._left_assoc(("||",), self.conj)

    def conj(self):
        return self._left_assoc(("&&",), self.equality)

    def equality(self):
        return self._left_assoc(("==", "!="), self.comparison)

    def comparison(self):
        return self._left_assoc(("<", "<=", ">", ">="), self.additive)

    def additive(self):
        return self._left_assoc(("+", "-"), self.unary)

    def unary(self):
        t = self.tok
        if self.accept("!"):
            return Not(self.unary(), (t.line, t.col))
        return self.atom()

    def atom(self):
        t = self.tok
        loc = (t.line, t.col)
        if t.kind == "num":
            self.pos += 1
            return Lit(int(t.text), NAT, loc)
        if self.accept("true"):
            return Lit(True, BOOL, loc)
        if self.accept("false"):
            return Lit(False, BOOL, loc)
        if self.accept("unit"):
            return Lit(UNIT, UNIT_SORT, loc)
        if self.accept("if"):
            self.expect("(")
            c = self.expr()
            self.expect(",")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Ite(c, a, b, loc)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name" and t.text not in KEYWORDS:
            return Var(self.name(), loc)
        raise self.error("expression")

    def exprlist(self, closing=")"):
        items = []
        if self.at(closing):
            return items
        items.append(self.expr())
        while self.accept(","):
            items.append(self.expr())
        return items

    # -- declarations ------------------------------------------------------

    def bindings(self):
        out = [self.binding()]
        while self.accept(","):
            out.append(self.binding())
        return out

    def binding(self):
        name = self.name("variable name")
        self.expect(":")
        return name, self.sortref()

    def multiaction(self) -> MultiAction:
        if self.accept("tau"):
            acts = []
        else:
            acts = [self.action_term()]
        while self.accept("|"):
            if self.accept("tau"):
                continue
            acts.append(self.action_term())
        return MultiAction(tuple(acts))

    def action_term(self) -> ActionTerm:
        label = self.name("action label")
        args = ()
        if self.accept("("):
            args = tuple(self.exprlist())
            if not args:
                raise self.error("action argument")
            self.expect(")")
        return ActionTerm(label, args)

    def summand(self, index, proc_name):
        sum_vars = []
        if self.accept("sum"):
            sum_vars = self.bindings()
            self.expect(".")
        save = self.pos
        cond = data.TRUE
        try:
            if self.at("tau"):
                raise _Backtrack
            cand = self.expr()
            if not self.at("->"):
                raise _Backtrack
            self.expect("->")
            cond = cand
        except (ParseError, _Backtrack):
            self.pos = save
        action = self.multiaction()
        self.expect(".")
        t = self.tok
        target = self.name("process name")
        if target != proc_name:
            raise ParseError(t.line, t.col, f"recursion on {proc_name!r}", f"found {target!r}")
        self.expect("(")
        updates = self.exprlist()
        self.expect(")")
        return Summand(index, tuple(sum_vars), cond, action, tuple(updates))

    def spec(self) -> SpecFile:
        actions = []
        proc = None
        action_names = {}
        while not self.at("init"):
            t = self.tok
            if self.accept("sort"):
                name = self.name("sort name")
                if name in self.sorts:
                    raise ParseError(t.line, t.col, "fresh sort name", f"sort {name!r} redeclared")
                self.expect("=")
                self.expect("{")
                ctors = [self.name("constructor")]
                while self.accept(","):
                    ctors.append(self.name("constructor"))
                self.expect("}")
                self.expect(";")
                for c in ctors:
                    if c in self.constructors:
                        raise ParseError(t.line, t.col, "fresh constructor", f"constructor {c!r} redeclared")
                if len(set(ctors)) != len(ctors):
                    raise ParseError(t.line, t.col, "distinct constructors", f"sort {name!r} repeats a constructor")
                sort = data.enum_sort(name, ctors)
                self.sorts[name] = sort
                for c in ctors:
                    self.constructors[c] = sort
            elif self.accept("act"):
                while True:
                    lt = self.tok
                    label = self.name("action label")
                    sorts = ()
                    if self.accept(":"):
                        sorts = [self.sortref()]
                        while self.accept("*"):
                            sorts.append(self.sortref())
                        sorts = tuple(sorts)
                    if label in action_names:
                        raise ParseError(lt.line, lt.col, "fresh action label", f"action {label!r} redeclared")
                    action_names[label] = sorts
                    actions.append(ActionDecl(label, sorts))
                    if not self.accept(","):
                        break
                self.expect(";")
            elif self.accept("proc"):
                if proc is not None:
                    raise ParseError(t.line, t.col, "a single process", "second proc declaration")
                name = self.name("process name")
                self.expect("(")
                params = [] if self.at(")") else self.bindings()
                self.expect(")")
                self.expect("=")
                if self.accept("delta"):
                    summands = []
                else:
                    summands = [self.summand(0, name)]
                    while self.accept("+"):
                        summands.append(self.summand(len(summands), name))
                self.expect(";")
                proc = (name, params, summands, t)
            elif self.tok.kind == "eof":
                raise self.error("'init'")
            else:
                raise self.error("'sort', 'act', 'proc' or 'init'")
        init_tok = self.expect("init")
        if proc is None:
            raise ParseError(init_tok.line, init_tok.col, "a proc declaration before init")
        t = self.tok
        name = self.name("process name")
        if name != proc[0]:
            raise ParseError(t.line, t.col, f"process {proc[0]!r}", f"found {name!r}")
        self.expect("(")
        init_exprs = self.exprlist()
        self.expect(")")
        self.expect(";")
        inv = None
        if self.accept("inv"):
            inv = self.expr()
            self.expect(";")
        if self.tok.kind != "eof":
            raise self.error("end of input")

        pname, params, summands, _ = proc
        lpe = Lpe(pname, tuple(params), (), tuple(actions))
        lpe = self._resolve_lpe(lpe, summands)
        diags = well_formed(lpe)
        if diags:
            raise SpecError(diags)

        init_exprs = [self._resolve(e, set()) for e in init_exprs]
        init = self._eval_init(lpe, init_exprs, init_tok)
        if inv is not None:
            inv = self._resolve(inv, set(lpe.param_names))
            self._check_inv(lpe, inv)
        return SpecFile(lpe, init, inv)

    # -- name resolution ---------------------------------------------------

    def _resolve(self, expr, bound):
        """Turn constructor references into literals; variables win over nothing."""
        if isinstance(expr, Var):
            if expr.name in self.constructors:
                if expr.name in bound:
                    raise ParseError(*expr.loc, "unambiguous name", f"{expr.name!r} is both a variable and a constructor")
                return Lit(self.constructors[expr.name].value(expr.name), self.constructors[expr.name], expr.loc)
            return expr
        if isinstance(expr, Lit):
            return expr
        if isinstance(expr, Not):
            return Not(self._resolve(expr.arg, bound), expr.loc)
        if isinstance(expr, BinOp):
            return BinOp(expr.op, self._resolve(expr.lhs, bound), self._resolve(expr.rhs, bound), expr.loc)
        return Ite(
            self._resolve(expr.cond, bound),
            self._resolve(expr.then, bound),
            self._resolve(expr.other, bound),
            expr.loc,
        )

    def _resolve_lpe(self, lpe, summands):
        out = []
        for sm in summands:
            bound = set(lpe.param_names) | set(sm.sum_names)
            r = lambda e: self._resolve(e, bound)  # noqa: E731
            action = MultiAction(tuple(ActionTerm(a.label, tuple(r(x) for x in a.args)) for a in sm.action.actions))
            out.append(Summand(sm.index, sm.sum_vars, r(sm.condition), action, tuple(r(u) for u in sm.updates)))
        return Lpe(lpe.name, lpe.params, tuple(out), lpe.actions)

    def _eval_init(self, lpe, exprs, tok):
        if len(exprs) != len(lpe.params):
            raise ParseError(tok.line, tok.col, f"{len(lpe.params)} initial value(s)", f"got {len(exprs)}")
        values = []
        for e, (pname, psort) in zip(exprs, lpe.params):
            loc = e.loc or (tok.line, tok.col)
            if e.free_vars():
                raise ParseError(*loc, "closed initial value", f"free variables {sorted(e.free_vars())}")
            try:
                sort = data.infer_sort(e, {})
            except Exception as exc:
                raise ParseError(*loc, "well-typed initial value", str(exc)) from None
            if sort != psort:
                raise ParseError(*loc, f"initial value of sort {psort}", f"got {sort}")
            values.append(data.evaluate(e, {}))
        return tuple(values)

    def _check_inv(self, lpe, inv):
        extra = inv.free_vars() - set(lpe.param_names)
        loc = inv.loc or (0, 0)
        if extra:
            raise ParseError(*loc, "invariant over process parameters", f"free variables {sorted(extra)}")
        try:
            sort = data.infer_sort(inv, dict(lpe.params))
        except Exception as exc:
            raise ParseError(*loc, "well-typed invariant", str(exc)) from None
        if sort != BOOL:
            raise ParseError(*loc, "boolean invariant", f"got sort {sort}")


def parse_spec(text: str, allow_generated: bool = False) -> SpecFile:
    """Parse an ``.alp`` document into a process, initial state and invariant."""
    return Parser(text, allow_generated).spec()


def parse_expr(text: str, lpe: Optional[Lpe] = None, extra_vars=()) -> Expr:
    """Parse a standalone expression (e.g. a ``--invariant`` flag).

    Constructor names are resolved against the enumerations of *lpe*.
    """
    p = Parser(text, allow_generated=True)
    if lpe is not None:
        for s in lpe.sorts():
            p.sorts[s.name] = s
            for c in s.constructors:
                p.constructors[c] = s
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error("end of expression")
    bound = set(extra_vars) | (set(lpe.param_names) if lpe is not None else set())
    return p._resolve(e, bound)


# ---------------------------------------------------------------------------
# Rendering

_PREC = {"=>": 1, "||": 2, "&&": 3, "==": 4, "!=": 4, "<": 5, "<=": 5, ">": 5, ">=": 5, "+": 6, "-": 6}


def render_expr(e: Expr, prec: int = 0) -> str:
    if isinstance(e, Lit):
        return data.format_value(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Not):
        return "!" + render_expr(e.arg, 7)
    if isinstance(e, Ite):
        return f"if({render_expr(e.cond)}, {render_expr(e.then)}, {render_expr(e.other)})"
    p = _PREC[e.op]
    if e.op == "=>":
        text = f"{render_expr(e.lhs, p + 1)} => {render_expr(e.rhs, p)}"
    else:
        text = f"{render_expr(e.lhs, p)} {e.op} {render_expr(e.rhs, p + 1)}"
    return f"({text})" if p < prec else text


def _render_action(a: ActionTerm) -> str:
    if not a.args:
        return a.label
    return f"{a.label}({', '.join(render_expr(x) for x in a.args)})"


def render_multiaction(m: MultiAction) -> str:
    if m.is_tau:
        return "tau"
    return "|".join(_render_action(a) for a in m.actions)


def render_summand(lpe: Lpe, sm: Summand) -> str:
    head = ""
    if sm.sum_vars:
        head = "sum " + ", ".join(f"{n}: {s}" for n, s in sm.sum_vars) + " . "
    updates = ", ".join(render_expr(u) for u in sm.updates)
    return f"{head}{render_expr(sm.condition)} -> {render_multiaction(sm.action)} . {lpe.name}({updates})"


def render_lpe(lpe: Lpe, init, inv: Optional[Expr] = None) -> str:
    """Render *lpe* with initial state *init* as ``.alp`` text."""
    lines = []
    for s in lpe.sorts():
        lines.append(f"sort {s.name} = {{{', '.join(s.constructors)}}};")
    for a in lpe.actions:
        if a.sorts:
            lines.append(f"act {a.label}: {' * '.join(str(s) for s in a.sorts)};")
        else:
            lines.append(f"act {a.label};")
    params = ", ".join(f"{n}: {s}" for n, s in lpe.params)
    lines.append(f"proc {lpe.name}({params}) =")
    for k, sm in enumerate(lpe.summands):
        lines.append(("    " if k == 0 else "  + ") + render_summand(lpe, sm))
    if not lpe.summands:
        lines.append("    delta")
    lines[-1] += ";"
    lines.append(f"init {lpe.name}({', '.join(data.format_value(v) for v in init)});")
    if inv is not None:
        lines.append(f"inv {render_expr(inv)};")
    return "\n".join(lines) + "\n"
