"""Composition of LTSs under communication, allow, hide and parallel operators.

A context is a small operator tree whose leaves name component LTSs.  The
composed LTS is generated on the fly from the tuple of initial states, so
states pruned by an allow operator are never materialised.  Only labels are
manipulated here; no data expression is ever evaluated.

Context files use a prefix syntax, for example::

    hide {tag} (allow {{toggle},{count,tag}} (hide {sync#1}
      (comm {sync#1#left|sync#1#right -> sync#1} (par (lts "pv.aut") (lts "pw.aut")))))
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import ParseError, StateLimitExceeded, UnknownComponent
from .explore import ExploreLimits
from .lts import Lts
from .multiaction import CommRule, CommSet, comm_apply, hide_apply, label_multiset, strip_data


@dataclass(frozen=True)
class Leaf:
    name: str


@dataclass(frozen=True)
class Par:
    left: "ContextExpr"
    right: "ContextExpr"


@dataclass(frozen=True)
class Comm:
    comm: CommSet
    child: "ContextExpr"


@dataclass(frozen=True)
class Allow:
    allowed: frozenset
    child: "ContextExpr"


@dataclass(frozen=True)
class Hide:
    labels: frozenset
    child: "ContextExpr"


ContextExpr = Union[Leaf, Par, Comm, Allow, Hide]


def leaves(ctx):
    if isinstance(ctx, Leaf):
        return [ctx.name]
    if isinstance(ctx, Par):
        return leaves(ctx.left) + leaves(ctx.right)
    return leaves(ctx.child)


def _machine(ctx, components):
    """Return ``(initial, successors)`` for the operator tree *ctx*."""
    if isinstance(ctx, Leaf):
        try:
            lts = components[ctx.name]
        except KeyError:
            raise UnknownComponent(f"no component named {ctx.name!r}") from None
        adj = lts.successors()
        return lts.initial, adj.__getitem__
    if isinstance(ctx, Par):
        il, sl = _machine(ctx.left, components)
        ir, sr = _machine(ctx.right, components)

        def par(state):
            p, q = state
            left, right = sl(p), sr(q)
            out = [(a + b, (p2, q2)) for a, p2 in left for b, q2 in right]
            out.extend((a, (p2, q)) for a, p2 in left)
            out.extend((b, (p, q2)) for b, q2 in right)
            return out

        return (il, ir), par

    init, sub = _machine(ctx.child, components)
    cache = {}
    if isinstance(ctx, Comm):
        comm = ctx.comm

        def relabel(lbl):
            r = cache.get(lbl)
            if r is None:
                r = cache[lbl] = comm_apply(comm, lbl)
            return r

        return init, lambda s: [(relabel(a), t) for a, t in sub(s)]
    if isinstance(ctx, Hide):
        hidden = ctx.labels

        def hide(lbl):
            r = cache.get(lbl)
            if r is None:
                r = cache[lbl] = hide_apply(hidden, lbl)
            return r

        return init, lambda s: [(hide(a), t) for a, t in sub(s)]
    if isinstance(ctx, Allow):
        allowed = ctx.allowed

        def ok(lbl):
            r = cache.get(lbl)
            if r is None:
                r = cache[lbl] = strip_data(lbl) in allowed
            return r

        return init, lambda s: [(a, t) for a, t in sub(s) if ok(a)]
    raise TypeError(f"not a context expression: {ctx!r}")


def compose(ctx: ContextExpr, components: Mapping[str, Lts], limits: ExploreLimits = ExploreLimits()) -> Lts:
    """Reachable LTS of *ctx* over *components*, numbered in BFS order."""
    init, succ = _machine(ctx, components)
    index = {init: 0}
    states = [init]
    transitions = []
    seen = set()
    queue = deque([init])
    while queue:
        state = queue.popleft()
        src = index[state]
        for label, nxt in succ(state):
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
    return Lts(states, 0, transitions)


# ---------------------------------------------------------------------------
# .ctx files

_CTX_TOKEN = re.compile(r'\s*(?:(?P<str>"[^"]*")|(?P<arrow>->)|(?P<name>[A-Za-z_][A-Za-z0-9_#\']*)|(?P<op>[{}(),|]))')


def _ctx_tokens(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _CTX_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(1, pos + 1, "context token", f"unexpected {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("eof", "", len(text) + 1))
    return out


class _CtxParser:
    def __init__(self, text):
        self.toks = _ctx_tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, text=None, kind=None):
        k, v, col = self.toks[self.i]
        if (text is not None and v != text) or (kind is not None and k != kind):
            raise ParseError(1, col, repr(text) if text else kind, f"found {v!r}")
        self.i += 1
        return v

    def names(self):
        self.take("{")
        out = []
        if self.peek()[1] != "}":
            out.append(self.take(kind="name"))
            while self.peek()[1] == ",":
                self.take(",")
                out.append(self.take(kind="name"))
        self.take("}")
        return out

    def wrapped(self):
        self.take("(")
        e = self.ctx()
        self.take(")")
        return e

    def ctx(self):
        if self.peek()[1] == "(":
            return self.wrapped()
        word = self.take(kind="name")
        if word == "lts":
            return Leaf(self.take(kind="str")[1:-1])
        if word == "par":
            return Par(self.wrapped(), self.wrapped())
        if word == "hide":
            labels = frozenset(self.names())
            return Hide(labels, self.wrapped())
        if word == "allow":
            self.take("{")
            sets = []
            if self.peek()[1] != "}":
                sets.append(self.names())
                while self.peek()[1] == ",":
                    self.take(",")
                    sets.append(self.names())
            self.take("}")
            return Allow(frozenset(label_multiset(s) for s in sets), self.wrapped())
        if word == "comm":
            self.take("{")
            rules = []
            while self.peek()[1] != "}":
                lhs = [self.take(kind="name")]
                while self.peek()[1] == "|":
                    self.take("|")
                    lhs.append(self.take(kind="name"))
                self.take(kind="arrow")
                rules.append(CommRule(tuple(lhs), self.take(kind="name")))
                if self.peek()[1] == ",":
                    self.take(",")
            self.take("}")
            return Comm(CommSet(rules), self.wrapped())
        raise ParseError(1, self.toks[self.i - 1][2], "lts, par, hide, allow or comm", f"found {word!r}")


def parse_context(text: str) -> ContextExpr:
    p = _CtxParser(text)
    e = p.ctx()
    p.take(kind="eof")
    return e


def render_context(ctx: ContextExpr, files: Mapping[str, str] = None) -> str:
    """Render *ctx*; *files* maps leaf names to the ``.aut`` paths to print."""
    files = files or {}
    if isinstance(ctx, Leaf):
        return f'(lts "{files.get(ctx.name, ctx.name)}")'
    if isinstance(ctx, Par):
        return f"(par {render_context(ctx.left, files)} {render_context(ctx.right, files)})"
    inner = render_context(ctx.child, files)
    if isinstance(ctx, Hide):
        return f"(hide {{{','.join(sorted(ctx.labels))}}} {inner})"
    if isinstance(ctx, Allow):
        sets = ",".join("{" + ",".join(m) + "}" for m in sorted(ctx.allowed))
        return f"(allow {{{sets}}} {inner})"
    rules = ",".join(str(r) for r in sorted(ctx.comm, key=lambda r: (r.lhs, r.rhs)))
    return f"(comm {{{rules}}} {inner})"


def format_context(ctx: ContextExpr, files: Mapping[str, str] = None) -> str:
    """Top-level rendering without the outermost parentheses."""
    text = render_context(ctx, files)
    return text[1:-1] if text.startswith("(") else text
