"""Labelled transition systems and the Aldebaran ``.aut`` format."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .data import UNIT, format_value
from .errors import ParseError
from .multiaction import ActionMultiset


@dataclass
class Lts:
    """A finite LTS whose transition labels are :class:`ActionMultiset` values.

    ``states`` holds one payload per state (a value vector for explored
    processes, nested tuples for compositions, member lists for quotients).
    """

    states: List[object]
    initial: int
    transitions: List[Tuple[int, ActionMultiset, int]] = field(default_factory=list)
    params: Optional[Sequence[str]] = None

    def __post_init__(self):
        if not 0 <= self.initial < len(self.states):
            raise ValueError("initial state out of range")

    @property
    def num_states(self):
        return len(self.states)

    @property
    def num_transitions(self):
        return len(self.transitions)

    @property
    def size(self):
        return self.num_states + self.num_transitions

    def successors(self):
        """Outgoing ``(label, target)`` lists indexed by state."""
        out = [[] for _ in self.states]
        for src, lbl, dst in self.transitions:
            out[src].append((lbl, dst))
        return out

    def validate(self):
        n = len(self.states)
        seen = set()
        for t in self.transitions:
            src, _, dst = t
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"transition {t} has an endpoint out of range")
            if t in seen:
                raise ValueError(f"duplicate transition {t}")
            seen.add(t)

    def labels(self):
        return {lbl for _, lbl, _ in self.transitions}


def write_aut(lts: Lts) -> str:
    """Render as ``.aut`` text; the initial state is renumbered to 0 if needed."""
    init = lts.initial
    renum = lambda s: 0 if s == init else (init if s == 0 else s)  # noqa: E731
    lines = [f"des (0,{lts.num_transitions},{lts.num_states})"]
    for src, lbl, dst in lts.transitions:
        lines.append(f'({renum(src)},"{lbl}",{renum(dst)})')
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_LINE = re.compile(r'\s*\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)\s*$')
_EVENT = re.compile(r"\s*([^()|\s]+)\s*(?:\(([^()]*)\))?\s*$")


def parse_value(text: str):
    text = text.strip()
    if text == "true":
        return True
    if text == "false":
        return False
    if text == "unit":
        return UNIT
    if text.isdigit():
        return int(text)
    return text


def parse_label(text: str) -> ActionMultiset:
    """Parse ``a(1,true)|b`` back into a multiset; enumeration values stay strings."""
    text = text.strip()
    if text == "tau" or text == "":
        return ActionMultiset()
    events = []
    depth, start = 0, 0
    parts = []
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "|" and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    parts.append(text[start:])
    for part in parts:
        m = _EVENT.match(part)
        if m is None:
            raise ValueError(f"malformed action {part!r}")
        args = () if m.group(2) is None else tuple(parse_value(a) for a in m.group(2).split(","))
        events.append((m.group(1), args))
    return ActionMultiset(events)


def read_aut(text: str) -> Lts:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError(1, 1, "des header")
    m = _HEADER.match(lines[0])
    if m is None:
        raise ParseError(1, 1, "des (initial,#transitions,#states)")
    initial, ntrans, nstates = (int(g) for g in m.groups())
    transitions = []
    for k, ln in enumerate(lines[1:], start=2):
        t = _LINE.match(ln)
        if t is None:
            raise ParseError(k, 1, '(src,"label",dst)')
        try:
            label = parse_label(t.group(2))
        except ValueError as exc:
            raise ParseError(k, 1, "action label", str(exc)) from None
        transitions.append((int(t.group(1)), label, int(t.group(3))))
    if len(transitions) != ntrans:
        raise ParseError(1, 1, f"{ntrans} transitions", f"found {len(transitions)}")
    lts = Lts(list(range(nstates)), initial, transitions)
    try:
        lts.validate()
    except ValueError as exc:
        raise ParseError(1, 1, "well-formed transition list", str(exc)) from None
    return lts


def write_states(lts: Lts, params=None) -> str:
    """Sidecar listing the value vector of every state."""
    params = params if params is not None else lts.params
    lines = []
    if params is not None:
        lines.append("# " + " ".join(params))
    for k, payload in enumerate(lts.states):
        if isinstance(payload, tuple):
            body = "(" + ",".join(format_value(v) for v in payload) + ")"
        else:
            body = str(payload)
        lines.append(f"{k} {body}")
    return "\n".join(lines) + "\n"
