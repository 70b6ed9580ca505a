"""Cleave linear process equations into synchronising components."""

from pathlib import Path

from .bisim import bisimilar, minimise
from .cleave import (
    Cleave,
    CleavePlan,
    Partition,
    SeparationTuple,
    build_context,
    check_cleave_semantic,
    check_cleave_syntactic,
    cleave,
    induce_component,
    plan_cleave,
)
from .compose import compose, parse_context
from .explore import ExploreLimits, explore
from .invariant import check_invariant, restrict
from .lpe import Lpe, project, well_formed
from .lts import Lts, read_aut, write_aut
from .syntax import parse_expr, parse_spec, render_lpe

__all__ = [
    "corpus_path",
    "Cleave",
    "CleavePlan",
    "ExploreLimits",
    "Lpe",
    "Lts",
    "Partition",
    "SeparationTuple",
    "bisimilar",
    "build_context",
    "check_cleave_semantic",
    "check_cleave_syntactic",
    "check_invariant",
    "cleave",
    "compose",
    "explore",
    "induce_component",
    "minimise",
    "parse_context",
    "parse_expr",
    "parse_spec",
    "plan_cleave",
    "project",
    "read_aut",
    "render_lpe",
    "restrict",
    "well_formed",
    "write_aut",
]


def corpus_path(name: str) -> Path:
    """Path of a bundled example specification, e.g. ``corpus_path("machine.alp")``."""
    return Path(__file__).parent / "corpus" / name
