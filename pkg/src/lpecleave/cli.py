"""Command-line interface.

Exit codes: 0 on success, 1 for usage and parse errors, 2 when state space
generation fails and 3 when a validation (requirement check, invariant or
bisimilarity) fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bisim import bisimilar, minimise
from .cleave import (
    MODES,
    REDUCED,
    Partition,
    build_context,
    check_cleave_semantic,
    check_cleave_syntactic,
    induce_component,
    initial_states,
    plan_cleave,
    report_passes,
    report_to_json,
)
from .compose import compose, format_context, leaves, parse_context
from .errors import LpeError
from .explore import DEFAULT_MAX_STATES, ExploreLimits, explore
from .invariant import GLOBAL, REACHABLE, check_invariant, restrict
from .lts import read_aut, write_aut, write_states
from .syntax import parse_expr, parse_spec, render_lpe

EXIT_OK = 0
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_spec(path, allow_generated=False):
    return parse_spec(Path(path).read_text(encoding="utf-8"), allow_generated=allow_generated)


def _names(values):
    out = []
    for v in values or ():
        out.extend(x for x in v.split(",") if x)
    return out


def _limits(args):
    return ExploreLimits(args.max_states, args.nat_bound)


def _invariant(args, spec):
    if getattr(args, "no_invariant", False):
        return None
    if args.invariant:
        return parse_expr(args.invariant, spec.lpe)
    return spec.inv


def _prepare_cleave(args, spec):
    """Plan the cleave for the CLI flags; returns (lpe, plan, invariant)."""
    lpe = spec.lpe
    part = Partition.from_names(lpe, _names(args.left), _names(args.right))
    invariant = _invariant(args, spec)
    plan = plan_cleave(lpe, part, args.mode)
    if invariant is not None and args.restrict_before:
        independent = plan.left.independent | plan.right.independent
        lpe = restrict(lpe, invariant, independent, args.deadlock_free)
        plan = plan_cleave(lpe, part, args.mode)
    return lpe, plan, invariant


def _check(lpe, plan, kind, nat_bound):
    if kind == "semantic":
        return check_cleave_semantic(lpe, plan, nat_bound)
    return check_cleave_syntactic(lpe, plan)


def cmd_explore(args):
    spec = _read_spec(args.spec, args.allow_generated)
    lts = explore(spec.lpe, spec.init, _limits(args))
    if args.out:
        out = Path(args.out)
        out.write_text(write_aut(lts), encoding="utf-8")
        out.with_suffix(".states").write_text(write_states(lts), encoding="utf-8")
    print(f"states={lts.num_states} transitions={lts.num_transitions}")
    return EXIT_OK


def cmd_cleave(args):
    spec = _read_spec(args.spec)
    lpe, plan, invariant = _prepare_cleave(args, spec)
    left = induce_component(lpe, plan.left, invariant, args.deadlock_free)
    right = induce_component(lpe, plan.right, invariant, args.deadlock_free)
    init_v, init_w = initial_states(plan, spec.init)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "left.alp").write_text(render_lpe(left, init_v), encoding="utf-8")
    (out / "right.alp").write_text(render_lpe(right, init_w), encoding="utf-8")
    ctx = build_context(lpe, plan)
    (out / "composition.ctx").write_text(
        format_context(ctx, {"left": "left.aut", "right": "right.aut"}) + "\n", encoding="utf-8"
    )
    report = _check(lpe, plan, args.check, args.check_bound)
    (out / "report.json").write_text(json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    ok = report_passes(report)
    for t in (plan.left, plan.right):
        print(f"{t.side}: summands={sorted(t.summands)} independent={sorted(t.independent)}")
    print(f"{args.check} check: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_compose(args):
    ctx_path = Path(args.ctx)
    ctx = parse_context(ctx_path.read_text(encoding="utf-8"))
    components = {}
    for name in leaves(ctx):
        path = Path(name)
        if not path.is_absolute():
            path = ctx_path.parent / path
        components[name] = read_aut(path.read_text(encoding="utf-8"))
    lts = compose(ctx, components, ExploreLimits(args.max_states))
    if args.out:
        Path(args.out).write_text(write_aut(lts), encoding="utf-8")
    print(f"states={lts.num_states} transitions={lts.num_transitions}")
    return EXIT_OK


def cmd_minimise(args):
    lts = read_aut(Path(args.aut).read_text(encoding="utf-8"))
    quotient, _ = minimise(lts)
    if args.out:
        Path(args.out).write_text(write_aut(quotient), encoding="utf-8")
    print(f"states={quotient.num_states} transitions={quotient.num_transitions}")
    return EXIT_OK


def cmd_compare(args):
    a = read_aut(Path(args.first).read_text(encoding="utf-8"))
    b = read_aut(Path(args.second).read_text(encoding="utf-8"))
    verdict = bisimilar(a, b)
    if verdict:
        print("BISIMILAR")
        return EXIT_OK
    print(f"NOT BISIMILAR (distinguished after {verdict.depth} refinement rounds)")
    return EXIT_VALIDATION


def cmd_invariant(args):
    spec = _read_spec(args.spec)
    invariant = _invariant(args, spec)
    if invariant is None:
        raise LpeError("no invariant given: use --invariant or an inv clause")
    verdict = check_invariant(spec.lpe, invariant, args.check_bound, args.mode, spec.init, limits=_limits(args))
    at_init = invariant.evaluate(dict(zip(spec.lpe.param_names, spec.init))) is True
    print(verdict.describe(spec.lpe))
    if not at_init:
        print("invariant does not hold in the initial state")
    return EXIT_OK if verdict and at_init else EXIT_VALIDATION


def _metrics(lts):
    quotient, _ = minimise(lts)
    return quotient, (lts.num_states, lts.num_transitions, quotient.num_states, quotient.num_transitions)


def cmd_pipeline(args):
    spec = _read_spec(args.spec)
    limits = _limits(args)
    original = explore(spec.lpe, spec.init, limits)
    lpe, plan, invariant = _prepare_cleave(args, spec)
    if args.components:
        left_spec = _read_spec(args.components[0], allow_generated=True)
        right_spec = _read_spec(args.components[1], allow_generated=True)
        left, init_v = left_spec.lpe, left_spec.init
        right, init_w = right_spec.lpe, right_spec.init
    else:
        left = induce_component(lpe, plan.left, invariant, args.deadlock_free)
        right = induce_component(lpe, plan.right, invariant, args.deadlock_free)
        init_v, init_w = initial_states(plan, spec.init)
    lts_v = explore(left, init_v, limits)
    lts_w = explore(right, init_w, limits)
    _, m_orig = _metrics(original)
    min_v, m_v = _metrics(lts_v)
    min_w, m_w = _metrics(lts_w)
    composed = compose(build_context(lpe, plan), {"left": min_v, "right": min_w}, limits)
    _, m_comp = _metrics(composed)
    verdict = bisimilar(original, composed)

    header = ("", "states", "transitions", "min states", "min transitions")
    rows = [("original", *m_orig), ("left", *m_v), ("right", *m_w), ("composition", *m_comp)]
    widths = [max(len(str(r[k])) for r in [header] + rows) for k in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(c).ljust(w) if k == 0 else str(c).rjust(w) for k, (c, w) in enumerate(zip(r, widths))).rstrip())
    print("BISIMILAR" if verdict else "NOT BISIMILAR")
    return EXIT_OK if verdict else EXIT_VALIDATION


def _explore_flags(p):
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument(
        "--nat-bound",
        type=int,
        default=None,
        help="bound for Nat sum variables that the condition leaves unbounded",
    )


def _cleave_flags(p):
    p.add_argument("--left", nargs="*", default=[], metavar="PARAM", help="parameters of the left component")
    p.add_argument("--right", nargs="*", default=[], metavar="PARAM", help="parameters of the right component")
    p.add_argument("--mode", choices=MODES, default=REDUCED)
    p.add_argument("--invariant", help="state invariant used to restrict the shared summands")
    p.add_argument("--no-invariant", action="store_true", help="ignore the inv clause of the specification")
    p.add_argument("--deadlock-free", action="store_true", help="require the invariant of the successor state")
    p.add_argument("--restrict-before", action="store_true", help="also restrict independent summands before cleaving")


def build_parser():
    parser = _Parser(prog="lpecleave", description="Explore, cleave and compare linear process equations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("explore", help="generate the state space of a specification")
    p.add_argument("spec")
    p.add_argument("--out", help="write the LTS here (.aut) plus a .states sidecar")
    p.add_argument("--allow-generated", action="store_true", help="accept generated sync and tag labels")
    _explore_flags(p)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("cleave", help="split a specification into two components")
    p.add_argument("spec")
    _cleave_flags(p)
    p.add_argument("--check", choices=("syntactic", "semantic"), default="syntactic")
    p.add_argument("--check-bound", type=int, default=4, help="Nat bound for the semantic check")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_cleave)

    p = sub.add_parser("compose", help="compose component LTSs under a context")
    p.add_argument("ctx")
    p.add_argument("--out")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("minimise", help="minimise an LTS modulo strong bisimilarity")
    p.add_argument("aut")
    p.add_argument("--out")
    p.set_defaults(func=cmd_minimise)

    p = sub.add_parser("compare", help="decide strong bisimilarity of two LTSs")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("invariant", help="check a state invariant")
    p.add_argument("spec")
    p.add_argument("--invariant")
    p.add_argument("--mode", choices=(GLOBAL, REACHABLE), default=GLOBAL)
    p.add_argument("--check-bound", type=int, default=4, help="Nat bound for the global check")
    _explore_flags(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("pipeline", help="explore, cleave, compose and compare in one go")
    p.add_argument("spec")
    _cleave_flags(p)
    p.add_argument("--components", nargs=2, metavar=("LEFT", "RIGHT"), help="use these component specifications instead")
    _explore_flags(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LpeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
