"""Random generators for finite LPEs, partitions, invariants and LTSs.

Nat parameters stay within 0..3 from every vector of 0..3: updates are
constants, parameters, bounded sum variables, monus or a wrapping
increment.  Nat sum variables always carry a top-level ``x <= bound``
conjunct so the monolith is finitely branching.  Components may still sum
over Nat parameters of the other side; those guesses are cut off at
``NAT_MAX`` via the explorer's fallback bound, which loses nothing because
real values never exceed it.
"""

from __future__ import annotations

import random

from lpecleave import data
from lpecleave.cleave import Partition
from lpecleave.data import BOOL, NAT, BinOp, Ite, Lit, Not, Var, enum_sort
from lpecleave.explore import ExploreLimits, explore
from lpecleave.lpe import ActionDecl, ActionTerm, Lpe, MultiAction, Summand
from lpecleave.lts import Lts
from lpecleave.multiaction import ActionMultiset

NAT_MAX = 3
LIMITS = ExploreLimits(max_states=20_000, nat_sum_fallback_bound=NAT_MAX)
COLOUR = enum_sort("Colour", ("red", "green", "blue"))


class _Gen:
    def __init__(self, rng: random.Random, enum_sort_):
        self.rng = rng
        self.enum = enum_sort_

    def lit(self, sort):
        if sort == BOOL:
            return Lit(self.rng.random() < 0.5, BOOL)
        if sort == NAT:
            return data.nat(self.rng.randint(0, NAT_MAX))
        ctor = self.rng.choice(sort.constructors)
        return Lit(sort.value(ctor), sort)

    def of_sort(self, sort, scope, depth=2):
        """Random expression of *sort* over the typed variables in *scope*."""
        rng = self.rng
        vars_ = [n for n, s in scope if s == sort]
        if sort == BOOL:
            return self.boolean(scope, depth)
        choices = ["lit"] + ["var"] * (2 if vars_ else 0)
        if depth > 0:
            choices.append("ite")
            if sort == NAT and vars_:
                choices += ["monus", "wrap", "wrap"]
        pick = rng.choice(choices)
        if pick == "lit":
            return self.lit(sort)
        if pick == "var":
            return Var(rng.choice(vars_))
        if pick == "monus":
            return BinOp("-", Var(rng.choice(vars_)), data.nat(rng.randint(1, 2)))
        if pick == "wrap":
            v = Var(rng.choice(vars_))
            return Ite(BinOp("<", v, data.nat(NAT_MAX)), BinOp("+", v, data.nat(1)), data.nat(0))
        return Ite(self.boolean(scope, depth - 1), self.of_sort(sort, scope, depth - 1), self.of_sort(sort, scope, depth - 1))

    def atom(self, scope):
        rng = self.rng
        bools = [n for n, s in scope if s == BOOL]
        nats = [n for n, s in scope if s == NAT]
        enums = [(n, s) for n, s in scope if s.kind == data.ENUM_KIND]
        options = ["lit"]
        if bools:
            options += ["bool"] * 3
        if nats:
            options += ["cmp"] * 3
        if enums:
            options += ["enum"] * 2
        pick = rng.choice(options)
        if pick == "lit":
            return Lit(rng.random() < 0.8, BOOL)
        if pick == "bool":
            v = Var(rng.choice(bools))
            return v if rng.random() < 0.6 else Not(v)
        if pick == "cmp":
            op = rng.choice(["==", "!=", "<", "<=", ">", ">="])
            rhs = Var(rng.choice(nats)) if rng.random() < 0.3 else data.nat(rng.randint(0, NAT_MAX))
            return BinOp(op, Var(rng.choice(nats)), rhs)
        name, sort = rng.choice(enums)
        return BinOp(rng.choice(["==", "!="]), Var(name), self.lit(sort))

    def boolean(self, scope, depth=1):
        if depth <= 0 or self.rng.random() < 0.5:
            return self.atom(scope)
        op = self.rng.choice(["&&", "||", "=>"])
        left = self.boolean(scope, depth - 1)
        right = self.boolean(scope, depth - 1)
        return Not(left) if self.rng.random() < 0.15 else BinOp(op, left, right)


def random_lpe(rng: random.Random, max_params=3, max_summands=4) -> tuple:
    """A well-formed finite LPE together with an initial state."""
    enum = enum_sort("Colour", COLOUR.constructors[: rng.randint(1, 3)])
    g = _Gen(rng, enum)
    sorts = [BOOL, NAT, enum]
    nparams = rng.randint(0, max_params) if rng.random() < 0.05 else rng.randint(1, max_params)
    params = tuple((f"p{k}", rng.choice(sorts)) for k in range(nparams))
    actions = (
        ActionDecl("a", ()),
        ActionDecl("b", (BOOL,)),
        ActionDecl("c", (NAT,)),
        ActionDecl("d", (enum, BOOL)),
    )
    summands = []
    for i in range(rng.randint(1, max_summands)):
        sum_vars = []
        bounds = []
        for k in range(rng.choice([0, 0, 0, 1, 1, 2])):
            sort = rng.choice(sorts)
            name = f"x{k}"
            sum_vars.append((name, sort))
            if sort == NAT:
                nats = [n for n, s in params if s == NAT]
                bound = Var(rng.choice(nats)) if nats and rng.random() < 0.3 else data.nat(rng.randint(0, NAT_MAX))
                bounds.append(BinOp(rng.choice(["<=", "<"]) if isinstance(bound, Lit) else "<=", Var(name), bound))
        scope = list(params) + sum_vars
        parts = [g.boolean(scope, 1) for _ in range(rng.choice([0, 1, 1, 2, 3]))]
        condition = data.conj(*(parts + bounds))
        events = []
        for _ in range(rng.choice([0, 1, 1, 1, 2])):
            decl = rng.choice(actions)
            events.append(ActionTerm(decl.label, tuple(g.of_sort(s, scope, 1) for s in decl.sorts)))
        updates = tuple(
            Var(n) if rng.random() < 0.4 else g.of_sort(s, scope, 2) for n, s in params
        )
        summands.append(Summand(i, tuple(sum_vars), condition, MultiAction(tuple(events)), updates))
    lpe = Lpe("P", params, tuple(summands), actions)
    init = tuple(g.lit(s).value for _, s in params)
    return lpe, init


def random_partition(rng: random.Random, n: int) -> Partition:
    left, right = set(), set()
    for j in range(n):
        r = rng.random()
        if r < 0.4:
            left.add(j)
        elif r < 0.8:
            right.add(j)
        else:
            left.add(j)
            right.add(j)
    return Partition(left, right)


def characteristic(lpe: Lpe, states) -> data.Expr:
    """Predicate that holds exactly in *states*."""
    names = lpe.param_names
    disjuncts = []
    for st in sorted(states, key=repr):
        disjuncts.append(data.conj(*(BinOp("==", Var(n), Lit(v, s)) for n, (v, (_, s)) in zip(names, zip(st, lpe.params)))))
    if not disjuncts:
        return data.FALSE
    out = disjuncts[-1]
    for d in reversed(disjuncts[:-1]):
        out = BinOp("||", d, out)
    return out


def closed_superset(lpe: Lpe, init, rng: random.Random) -> set:
    """Reachable states of *init* plus those of a few random extra vectors."""
    states = set(explore(lpe, init, LIMITS).states)
    vectors = list(data.enumerate_vectors(lpe.param_sorts, NAT_MAX))
    for v in rng.sample(vectors, k=min(len(vectors), rng.randint(0, 3))):
        states |= set(explore(lpe, v, LIMITS).states)
    return states


def random_invariant(lpe: Lpe, init, rng: random.Random):
    """A candidate invariant: a random predicate or a successor-closed state set."""
    if rng.random() < 0.35:
        g = _Gen(rng, None)
        return g.boolean(list(lpe.params), 2)
    return characteristic(lpe, closed_superset(lpe, init, rng))


def random_lts(rng: random.Random, max_states=6, labels=("a", "b", "c")) -> Lts:
    n = rng.randint(1, max_states)
    alphabet = [ActionMultiset()] + [ActionMultiset([(lbl, ())]) for lbl in labels]
    alphabet = alphabet[: rng.randint(1, len(alphabet))]
    density = rng.random() * 0.5
    transitions = []
    for s in range(n):
        for lbl in alphabet:
            for t in range(n):
                if rng.random() < density / max(1, len(alphabet) - 1):
                    transitions.append((s, lbl, t))
    return Lts(list(range(n)), rng.randrange(n), transitions)
