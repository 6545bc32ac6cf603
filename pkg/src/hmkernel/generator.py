"""Random well-formed proofs for property tests.

Proofs are built goal-directed: to produce a deduction of some formula the
generator picks an introduction matching its shape or an elimination whose
premises it then generates in turn.  ``VI`` and ``boxI`` are also built
bottom-up: generate a premise first, then discharge exactly the level-0
classes it left open.  The generator keeps its own record of conclusions and
open classes and never consults the checker, so agreement between the two
is a genuine cross-check of the side conditions.

``bot`` only enters through assumptions.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from .checker import Mode
from .proof import (
    Assume, BoxE, BoxI, ConjE1, ConjE2, ConjI, DisjE, DisjI1, DisjI2, FalsumE, ImplE,
    ImplI, Proof, VE, VI,
)
from .syntax import Atom, Box, Conj, Disj, Falsum, Formula, Impl, Valid, level

ATOMS = tuple(Atom(n) for n in "PQRS")
LEAF_CHANCE = 0.15


class _G(NamedTuple):
    proof: Proof
    concl: Formula
    opens: dict[str, Formula]


class _Ctx(NamedTuple):
    hyps: tuple[tuple[str, Formula], ...]   # bound below, usable as leaves
    fresh0: bool                            # new level-0 assumptions allowed
    fresh1: bool                            # new level-1 assumptions allowed

    def extend(self, label: str, f: Formula) -> "_Ctx":
        return self._replace(hyps=self.hyps + ((label, f),))

    def level1_hyps(self) -> tuple[tuple[str, Formula], ...]:
        return tuple(h for h in self.hyps if level(h[1]) == 1)


def _merge(*gs: _G) -> dict[str, Formula]:
    out: dict[str, Formula] = {}
    for g in gs:
        out.update(g.opens)
    return out


def _drop(opens: dict[str, Formula], *labels: str) -> dict[str, Formula]:
    return {k: v for k, v in opens.items() if k not in labels}


class _Generator:
    def __init__(self, rng: random.Random, mode: Mode, budget: int = 4000):
        self.rng = rng
        self.liberal = mode is Mode.LIBERAL_VI
        self.count = 0
        self.budget = budget

    def label(self, base: str) -> str:
        self.count += 1
        return f"{base}{self.count}"

    def formula(self, depth: int = 2) -> Formula:
        r = self.rng
        if depth <= 0 or r.random() < 0.35:
            return Falsum() if r.random() < 0.1 else r.choice(ATOMS)
        k = r.randrange(4)
        if k == 3:
            ctx = tuple(self.formula(depth - 1) for _ in range(r.randrange(3)))
            return Box(ctx, self.formula(depth - 1))
        return (Conj, Disj, Impl)[k](self.formula(depth - 1), self.formula(depth - 1))

    # -- leaves -------------------------------------------------------------

    def leaf(self, goal: Formula, ctx: _Ctx) -> _G | None:
        options = [lab for lab, f in ctx.hyps if f == goal]
        fresh_ok = ctx.fresh1 if level(goal) else ctx.fresh0
        if options and (not fresh_ok or self.rng.random() < 0.7):
            lab = self.rng.choice(options)
            return _G(Assume(lab, goal), goal, {lab: goal})
        if fresh_ok:
            lab = self.label("x")
            return _G(Assume(lab, goal), goal, {lab: goal})
        return None

    # -- goal-directed generation --------------------------------------------

    def gen(self, depth: int, goal: Formula, ctx: _Ctx) -> _G | None:
        self.budget -= 1
        if depth <= 1 or self.budget <= 0 or self.rng.random() < LEAF_CHANCE:
            g = self.leaf(goal, ctx)
            if g is not None or depth <= 1 or self.budget <= 0:
                return g
        rules = ["conj_e1", "conj_e2", "impl_e", "disj_e", "falsum_e", "v_e", "box_e"]
        intro = {Conj: "conj_i", Disj: "disj_i", Impl: "impl_i", Box: "box_i"}.get(type(goal))
        self.rng.shuffle(rules)
        if intro and self.rng.random() < 0.5:
            rules.insert(0, intro)
        elif intro:
            rules.insert(self.rng.randrange(len(rules) + 1), intro)
        for rule in rules:
            g = getattr(self, rule)(depth, goal, ctx)
            if g is not None:
                return g
        return self.leaf(goal, ctx)

    def conj_i(self, depth, goal: Conj, ctx):
        a = self.gen(depth - 1, goal.left, ctx)
        b = a and self.gen(depth - 1, goal.right, ctx)
        if b is None:
            return None
        return _G(ConjI(a.proof, b.proof), goal, _merge(a, b))

    def disj_i(self, depth, goal: Disj, ctx):
        if self.rng.random() < 0.5:
            a = self.gen(depth - 1, goal.left, ctx)
            return a and _G(DisjI1(goal.right, a.proof), goal, a.opens)
        b = self.gen(depth - 1, goal.right, ctx)
        return b and _G(DisjI2(goal.left, b.proof), goal, b.opens)

    def impl_i(self, depth, goal: Impl, ctx):
        lab = self.label("u")
        body = self.gen(depth - 1, goal.right, ctx.extend(lab, goal.left))
        if body is None:
            return None
        return _G(ImplI(lab, goal.left, body.proof), goal, _drop(body.opens, lab))

    def box_i(self, depth, goal: Box, ctx):
        labels = [self.label("b") for _ in goal.context]
        inner = _Ctx(tuple(zip(labels, goal.context)) + ctx.level1_hyps(), False, ctx.fresh1)
        prem = self.gen(depth - 1, goal.body, inner)
        if prem is None:
            return None
        return _G(BoxI(tuple(zip(labels, goal.context)), prem.proof), goal,
                  _drop(prem.opens, *labels))

    def conj_e1(self, depth, goal, ctx):
        m = self.gen(depth - 1, Conj(goal, self.formula(1)), ctx)
        return m and _G(ConjE1(m.proof), goal, m.opens)

    def conj_e2(self, depth, goal, ctx):
        m = self.gen(depth - 1, Conj(self.formula(1), goal), ctx)
        return m and _G(ConjE2(m.proof), goal, m.opens)

    def impl_e(self, depth, goal, ctx):
        w = self.formula(1)
        m = self.gen(depth - 1, Impl(w, goal), ctx)
        n = m and self.gen(depth - 1, w, ctx)
        if n is None:
            return None
        return _G(ImplE(m.proof, n.proof), goal, _merge(m, n))

    def disj_e(self, depth, goal, ctx):
        w1, w2 = self.formula(1), self.formula(1)
        m = self.gen(depth - 1, Disj(w1, w2), ctx)
        if m is None:
            return None
        la, lb = self.label("v"), self.label("w")
        left = self.gen(depth - 1, goal, ctx.extend(la, w1))
        right = left and self.gen(depth - 1, goal, ctx.extend(lb, w2))
        if right is None:
            return None
        return _G(DisjE(m.proof, la, left.proof, lb, right.proof), goal,
                  {**m.opens, **_drop(left.opens, la), **_drop(right.opens, lb)})

    def falsum_e(self, depth, goal, ctx):
        m = self.gen(depth - 1, Falsum(), ctx)
        return m and _G(FalsumE(goal, m.proof), goal, m.opens)

    def v_e(self, depth, goal, ctx):
        m = self.valid_for(depth - 1, goal, ctx)
        if m is None:
            return None
        minors = []
        for g in m.concl.context:
            n = self.gen(depth - 1, g, ctx)
            if n is None:
                return None
            minors.append(n)
        return _G(VE(m.proof, tuple(n.proof for n in minors)), goal, _merge(m, *minors))

    def box_e(self, depth, goal, ctx):
        body = goal if self.rng.random() < 0.5 else self.formula(1)
        m = self.box_for(depth - 1, body, ctx)
        if m is None:
            return None
        lab = self.label("h")
        hyp = Valid(m.concl.context, m.concl.body)
        n = self.gen(depth - 1, goal, ctx.extend(lab, hyp))
        if n is None:
            return None
        return _G(BoxE(m.proof, lab, hyp, n.proof), goal, {**m.opens, **_drop(n.opens, lab)})

    # -- premises whose context is chosen by the generator --------------------

    def _discharge_opens(self, prem: _G):
        items = [(lab, f) for lab, f in prem.opens.items() if level(f) == 0]
        if self.rng.random() < 0.3:
            items.append((self.label("b"), self.formula(1)))
        self.rng.shuffle(items)
        return tuple(items)

    def valid_for(self, depth: int, body: Formula, ctx: _Ctx) -> _G | None:
        """Some deduction of a validity with the given body."""
        choices = ["hyp", "vi", "vi"]
        if ctx.fresh1:
            choices.append("fresh")
        self.rng.shuffle(choices)
        for how in choices:
            if how == "hyp":
                hs = [(lab, f) for lab, f in ctx.level1_hyps() if f.body == body]
                if hs:
                    lab, f = self.rng.choice(hs)
                    return _G(Assume(lab, f), f, {lab: f})
            elif how == "fresh":
                f = Valid(tuple(self.formula(1) for _ in range(self.rng.randrange(3))), body)
                lab = self.label("x")
                return _G(Assume(lab, f), f, {lab: f})
            elif depth >= 2:
                inner = _Ctx(ctx.level1_hyps() if self.liberal else (), True,
                             self.liberal and ctx.fresh1)
                prem = self.gen(depth - 1, body, inner)
                if prem is None:
                    continue
                ds = self._discharge_opens(prem)
                f = Valid(tuple(g for _, g in ds), body)
                return _G(VI(ds, prem.proof), f, _drop(prem.opens, *(lab for lab, _ in ds)))
        return None

    def box_for(self, depth: int, body: Formula, ctx: _Ctx) -> _G | None:
        """Some deduction of a box formula with the given body."""
        choices = ["bi", "bi", "goal"]
        if ctx.fresh0:
            choices.append("fresh")
        self.rng.shuffle(choices)
        for how in choices:
            if how == "fresh":
                f = Box(tuple(self.formula(1) for _ in range(self.rng.randrange(3))), body)
                lab = self.label("x")
                return _G(Assume(lab, f), f, {lab: f})
            if how == "goal":
                f = Box(tuple(self.formula(1) for _ in range(self.rng.randrange(2))), body)
                g = self.gen(depth, f, ctx)
                if g is not None:
                    return g
            elif depth >= 2:
                inner = _Ctx(ctx.level1_hyps(), True, ctx.fresh1)
                prem = self.gen(depth - 1, body, inner)
                if prem is None:
                    continue
                ds = self._discharge_opens(prem)
                f = Box(tuple(g for _, g in ds), body)
                return _G(BoxI(ds, prem.proof), f, _drop(prem.opens, *(lab for lab, _ in ds)))
        return None


def gen_proof_with_conclusion(seed: int, depth: int,
                              mode: Mode | str = Mode.STRICT) -> tuple[Proof, Formula, dict]:
    """Like ``gen_proof`` but also returns the generator's own conclusion and open classes."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    g = _Generator(random.Random(seed), Mode(mode))
    ctx = _Ctx((), True, True)
    if g.rng.random() < 0.15:
        out = g.valid_for(depth, g.formula(1), ctx)
    else:
        out = g.gen(depth, g.formula(2), ctx)
    assert out is not None  # fresh assumptions are always available at the root
    return out.proof, out.concl, out.opens


def gen_proof(seed: int, depth: int, mode: Mode | str = Mode.STRICT) -> Proof:
    """Deterministic pseudo-random proof of height at most ``depth``."""
    return gen_proof_with_conclusion(seed, depth, mode)[0]
