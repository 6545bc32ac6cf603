"""Proof checking for the validity/relative-necessity calculus.

``check`` makes one bottom-up pass, computing for every node its conclusion
and open assumption classes and verifying the side conditions of the rule
applied there.  Checking does not stop at the first failure: every
independent error is reported together with the path of the node at fault.

Two regimes are supported.  In ``strict`` mode the premise of VI may depend
on no open level-1 assumption.  ``liberal-vi`` drops exactly that
condition; level-1 classes open above a VI then stay open below it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .proof import (
    Assume, AssumptionSet, BoxE, BoxI, ConjE1, ConjE2, ConjI, DisjE, DisjI1, DisjI2,
    FalsumE, ImplE, ImplI, Path, Proof, VE, VI, bindings, format_path, iter_nodes,
)
from .syntax import Box, Conj, Disj, Falsum, Formula, Impl, Valid, level, print_formula


class Mode(str, enum.Enum):
    STRICT = "strict"
    LIBERAL_VI = "liberal-vi"

    def __str__(self) -> str:
        return self.value


ERROR_KINDS = (
    "LevelViolation", "PremiseMismatch", "IncompleteDischarge", "OpenLevelOneUnderVI",
    "HypothesisMismatch", "ArityMismatch", "DuplicateLabelBinding",
    "ClassFormulaMismatch", "UnknownLabel",
)


@dataclass(frozen=True)
class Judgement:
    conclusion: Formula
    opens: AssumptionSet

    def to_json(self) -> dict:
        return {
            "conclusion": print_formula(self.conclusion),
            "opens": [{"label": lab, "formula": print_formula(f), "count": n}
                      for (lab, f), n in self.opens.items()],
        }


@dataclass(frozen=True)
class CheckError:
    kind: str
    path: Path
    detail: str

    def __str__(self) -> str:
        return f"ERROR {self.kind} at {format_path(self.path)}: {self.detail}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "path": list(self.path), "detail": self.detail}


class ProofCheckError(Exception):
    """Raised by ``check`` when a proof breaks one or more rules."""

    def __init__(self, errors: list[CheckError]):
        self.errors = errors
        super().__init__("\n".join(map(str, errors)))

    @property
    def kinds(self) -> list[str]:
        return [e.kind for e in self.errors]


def _pf(f: Formula) -> str:
    return print_formula(f)


class _Checker:
    def __init__(self, mode: Mode):
        self.mode = Mode(mode)
        self.errors: list[CheckError] = []

    def err(self, kind: str, path: Path, detail: str) -> None:
        self.errors.append(CheckError(kind, path, detail))

    def level0(self, f: Formula, path: Path, what: str) -> bool:
        if level(f) != 0:
            self.err("LevelViolation", path, f"{what} {_pf(f)} must be level 0")
            return False
        return True

    def merge(self, parts: list[AssumptionSet], path: Path) -> AssumptionSet | None:
        total = AssumptionSet()
        for part in parts:
            total = total + part
        for lab in total.conflicts():
            fs = ", ".join(_pf(f) for f in total.formulas_of(lab))
            self.err("ClassFormulaMismatch", path, f"class {lab} carries {fs}")
            return None
        return total

    def discharge(self, opens: AssumptionSet, lab: str, expected: Formula,
                  path: Path) -> AssumptionSet | None:
        bad = [f for f in opens.formulas_of(lab) if f != expected]
        if bad:
            self.err("ClassFormulaMismatch", path,
                     f"class {lab} carries {_pf(bad[0])}, discharge expects {_pf(expected)}")
            return None
        return opens.without(lab)

    # one method per rule; each returns a Judgement or None on failure

    def walk(self, p: Proof, path: Path) -> Judgement | None:
        if isinstance(p, Assume):
            return Judgement(p.formula, AssumptionSet.single(p.label, p.formula))
        method = getattr(self, "rule_" + type(p).__name__)
        return method(p, path)

    def sub(self, p: Proof, path: Path, *children) -> list[Judgement] | None:
        js = [self.walk(c, path + (i,)) for i, c in children]
        return None if any(j is None for j in js) else js

    def rule_ConjI(self, p: ConjI, path: Path):
        js = self.sub(p, path, (0, p.left), (1, p.right))
        if js is None:
            return None
        a, b = js
        if not (self.level0(a.conclusion, path, "conjunct")
                & self.level0(b.conclusion, path, "conjunct")):
            return None
        opens = self.merge([a.opens, b.opens], path)
        return None if opens is None else Judgement(Conj(a.conclusion, b.conclusion), opens)

    def _conj_elim(self, p, path, pick):
        js = self.sub(p, path, (0, p.premise))
        if js is None:
            return None
        c = js[0].conclusion
        if not self.level0(c, path, "premise"):
            return None
        if not isinstance(c, Conj):
            self.err("PremiseMismatch", path, f"premise {_pf(c)} is not a conjunction")
            return None
        return Judgement(pick(c), js[0].opens)

    def rule_ConjE1(self, p: ConjE1, path: Path):
        return self._conj_elim(p, path, lambda c: c.left)

    def rule_ConjE2(self, p: ConjE2, path: Path):
        return self._conj_elim(p, path, lambda c: c.right)

    def _disj_intro(self, p, path, build):
        ok = self.level0(p.other, path, "disjunct")
        js = self.sub(p, path, (0, p.premise))
        if js is None or not ok:
            return None
        c = js[0].conclusion
        if not self.level0(c, path, "premise"):
            return None
        return Judgement(build(c, p.other), js[0].opens)

    def rule_DisjI1(self, p: DisjI1, path: Path):
        return self._disj_intro(p, path, lambda c, o: Disj(c, o))

    def rule_DisjI2(self, p: DisjI2, path: Path):
        return self._disj_intro(p, path, lambda c, o: Disj(o, c))

    def rule_DisjE(self, p: DisjE, path: Path):
        js = self.sub(p, path, (0, p.major), (1, p.left), (2, p.right))
        if js is None:
            return None
        m, l, r = js
        if not self.level0(m.conclusion, path, "major premise"):
            return None
        if not isinstance(m.conclusion, Disj):
            self.err("PremiseMismatch", path, f"major premise {_pf(m.conclusion)} is not a disjunction")
            return None
        lo = self.discharge(l.opens, p.left_label, m.conclusion.left, path)
        ro = self.discharge(r.opens, p.right_label, m.conclusion.right, path)
        ok = lo is not None and ro is not None
        if l.conclusion != r.conclusion:
            self.err("PremiseMismatch", path,
                     f"minor premises conclude {_pf(l.conclusion)} and {_pf(r.conclusion)}")
            return None
        if not self.level0(l.conclusion, path, "conclusion") or not ok:
            return None
        opens = self.merge([m.opens, lo, ro], path)
        return None if opens is None else Judgement(l.conclusion, opens)

    def rule_ImplI(self, p: ImplI, path: Path):
        ok = self.level0(p.antecedent, path, "antecedent")
        js = self.sub(p, path, (0, p.body))
        if js is None or not ok:
            return None
        b = js[0]
        if not self.level0(b.conclusion, path, "consequent"):
            return None
        opens = self.discharge(b.opens, p.label, p.antecedent, path)
        return None if opens is None else Judgement(Impl(p.antecedent, b.conclusion), opens)

    def rule_ImplE(self, p: ImplE, path: Path):
        js = self.sub(p, path, (0, p.major), (1, p.minor))
        if js is None:
            return None
        m, n = js
        if not self.level0(m.conclusion, path, "major premise"):
            return None
        if not isinstance(m.conclusion, Impl):
            self.err("PremiseMismatch", path, f"major premise {_pf(m.conclusion)} is not an implication")
            return None
        if n.conclusion != m.conclusion.left:
            self.err("PremiseMismatch", path,
                     f"minor premise {_pf(n.conclusion)} does not match antecedent {_pf(m.conclusion.left)}")
            return None
        opens = self.merge([m.opens, n.opens], path)
        return None if opens is None else Judgement(m.conclusion.right, opens)

    def rule_FalsumE(self, p: FalsumE, path: Path):
        ok = self.level0(p.target, path, "target")
        js = self.sub(p, path, (0, p.premise))
        if js is None or not ok:
            return None
        if js[0].conclusion != Falsum():
            self.err("PremiseMismatch", path, f"premise {_pf(js[0].conclusion)} is not bot")
            return None
        return Judgement(p.target, js[0].opens)

    def _discharge_all(self, p, path, opens: AssumptionSet, what: str) -> AssumptionSet | None:
        """Shared VI/BoxI discharge: every open level-0 class must be listed once."""
        ok = True
        seen: set[str] = set()
        for lab, f in p.discharges:
            if lab in seen:
                self.err("DuplicateLabelBinding", path, f"label {lab} listed twice in {what}")
                ok = False
            seen.add(lab)
            ok &= self.level0(f, path, "discharged formula")
        if not ok:
            return None
        for lab, f in p.discharges:
            opens = self.discharge(opens, lab, f, path)
            if opens is None:
                return None
        missing = sorted({lab for (lab, f), _ in opens.items() if level(f) == 0})
        if missing:
            self.err("IncompleteDischarge", path,
                     f"{what} leaves level-0 classes open: {', '.join(missing)}")
            return None
        return opens

    def rule_VI(self, p: VI, path: Path):
        js = self.sub(p, path, (0, p.premise))
        if js is None:
            return None
        b = js[0]
        if not self.level0(b.conclusion, path, "premise"):
            return None
        high = sorted({lab for (lab, f), _ in b.opens.items() if level(f) == 1})
        opens = self._discharge_all(p, path, b.opens, "VI")
        if high and self.mode is Mode.STRICT:
            self.err("OpenLevelOneUnderVI", path,
                     f"premise depends on open level-1 classes {', '.join(high)}")
            return None
        if opens is None:
            return None
        return Judgement(Valid(tuple(f for _, f in p.discharges), b.conclusion), opens)

    def rule_VE(self, p: VE, path: Path):
        js = self.sub(p, path, (0, p.major), *((i + 1, q) for i, q in enumerate(p.minors)))
        if js is None:
            return None
        m, ns = js[0], js[1:]
        if not isinstance(m.conclusion, Valid):
            self.err("PremiseMismatch", path, f"major premise {_pf(m.conclusion)} is not a validity")
            return None
        ctx = m.conclusion.context
        if len(ns) != len(ctx):
            self.err("ArityMismatch", path, f"{len(ns)} minor premises for context of length {len(ctx)}")
            return None
        ok = True
        for i, (n, g) in enumerate(zip(ns, ctx)):
            if n.conclusion != g:
                self.err("PremiseMismatch", path,
                         f"minor premise {i + 1} concludes {_pf(n.conclusion)}, expected {_pf(g)}")
                ok = False
        if not ok:
            return None
        opens = self.merge([m.opens, *(n.opens for n in ns)], path)
        return None if opens is None else Judgement(m.conclusion.body, opens)

    def rule_BoxI(self, p: BoxI, path: Path):
        js = self.sub(p, path, (0, p.premise))
        if js is None:
            return None
        b = js[0]
        if not self.level0(b.conclusion, path, "premise"):
            return None
        opens = self._discharge_all(p, path, b.opens, "boxI")
        if opens is None:
            return None
        return Judgement(Box(tuple(f for _, f in p.discharges), b.conclusion), opens)

    def rule_BoxE(self, p: BoxE, path: Path):
        ok = True
        if level(p.hypothesis) != 1:
            self.err("LevelViolation", path, f"boxE hypothesis {_pf(p.hypothesis)} must be a validity")
            ok = False
        js = self.sub(p, path, (0, p.major), (1, p.minor))
        if js is None or not ok:
            return None
        m, n = js
        if not isinstance(m.conclusion, Box):
            self.err("PremiseMismatch", path, f"major premise {_pf(m.conclusion)} is not a box")
            return None
        expected = Valid(m.conclusion.context, m.conclusion.body)
        if p.hypothesis != expected:
            self.err("HypothesisMismatch", path,
                     f"hypothesis {_pf(p.hypothesis)} differs from {_pf(expected)}")
            return None
        if not self.level0(n.conclusion, path, "conclusion"):
            return None
        no = self.discharge(n.opens, p.label, p.hypothesis, path)
        if no is None:
            return None
        opens = self.merge([m.opens, no], path)
        return None if opens is None else Judgement(n.conclusion, opens)


def check(p: Proof, mode: Mode | str = Mode.STRICT) -> Judgement:
    """Check ``p``; return its Judgement or raise ``ProofCheckError`` listing every error."""
    c = _Checker(Mode(mode))
    seen: dict[str, Path] = {}
    for path, node in iter_nodes(p):
        for lab, _, _ in bindings(node):
            if lab in seen and seen[lab] != path:
                c.err("DuplicateLabelBinding", path,
                      f"label {lab} already bound at {format_path(seen[lab])}")
            seen.setdefault(lab, path)
    j = c.walk(p, ())
    if c.errors or j is None:
        raise ProofCheckError(c.errors or [CheckError("PremiseMismatch", (), "proof rejected")])
    return j


def check_errors(p: Proof, mode: Mode | str = Mode.STRICT) -> list[CheckError]:
    """All errors ``check`` would report; empty when the proof is correct."""
    try:
        check(p, mode)
    except ProofCheckError as e:
        return e.errors
    return []


def is_valid_proof(p: Proof, mode: Mode | str = Mode.STRICT) -> bool:
    return not check_errors(p, mode)


def derive_corpus() -> list[tuple[str, Proof, Judgement]]:
    """Bundled closed proofs (identity, thinning, relative necessity, T, 4, K, ...)
    paired with the Judgement each must receive in strict mode."""
    from .corpus import derive_corpus as load
    return load()
