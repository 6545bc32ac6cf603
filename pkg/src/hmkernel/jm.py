"""The judgmental system JM for the implication/necessity fragment.

A JM sequent ``Δ; Γ ⊢ C`` has two ordered lists of hypotheses: ``Δ`` holds
formulas assumed valid and ``Γ`` formulas assumed true.  Proofs refer to
hypotheses by position.  Checking is bidirectional: ``hyp``, ``hyp*``,
``impE`` and ``boxE`` can compute their conclusion, while ``impI`` and
``boxI`` are only checked against a goal.  An elimination whose major
premise cannot be computed gets its formula from the minor premise where
that is possible (``impE``) and is rejected otherwise.

``jm_to_hm`` maps a checked JM derivation to an HM proof: true hypotheses
become level-0 assumptions ``g0, g1, ...``, valid hypotheses become level-1
classes ``d0, d1, ...`` of ``(valid () B)`` used through a nullary ``VE``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import proof as hm
from . import syntax
from .checker import CheckError, ProofCheckError
from .proof import LabelSupply, Path
from .sexpr import ParseError, SExpr, Symbol, expect_list, expect_symbol, head, read_all
from .syntax import ATOM_RE, RESERVED


# -- formulas -----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Impl:
    left: "JMFormula"
    right: "JMFormula"

    def __str__(self):
        return f"(imp {self.left} {self.right})"


@dataclass(frozen=True, slots=True)
class Box:
    body: "JMFormula"

    def __str__(self):
        return f"(box {self.body})"


JMFormula = Union[Atom, Impl, Box]


@dataclass(frozen=True, slots=True)
class JMSequent:
    delta: tuple[JMFormula, ...]
    gamma: tuple[JMFormula, ...]
    conclusion: JMFormula

    def __str__(self):
        d = " ".join(map(str, self.delta))
        g = " ".join(map(str, self.gamma))
        return f"(seq ({d}) ({g}) {self.conclusion})"


# -- proofs -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Hyp:
    index: int


@dataclass(frozen=True, slots=True)
class HypStar:
    index: int


@dataclass(frozen=True, slots=True)
class ImplI:
    body: "JMProof"


@dataclass(frozen=True, slots=True)
class ImplE:
    major: "JMProof"
    minor: "JMProof"


@dataclass(frozen=True, slots=True)
class BoxI:
    body: "JMProof"


@dataclass(frozen=True, slots=True)
class BoxE:
    major: "JMProof"
    minor: "JMProof"


JMProof = Union[Hyp, HypStar, ImplI, ImplE, BoxI, BoxE]

JM_ERROR_KINDS = ("IndexOutOfRange", "ConclusionMismatch", "NonEmptyGammaUnderBoxI")


def print_jm_proof(p: JMProof) -> str:
    match p:
        case Hyp(i):
            return f"(hyp {i})"
        case HypStar(i):
            return f"(hyp* {i})"
        case ImplI(b):
            return f"(impI {print_jm_proof(b)})"
        case BoxI(b):
            return f"(boxI {print_jm_proof(b)})"
        case ImplE(m, n):
            return f"(impE {print_jm_proof(m)} {print_jm_proof(n)})"
        case BoxE(m, n):
            return f"(boxE {print_jm_proof(m)} {print_jm_proof(n)})"
    raise TypeError(f"not a JM proof: {p!r}")


# -- parsing ------------------------------------------------------------------

def jm_formula_from_sexpr(e: SExpr) -> JMFormula:
    if isinstance(e, Symbol):
        if not ATOM_RE.match(e.name) or e.name in RESERVED:
            raise ParseError(f"invalid JM atom {e.name!r}", e.line, e.col)
        return Atom(e.name)
    match head(e), len(e):
        case "imp", 3:
            return Impl(jm_formula_from_sexpr(e[1]), jm_formula_from_sexpr(e[2]))
        case "box", 2:
            return Box(jm_formula_from_sexpr(e[1]))
        case ("imp" | "box") as tag, _:
            raise ParseError(f"wrong number of arguments to {tag!r}", e.line, e.col)
    raise ParseError(f"unknown JM formula constructor {head(e)!r}", e.line, e.col)


def sequent_from_sexpr(e: SExpr) -> JMSequent:
    lst = expect_list(e, "sequent")
    if head(lst) != "seq" or len(lst) != 4:
        raise ParseError("a goal is written (seq (delta ...) (gamma ...) formula)",
                         lst.line, lst.col)
    delta = expect_list(lst[1], "delta list")
    gamma = expect_list(lst[2], "gamma list")
    return JMSequent(tuple(map(jm_formula_from_sexpr, delta.items)),
                     tuple(map(jm_formula_from_sexpr, gamma.items)),
                     jm_formula_from_sexpr(lst[3]))


def _index(e: SExpr) -> int:
    s = expect_symbol(e, "hypothesis index")
    if not s.name.isdigit():
        raise ParseError(f"hypothesis index must be a natural number, got {s.name!r}",
                         s.line, s.col)
    return int(s.name)


_JM_ARITY = {"hyp": 2, "hyp*": 2, "impI": 2, "boxI": 2, "impE": 3, "boxE": 3}


def jm_proof_from_sexpr(e: SExpr) -> JMProof:
    lst = expect_list(e, "JM proof")
    tag = head(lst)
    if tag not in _JM_ARITY:
        raise ParseError(f"unknown JM rule {tag!r}", lst.line, lst.col)
    if len(lst) != _JM_ARITY[tag]:
        raise ParseError(f"'{tag}' expects {_JM_ARITY[tag] - 1} arguments", lst.line, lst.col)
    a = lst.items
    match tag:
        case "hyp":
            return Hyp(_index(a[1]))
        case "hyp*":
            return HypStar(_index(a[1]))
        case "impI":
            return ImplI(jm_proof_from_sexpr(a[1]))
        case "boxI":
            return BoxI(jm_proof_from_sexpr(a[1]))
        case "impE":
            return ImplE(jm_proof_from_sexpr(a[1]), jm_proof_from_sexpr(a[2]))
        case "boxE":
            return BoxE(jm_proof_from_sexpr(a[1]), jm_proof_from_sexpr(a[2]))
    raise AssertionError(tag)


def parse_jm_file(text: str) -> tuple[JMSequent, JMProof]:
    """Parse a JM file: a ``(seq ...)`` goal followed by one proof."""
    forms = read_all(text)
    if len(forms) != 2:
        where = forms[2] if len(forms) > 2 else None
        raise ParseError("a JM file holds a goal followed by a proof",
                         where.line if where else 1, where.col if where else 1)
    return sequent_from_sexpr(forms[0]), jm_proof_from_sexpr(forms[1])


def parse_jm_formula(text: str) -> JMFormula:
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one formula", 1, 1)
    return jm_formula_from_sexpr(forms[0])


# -- checking -----------------------------------------------------------------

@dataclass(frozen=True)
class _Env:
    delta: tuple[JMFormula, ...]
    gamma: tuple[JMFormula, ...]
    dropped: bool = False     # some enclosing boxI emptied a non-empty gamma


class _CannotInfer(Exception):
    pass


class _JMChecker:
    def __init__(self):
        self.errors: list[CheckError] = []

    def err(self, kind: str, path: Path, detail: str) -> None:
        self.errors.append(CheckError(kind, path, detail))

    def hyp(self, p: Hyp | HypStar, env: _Env, path: Path) -> JMFormula | None:
        hyps, name = (env.gamma, "gamma") if isinstance(p, Hyp) else (env.delta, "delta")
        if 0 <= p.index < len(hyps):
            return hyps[p.index]
        if isinstance(p, Hyp) and env.dropped:
            self.err("NonEmptyGammaUnderBoxI", path,
                     f"hyp {p.index} refers to a true hypothesis discarded by an enclosing boxI")
        else:
            self.err("IndexOutOfRange", path, f"index {p.index} but {name} has {len(hyps)} entries")
        return None

    def infer(self, p: JMProof, env: _Env, path: Path) -> JMFormula | None:
        """Conclusion of a synthesizing form; ``None`` after reporting an error."""
        match p:
            case Hyp() | HypStar():
                return self.hyp(p, env, path)
            case ImplE(major, minor):
                f = self.infer(major, env, path + (0,))
                if f is None:
                    return None
                if not isinstance(f, Impl):
                    self.err("ConclusionMismatch", path + (0,), f"major premise proves {f}, not an implication")
                    return None
                self.check(minor, env, f.left, path + (1,))
                return f.right
            case BoxE(major, minor):
                a = self._box_body(major, env, path)
                if a is None:
                    return None
                return self.infer(minor, _Env(env.delta + (a,), env.gamma, env.dropped), path + (1,))
        raise _CannotInfer

    def _box_body(self, major: JMProof, env: _Env, path: Path) -> JMFormula | None:
        try:
            f = self.infer(major, env, path + (0,))
        except _CannotInfer:
            self.err("ConclusionMismatch", path + (0,),
                     "cannot determine the boxed formula of this major premise")
            return None
        if f is not None and not isinstance(f, Box):
            self.err("ConclusionMismatch", path + (0,), f"major premise proves {f}, not a box")
            return None
        return f and f.body

    def check(self, p: JMProof, env: _Env, goal: JMFormula, path: Path) -> None:
        match p:
            case ImplI(body):
                if not isinstance(goal, Impl):
                    self.err("ConclusionMismatch", path, f"impI proves an implication, goal is {goal}")
                    return
                self.check(body, _Env(env.delta, env.gamma + (goal.left,), env.dropped),
                           goal.right, path + (0,))
            case BoxI(body):
                if not isinstance(goal, Box):
                    self.err("ConclusionMismatch", path, f"boxI proves a box, goal is {goal}")
                    return
                self.check(body, _Env(env.delta, (), env.dropped or bool(env.gamma)),
                           goal.body, path + (0,))
            case BoxE(major, minor):
                a = self._box_body(major, env, path)
                if a is not None:
                    self.check(minor, _Env(env.delta + (a,), env.gamma, env.dropped), goal, path + (1,))
            case ImplE(major, minor):
                try:
                    f = self.infer(major, env, path + (0,))
                except _CannotInfer:
                    self._impl_e_from_minor(major, minor, env, goal, path)
                    return
                if f is None:
                    return
                if not isinstance(f, Impl):
                    self.err("ConclusionMismatch", path + (0,), f"major premise proves {f}, not an implication")
                    return
                if f.right != goal:
                    self.err("ConclusionMismatch", path, f"proves {f.right}, goal is {goal}")
                self.check(minor, env, f.left, path + (1,))
            case _:
                f = self.infer(p, env, path)
                if f is not None and f != goal:
                    self.err("ConclusionMismatch", path, f"proves {f}, goal is {goal}")

    def _impl_e_from_minor(self, major, minor, env, goal, path) -> None:
        try:
            a = self.infer(minor, env, path + (1,))
        except _CannotInfer:
            self.err("ConclusionMismatch", path,
                     "neither premise of impE determines the implication used")
            return
        if a is not None:
            self.check(major, env, Impl(a, goal), path + (0,))


def jm_check_errors(p: JMProof, goal: JMSequent) -> list[CheckError]:
    c = _JMChecker()
    c.check(p, _Env(goal.delta, goal.gamma), goal.conclusion, ())
    return c.errors


def jm_check(p: JMProof, goal: JMSequent) -> None:
    """Raise ``ProofCheckError`` unless ``p`` derives ``goal``."""
    errors = jm_check_errors(p, goal)
    if errors:
        raise ProofCheckError(errors)


# -- translation into HM --------------------------------------------------------

def embed(f: JMFormula) -> syntax.Formula:
    match f:
        case Atom(name):
            return syntax.Atom(name)
        case Impl(a, b):
            return syntax.Impl(embed(a), embed(b))
        case Box(a):
            return syntax.Box((), embed(a))
    raise TypeError(f"not a JM formula: {f!r}")


def _valid(f: JMFormula) -> syntax.Valid:
    return syntax.Valid((), embed(f))


class _Translator:
    def __init__(self, supply: LabelSupply):
        self.supply = supply

    def infer(self, p, delta, gamma, dl, gl) -> tuple[hm.Proof, JMFormula]:
        match p:
            case Hyp(i):
                return hm.Assume(gl[i], embed(gamma[i])), gamma[i]
            case HypStar(i):
                return hm.VE(hm.Assume(dl[i], _valid(delta[i])), ()), delta[i]
            case ImplE(major, minor):
                m, f = self.infer(major, delta, gamma, dl, gl)
                return hm.ImplE(m, self.check(minor, delta, gamma, dl, gl, f.left)), f.right
            case BoxE(major, minor):
                m, f = self.infer(major, delta, gamma, dl, gl)
                lab = self.supply.fresh("d")
                n, c = self.infer(minor, delta + (f.body,), gamma, dl + (lab,), gl)
                return hm.BoxE(m, lab, _valid(f.body), n), c
        raise _CannotInfer

    def check(self, p, delta, gamma, dl, gl, goal) -> hm.Proof:
        match p:
            case ImplI(body):
                lab = self.supply.fresh("g")
                inner = self.check(body, delta, gamma + (goal.left,), dl, gl + (lab,), goal.right)
                return hm.ImplI(lab, embed(goal.left), inner)
            case BoxI(body):
                return hm.BoxI((), self.check(body, delta, (), dl, (), goal.body))
            case BoxE(major, minor):
                m, f = self.infer(major, delta, gamma, dl, gl)
                lab = self.supply.fresh("d")
                n = self.check(minor, delta + (f.body,), gamma, dl + (lab,), gl, goal)
                return hm.BoxE(m, lab, _valid(f.body), n)
            case ImplE(major, minor):
                try:
                    m, f = self.infer(major, delta, gamma, dl, gl)
                except _CannotInfer:
                    n, a = self.infer(minor, delta, gamma, dl, gl)
                    return hm.ImplE(self.check(major, delta, gamma, dl, gl, Impl(a, goal)), n)
                return hm.ImplE(m, self.check(minor, delta, gamma, dl, gl, f.left))
        return self.infer(p, delta, gamma, dl, gl)[0]


def jm_to_hm(p: JMProof, goal: JMSequent) -> hm.Proof:
    """Translate a derivation of ``goal`` into HM.

    Gamma entry ``i`` becomes the open level-0 class ``g{i}`` and delta entry
    ``i`` the open level-1 class ``d{i}`` of ``(valid () B)``.  Raises
    ``ProofCheckError`` if ``p`` does not derive ``goal``.
    """
    jm_check(p, goal)
    gl = tuple(f"g{i}" for i in range(len(goal.gamma)))
    dl = tuple(f"d{i}" for i in range(len(goal.delta)))
    t = _Translator(LabelSupply(gl + dl))
    return t.check(p, goal.delta, goal.gamma, dl, gl, goal.conclusion)


def expected_opens(goal: JMSequent) -> set[tuple[str, syntax.Formula]]:
    """Every class a translation of a derivation of ``goal`` may leave open."""
    return ({(f"g{i}", embed(f)) for i, f in enumerate(goal.gamma)}
            | {(f"d{i}", _valid(f)) for i, f in enumerate(goal.delta)})


__all__ = [
    "Atom", "Impl", "Box", "JMFormula", "JMSequent", "Hyp", "HypStar", "ImplI", "ImplE",
    "BoxI", "BoxE", "JMProof", "JM_ERROR_KINDS", "jm_check", "jm_check_errors", "jm_to_hm",
    "embed", "expected_opens", "parse_jm_file", "parse_jm_formula", "print_jm_proof",
    "jm_formula_from_sexpr", "jm_proof_from_sexpr", "sequent_from_sexpr",
]
