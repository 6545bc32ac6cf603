"""Natural deduction trees with labelled assumption classes.

An assumption class is the set of ``Assume`` leaves sharing a label.  A label
is bound by at most one rule node per proof (no shadowing); a class may be
bound with zero leaves, which is vacuous discharge.

Child order (used by node paths) follows the textual grammar:

    DisjE  -> major, left, right
    ImplE  -> major, minor
    VE     -> major, minor_1 ... minor_n
    BoxE   -> major, minor
    ConjI  -> left, right
    others -> their single premise
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .sexpr import (
    ParseError, SExpr, SList, Symbol, expect_list, expect_symbol, head, read_one,
)
from .syntax import Formula, formula_from_sexpr, print_formula

LABEL_RE = re.compile(r"[A-Za-z0-9_]+\Z")

Path = tuple[int, ...]


class ProofError(ValueError):
    """Structural defect in a proof tree (labels, classes, paths)."""

    def __init__(self, kind: str, detail: str, path: Path = ()):
        self.kind = kind
        self.path = tuple(path)
        self.detail = detail
        super().__init__(f"{kind}: {detail}")


# -- nodes -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Assume:
    label: str
    formula: Formula


@dataclass(frozen=True, slots=True)
class ConjI:
    left: "Proof"
    right: "Proof"


@dataclass(frozen=True, slots=True)
class ConjE1:
    premise: "Proof"


@dataclass(frozen=True, slots=True)
class ConjE2:
    premise: "Proof"


@dataclass(frozen=True, slots=True)
class DisjI1:
    """Left injection; ``other`` is the right disjunct."""

    other: Formula
    premise: "Proof"


@dataclass(frozen=True, slots=True)
class DisjI2:
    """Right injection; ``other`` is the left disjunct."""

    other: Formula
    premise: "Proof"


@dataclass(frozen=True, slots=True)
class DisjE:
    major: "Proof"
    left_label: str
    left: "Proof"
    right_label: str
    right: "Proof"


@dataclass(frozen=True, slots=True)
class ImplI:
    label: str
    antecedent: Formula
    body: "Proof"


@dataclass(frozen=True, slots=True)
class ImplE:
    major: "Proof"
    minor: "Proof"


@dataclass(frozen=True, slots=True)
class FalsumE:
    target: Formula
    premise: "Proof"


@dataclass(frozen=True, slots=True)
class VI:
    discharges: tuple[tuple[str, Formula], ...]
    premise: "Proof"

    def __post_init__(self):
        if not isinstance(self.discharges, tuple):
            object.__setattr__(self, "discharges", tuple(tuple(d) for d in self.discharges))


@dataclass(frozen=True, slots=True)
class VE:
    major: "Proof"
    minors: tuple["Proof", ...]

    def __post_init__(self):
        if not isinstance(self.minors, tuple):
            object.__setattr__(self, "minors", tuple(self.minors))


@dataclass(frozen=True, slots=True)
class BoxI:
    discharges: tuple[tuple[str, Formula], ...]
    premise: "Proof"

    def __post_init__(self):
        if not isinstance(self.discharges, tuple):
            object.__setattr__(self, "discharges", tuple(tuple(d) for d in self.discharges))


@dataclass(frozen=True, slots=True)
class BoxE:
    major: "Proof"
    label: str
    hypothesis: Formula
    minor: "Proof"


Proof = Union[Assume, ConjI, ConjE1, ConjE2, DisjI1, DisjI2, DisjE, ImplI, ImplE,
              FalsumE, VI, VE, BoxI, BoxE]

E_RULES = (ConjE1, ConjE2, DisjE, ImplE, FalsumE, VE, BoxE)
I_RULES = (ConjI, DisjI1, DisjI2, ImplI, VI, BoxI)


def children(p: Proof) -> tuple[Proof, ...]:
    match p:
        case Assume():
            return ()
        case ConjI(l, r):
            return (l, r)
        case ConjE1(q) | ConjE2(q) | DisjI1(_, q) | DisjI2(_, q) | FalsumE(_, q):
            return (q,)
        case ImplI(_, _, q) | VI(_, q) | BoxI(_, q):
            return (q,)
        case DisjE(m, _, l, _, r):
            return (m, l, r)
        case ImplE(m, n):
            return (m, n)
        case VE(m, ns):
            return (m, *ns)
        case BoxE(m, _, _, n):
            return (m, n)
    raise TypeError(f"not a proof node: {p!r}")


def with_children(p: Proof, cs: tuple[Proof, ...] | list[Proof]) -> Proof:
    """Rebuild ``p`` with replaced children (same order as ``children``)."""
    match p:
        case Assume():
            return p
        case ConjI():
            return ConjI(cs[0], cs[1])
        case ConjE1():
            return ConjE1(cs[0])
        case ConjE2():
            return ConjE2(cs[0])
        case DisjI1(f, _):
            return DisjI1(f, cs[0])
        case DisjI2(f, _):
            return DisjI2(f, cs[0])
        case FalsumE(f, _):
            return FalsumE(f, cs[0])
        case ImplI(lab, f, _):
            return ImplI(lab, f, cs[0])
        case VI(d, _):
            return VI(d, cs[0])
        case BoxI(d, _):
            return BoxI(d, cs[0])
        case DisjE(_, la, _, lb, _):
            return DisjE(cs[0], la, cs[1], lb, cs[2])
        case ImplE():
            return ImplE(cs[0], cs[1])
        case VE():
            return VE(cs[0], tuple(cs[1:]))
        case BoxE(_, lab, h, _):
            return BoxE(cs[0], lab, h, cs[1])
    raise TypeError(f"not a proof node: {p!r}")


def bindings(p: Proof) -> list[tuple[str, Formula | None, tuple[int, ...]]]:
    """Labels bound at ``p``: (label, recorded formula or None, child indices in scope)."""
    match p:
        case ImplI(lab, f, _):
            return [(lab, f, (0,))]
        case DisjE(_, la, _, lb, _):
            return [(la, None, (1,)), (lb, None, (2,))]
        case VI(d, _) | BoxI(d, _):
            return [(lab, f, (0,)) for lab, f in d]
        case BoxE(_, lab, h, _):
            return [(lab, h, (1,))]
    return []


def rule_name(p: Proof) -> str:
    return _TAG_OF[type(p)]


def iter_nodes(p: Proof, path: Path = ()) -> Iterator[tuple[Path, Proof]]:
    """Pre-order traversal yielding (path, node)."""
    stack = [(path, p)]
    while stack:
        path, node = stack.pop()
        yield path, node
        cs = children(node)
        for i in range(len(cs) - 1, -1, -1):
            stack.append((path + (i,), cs[i]))


def size(p: Proof) -> int:
    return sum(1 for _ in iter_nodes(p))


def subproof_at(p: Proof, path: Path) -> Proof:
    for i in path:
        cs = children(p)
        if not 0 <= i < len(cs):
            raise ProofError("UnknownPath", f"no child {i} at this node", path)
        p = cs[i]
    return p


def replace_at(p: Proof, path: Path, new: Proof) -> Proof:
    if not path:
        return new
    cs = list(children(p))
    i = path[0]
    if not 0 <= i < len(cs):
        raise ProofError("UnknownPath", f"no child {i} at this node", path)
    cs[i] = replace_at(cs[i], path[1:], new)
    return with_children(p, cs)


def all_labels(p: Proof) -> set[str]:
    out: set[str] = set()
    for _, node in iter_nodes(p):
        if isinstance(node, Assume):
            out.add(node.label)
        for lab, _, _ in bindings(node):
            out.add(lab)
    return out


def format_path(path: Path) -> str:
    """Render a node path; the root is ``0`` and children are appended: ``0.1.0``."""
    return ".".join(["0", *map(str, path)])


# -- assumption multisets ----------------------------------------------------

class AssumptionSet:
    """Multiset of (label, formula) assumption classes with leaf counts."""

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[tuple[str, Formula], int] | None = None):
        self._counts = Counter({k: v for k, v in (counts or {}).items() if v > 0})

    @classmethod
    def single(cls, label: str, f: Formula) -> "AssumptionSet":
        return cls({(label, f): 1})

    def __add__(self, other: "AssumptionSet") -> "AssumptionSet":
        out = AssumptionSet()
        out._counts = self._counts + other._counts
        return out

    def scaled(self, k: int) -> "AssumptionSet":
        return AssumptionSet({key: v * k for key, v in self._counts.items()})

    def without(self, *labels: str) -> "AssumptionSet":
        drop = set(labels)
        return AssumptionSet({k: v for k, v in self._counts.items() if k[0] not in drop})

    def formulas_of(self, label: str) -> list[Formula]:
        return [f for (lab, f) in self._counts if lab == label]

    def count(self, label: str, f: Formula) -> int:
        return self._counts.get((label, f), 0)

    def labels(self) -> set[str]:
        return {lab for lab, _ in self._counts}

    def support(self) -> set[tuple[str, Formula]]:
        return set(self._counts)

    def items(self):
        return sorted(self._counts.items(), key=lambda kv: (kv[0][0], print_formula(kv[0][1])))

    def conflicts(self) -> list[str]:
        """Labels carried by more than one formula."""
        seen: dict[str, Formula] = {}
        bad = []
        for lab, f in self._counts:
            if lab in seen and seen[lab] != f and lab not in bad:
                bad.append(lab)
            seen.setdefault(lab, f)
        return sorted(bad)

    def __len__(self) -> int:
        return len(self._counts)

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, AssumptionSet) and self._counts == other._counts

    def __repr__(self) -> str:
        body = ", ".join(f"({lab}, {print_formula(f)}): {n}" for (lab, f), n in self.items())
        return "{" + body + "}"


def _check_unique_bindings(p: Proof) -> None:
    seen: dict[str, Path] = {}
    for path, node in iter_nodes(p):
        for lab, _, _ in bindings(node):
            if lab in seen:
                raise ProofError(
                    "DuplicateLabelBinding",
                    f"label {lab} bound at {format_path(seen[lab])} and {format_path(path)}",
                    path,
                )
            seen[lab] = path


def open_assumptions(p: Proof) -> AssumptionSet:
    """Open assumption classes of ``p`` with their leaf counts."""
    _check_unique_bindings(p)

    def walk(node: Proof, path: Path) -> AssumptionSet:
        if isinstance(node, Assume):
            return AssumptionSet.single(node.label, node.formula)
        cs = children(node)
        parts = [walk(c, path + (i,)) for i, c in enumerate(cs)]
        for lab, _, scope in bindings(node):
            for i in scope:
                fs = parts[i].formulas_of(lab)
                if len(fs) > 1:
                    raise ProofError("ClassFormulaMismatch",
                                     f"class {lab} carries several formulas", path)
                parts[i] = parts[i].without(lab)
        total = AssumptionSet()
        for part in parts:
            total = total + part
        bad = total.conflicts()
        if bad:
            raise ProofError("ClassFormulaMismatch",
                             f"class {bad[0]} carries several formulas", path)
        return total

    return walk(p, ())


# -- label hygiene and grafting -----------------------------------------------

_SUFFIX = re.compile(r"_\d+\Z")


class LabelSupply:
    """Deterministic source of labels not yet used.

    Seed it with every label already in play; ``fresh`` never returns one of
    those, nor any label it returned before.
    """

    def __init__(self, used=(), start: int = 1):
        self.used = set(used)
        self.counter = start

    @classmethod
    def for_proofs(cls, *proofs: Proof) -> "LabelSupply":
        used: set[str] = set()
        for p in proofs:
            used |= all_labels(p)
        return cls(used)

    def fresh(self, base: str = "h") -> str:
        stem = _SUFFIX.sub("", base) or "h"
        while True:
            name = f"{stem}_{self.counter}"
            self.counter += 1
            if name not in self.used:
                self.used.add(name)
                return name


def fresh_relabel(p: Proof, supply: LabelSupply) -> Proof:
    """Alpha-rename every bound label of ``p``; open labels are kept."""

    def walk(node: Proof, env: dict[str, str]) -> Proof:
        match node:
            case Assume(lab, f):
                return Assume(env[lab], f) if lab in env else node
            case ImplI(lab, f, body):
                new = supply.fresh(lab)
                return ImplI(new, f, walk(body, {**env, lab: new}))
            case DisjE(m, la, l, lb, r):
                na, nb = supply.fresh(la), supply.fresh(lb)
                return DisjE(walk(m, env), na, walk(l, {**env, la: na}),
                             nb, walk(r, {**env, lb: nb}))
            case VI(d, q) | BoxI(d, q):
                ren = {lab: supply.fresh(lab) for lab, _ in d}
                nd = tuple((ren[lab], f) for lab, f in d)
                return type(node)(nd, walk(q, {**env, **ren}))
            case BoxE(m, lab, h, n):
                new = supply.fresh(lab)
                return BoxE(walk(m, env), new, h, walk(n, {**env, lab: new}))
        return with_children(node, [walk(c, env) for c in children(node)])

    return walk(p, {})


def graft(p: Proof, binds: Mapping[str, Proof], supply: LabelSupply) -> Proof:
    """Replace each open leaf labelled ``l`` by a freshly relabelled copy of ``binds[l]``.

    Targets with no open leaves are a no-op (vacuous class).  A target that
    names a label bound inside ``p`` is a caller error.
    """
    if not binds:
        return p
    for path, node in iter_nodes(p):
        for lab, _, _ in bindings(node):
            if lab in binds:
                raise ProofError("UnknownLabel",
                                 f"graft target {lab} is bound inside the proof", path)

    def walk(node: Proof) -> Proof:
        if isinstance(node, Assume):
            if node.label in binds:
                return fresh_relabel(binds[node.label], supply)
            return node
        cs = children(node)
        new = [walk(c) for c in cs]
        if all(a is b for a, b in zip(new, cs)):
            return node
        return with_children(node, new)

    return walk(p)


# -- textual form --------------------------------------------------------------

_TAG_OF = {
    Assume: "assume", ConjI: "andI", ConjE1: "andE1", ConjE2: "andE2",
    DisjI1: "orI1", DisjI2: "orI2", DisjE: "orE", ImplI: "impI", ImplE: "impE",
    FalsumE: "botE", VI: "VI", VE: "VE", BoxI: "boxI", BoxE: "boxE",
}


def print_proof(p: Proof, indent: int | None = None) -> str:
    """Canonical s-expression; with ``indent`` each subproof starts a new line."""

    def pf(f: Formula) -> str:
        return print_formula(f)

    def disch(d) -> str:
        return "(" + " ".join(f"({lab} {pf(f)})" for lab, f in d) + ")"

    def go(node: Proof, depth: int) -> str:
        tag = _TAG_OF[type(node)]
        if isinstance(node, Assume):
            return f"(assume {node.label} {pf(node.formula)})"
        sep = " " if indent is None else "\n" + " " * (indent * (depth + 1))

        def sub(q: Proof) -> str:
            return go(q, depth + 1)

        match node:
            case ConjI(l, r):
                parts = [sub(l), sub(r)]
                head_ = tag
            case ConjE1(q) | ConjE2(q):
                parts, head_ = [sub(q)], tag
            case DisjI1(f, q) | DisjI2(f, q):
                parts, head_ = [sub(q)], f"{tag} {pf(f)}"
            case FalsumE(f, q):
                parts, head_ = [sub(q)], f"{tag} {pf(f)}"
            case DisjE(m, la, l, lb, r):
                parts = [sub(m), f"({la})", sub(l), f"({lb})", sub(r)]
                head_ = tag
            case ImplI(lab, f, q):
                parts, head_ = [sub(q)], f"{tag} {lab} {pf(f)}"
            case ImplE(m, n):
                parts, head_ = [sub(m), sub(n)], tag
            case VI(d, q) | BoxI(d, q):
                parts, head_ = [sub(q)], f"{tag} {disch(d)}"
            case VE(m, ns):
                joiner = " " if indent is None else "\n" + " " * (indent * (depth + 1) + 1)
                inner = joiner.join(go(n, depth + 1) for n in ns)
                parts, head_ = [sub(m), f"({inner})"], tag
            case BoxE(m, lab, h, n):
                parts = [sub(m), f"({lab} {pf(h)})", sub(n)]
                head_ = tag
            case _:
                raise TypeError(f"not a proof node: {node!r}")
        return "(" + head_ + "".join(sep + s for s in parts) + ")"

    return go(p, 0)


def _label(e: SExpr) -> str:
    s = expect_symbol(e, "label")
    if not LABEL_RE.match(s.name):
        raise ParseError(f"invalid label {s.name!r}", s.line, s.col)
    return s.name


def _discharges(e: SExpr) -> tuple[tuple[str, Formula], ...]:
    lst = expect_list(e, "discharge list")
    out = []
    for item in lst.items:
        pair = expect_list(item, "(LABEL formula) pair")
        if len(pair) != 2:
            raise ParseError("discharge entry must be (LABEL formula)", pair.line, pair.col)
        out.append((_label(pair[0]), formula_from_sexpr(pair[1])))
    return tuple(out)


_ARITY = {
    "assume": 3, "andI": 3, "andE1": 2, "andE2": 2, "orI1": 3, "orI2": 3,
    "orE": 6, "impI": 4, "impE": 3, "botE": 3, "VI": 3, "VE": 3, "boxI": 3, "boxE": 4,
}


def proof_from_sexpr(e: SExpr) -> Proof:
    lst = expect_list(e, "proof")
    tag = head(lst)
    if tag not in _ARITY:
        raise ParseError(f"unknown proof rule {tag!r}", lst.line, lst.col)
    if len(lst) != _ARITY[tag]:
        raise ParseError(f"'{tag}' expects {_ARITY[tag] - 1} arguments", lst.line, lst.col)
    a = lst.items
    match tag:
        case "assume":
            return Assume(_label(a[1]), formula_from_sexpr(a[2]))
        case "andI":
            return ConjI(proof_from_sexpr(a[1]), proof_from_sexpr(a[2]))
        case "andE1":
            return ConjE1(proof_from_sexpr(a[1]))
        case "andE2":
            return ConjE2(proof_from_sexpr(a[1]))
        case "orI1":
            return DisjI1(formula_from_sexpr(a[1]), proof_from_sexpr(a[2]))
        case "orI2":
            return DisjI2(formula_from_sexpr(a[1]), proof_from_sexpr(a[2]))
        case "orE":
            la = expect_list(a[2], "(LABEL)")
            lb = expect_list(a[4], "(LABEL)")
            if len(la) != 1 or len(lb) != 1:
                raise ParseError("orE labels are written (LABEL)", lst.line, lst.col)
            return DisjE(proof_from_sexpr(a[1]), _label(la[0]), proof_from_sexpr(a[3]),
                         _label(lb[0]), proof_from_sexpr(a[5]))
        case "impI":
            return ImplI(_label(a[1]), formula_from_sexpr(a[2]), proof_from_sexpr(a[3]))
        case "impE":
            return ImplE(proof_from_sexpr(a[1]), proof_from_sexpr(a[2]))
        case "botE":
            return FalsumE(formula_from_sexpr(a[1]), proof_from_sexpr(a[2]))
        case "VI":
            return VI(_discharges(a[1]), proof_from_sexpr(a[2]))
        case "boxI":
            return BoxI(_discharges(a[1]), proof_from_sexpr(a[2]))
        case "VE":
            minors = expect_list(a[2], "list of minor premises")
            return VE(proof_from_sexpr(a[1]), tuple(proof_from_sexpr(m) for m in minors.items))
        case "boxE":
            hyp = expect_list(a[2], "(LABEL formula)")
            if len(hyp) != 2:
                raise ParseError("boxE hypothesis is written (LABEL formula)", hyp.line, hyp.col)
            return BoxE(proof_from_sexpr(a[1]), _label(hyp[0]), formula_from_sexpr(hyp[1]),
                        proof_from_sexpr(a[3]))
    raise AssertionError(tag)


def parse_proof(text: str) -> Proof:
    return proof_from_sexpr(read_one(text))
