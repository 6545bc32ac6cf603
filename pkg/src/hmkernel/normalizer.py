"""Detours, permutations and normalisation.

A *maximal formula* is the conclusion of an introduction that is the major
premise of an elimination.  A *maximal segment* is a run of occurrences of
one formula passed down through minor premises of ``orE`` (and ``boxE``,
unless disabled) whose last occurrence is the major premise of an
elimination.  Both are reported at the elimination node where they end.

Termination measure
-------------------
Each redex has a degree (the degree of the maximal formula, or of the
segment formula) and a weight: 1 for a detour, and for a permutation the
number of formula occurrences in its segment tree, that is the ``orE`` /
``boxE`` nodes on the way up plus the tops where the segment starts.  The
measure of a proof is ``(d, n)`` with ``d`` the highest redex degree and
``n`` the total weight of the redexes of degree ``d``.

``bot`` is treated like an introduction here: an elimination applied to the
conclusion of ``botE`` is a detour, contracted by letting ``botE`` conclude
the eliminated formula directly.  Without it, permuting ``botE`` over a
segment could expose a fresh segment of higher degree below.

The strategy picks a redex of degree ``d`` such that

* no other degree-``d`` redex sits inside material the step duplicates
  (minor premises that get copied, the premise of the introduction for
  ``orE``/``boxE`` detours, and the minor deductions fed to uses of the
  discharged validity), and
* the node itself is not part of the segment of another degree-``d``
  redex (reducing it first could lengthen that segment).

Among the eligible ones the first in post-order (leftmost-innermost) wins.
With this choice every step lowers the measure lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .proof import (
    Assume, BoxE, BoxI, ConjE1, ConjE2, ConjI, DisjE, DisjI1, DisjI2, FalsumE, ImplE,
    ImplI, LabelSupply, Path, Proof, ProofError, VE, VI, children, format_path,
    fresh_relabel, graft, iter_nodes, replace_at, subproof_at, with_children,
)
from .syntax import Atom, Box, Conj, Disj, Formula, Impl, Valid, degree

DETOUR_KINDS = ("DetourConj", "DetourImpl", "DetourDisj", "DetourV", "DetourBox",
                "DetourBoxVacuous", "DetourFalsum")
PERMUTE_KINDS = ("PermuteDisj", "PermuteBox")
REDEX_KINDS = DETOUR_KINDS + PERMUTE_KINDS

_HOLE = Atom("hole")

_E_NODES = (ConjE1, ConjE2, DisjE, ImplE, FalsumE, VE, BoxE)


class Measure(NamedTuple):
    d: int
    n: int

    def __str__(self):
        return f"({self.d},{self.n})"


@dataclass(frozen=True)
class Redex:
    kind: str
    path: Path
    degree: int = 0
    weight: int = 1

    def __str__(self):
        return f"{self.kind} at {format_path(self.path)} (degree {self.degree})"


@dataclass(frozen=True)
class Step:
    redex: Redex
    measure_before: Measure
    measure_after: Measure
    proof_after: Proof = field(repr=False)

    def to_json(self, index: int) -> dict:
        return {
            "step": index,
            "kind": self.redex.kind,
            "path": list(self.redex.path),
            "degree": self.redex.degree,
            "measure_before": list(self.measure_before),
            "measure_after": list(self.measure_after),
        }


class FuelExhausted(RuntimeError):
    def __init__(self, fuel: int, trace: list[Step]):
        self.trace = trace
        super().__init__(f"no normal form within {fuel} steps")


class MeasureNotDecreasing(AssertionError):
    pass


class RedexStale(ProofError):
    def __init__(self, detail: str, path: Path = ()):
        super().__init__("RedexStale", detail, path)


# -- conclusions without checking --------------------------------------------

def conclusion(p: Proof, memo: dict[int, Formula] | None = None) -> Formula:
    """Conclusion of a (presumed correct) proof, computed structurally."""
    memo = {} if memo is None else memo
    key = id(p)
    if key in memo:
        return memo[key]
    match p:
        case Assume(_, f):
            out = f
        case ConjI(l, r):
            out = Conj(conclusion(l, memo), conclusion(r, memo))
        case ConjE1(q):
            out = conclusion(q, memo).left
        case ConjE2(q):
            out = conclusion(q, memo).right
        case DisjI1(o, q):
            out = Disj(conclusion(q, memo), o)
        case DisjI2(o, q):
            out = Disj(o, conclusion(q, memo))
        case DisjE(_, _, l, _, _):
            out = conclusion(l, memo)
        case ImplI(_, a, q):
            out = Impl(a, conclusion(q, memo))
        case ImplE(m, _):
            out = conclusion(m, memo).right
        case FalsumE(t, _):
            out = t
        case VI(d, q):
            out = Valid(tuple(f for _, f in d), conclusion(q, memo))
        case VE(m, _):
            out = conclusion(m, memo).body
        case BoxI(d, q):
            out = Box(tuple(f for _, f in d), conclusion(q, memo))
        case BoxE(_, _, _, n):
            out = conclusion(n, memo)
        case _:
            raise TypeError(f"not a proof node: {p!r}")
    memo[key] = out
    return out


def _has_leaf(p: Proof, label: str) -> bool:
    return any(isinstance(n, Assume) and n.label == label for _, n in iter_nodes(p))


def redex_kind(node: Proof, permute_box: bool = True) -> str | None:
    """Kind of redex ending at ``node``, or None."""
    if not isinstance(node, _E_NODES):
        return None
    major = children(node)[0]
    match node, major:
        case (ConjE1() | ConjE2(), ConjI()):
            return "DetourConj"
        case (ImplE(), ImplI()):
            return "DetourImpl"
        case (DisjE(), DisjI1() | DisjI2()):
            return "DetourDisj"
        case (VE(), VI()):
            return "DetourV"
        case (BoxE(), BoxI()):
            return "DetourBox" if _has_leaf(node.minor, node.label) else "DetourBoxVacuous"
    if isinstance(node, VE):
        return None
    if isinstance(major, FalsumE):
        return "DetourFalsum"
    if isinstance(major, DisjE):
        return "PermuteDisj"
    if isinstance(major, BoxE) and permute_box:
        return "PermuteBox"
    return None


def _segment_paths(major: Proof, path: Path, permute_box: bool) -> list[Path]:
    """Paths of all occurrences in the segment tree ending at ``major``."""
    out = [path]
    if isinstance(major, DisjE):
        out += _segment_paths(major.left, path + (1,), permute_box)
        out += _segment_paths(major.right, path + (2,), permute_box)
    elif isinstance(major, BoxE) and permute_box:
        out += _segment_paths(major.minor, path + (1,), permute_box)
    return out


@dataclass
class _Found:
    redex: Redex
    node: Proof
    segment: list[Path]          # occurrences of the maximal segment/formula
    duplicated: list[Path]       # subtrees this step copies


def _analyze(p: Proof, permute_box: bool) -> list[_Found]:
    memo: dict[int, Formula] = {}
    found = []
    for path, node in iter_nodes(p):
        kind = redex_kind(node, permute_box)
        if kind is None:
            continue
        major = children(node)[0]
        deg = degree(conclusion(major, memo))
        if kind in PERMUTE_KINDS:
            segment = _segment_paths(major, path + (0,), permute_box)
            dup = [path + (i,) for i in range(1, len(children(node)))]
        else:
            segment = [path + (0,)]
            if kind == "DetourImpl":
                dup = [path + (1,)]
            elif kind == "DetourV":
                dup = [path + (i,) for i in range(1, len(children(node)))]
            elif kind == "DetourDisj":
                dup = [path + (0, 0)]
            elif kind == "DetourBox":
                dup = [path + (0, 0)]
                for sub, q in iter_nodes(node.minor, path + (1,)):
                    if isinstance(q, VE) and isinstance(q.major, Assume) and q.major.label == node.label:
                        dup += [sub + (i,) for i in range(1, len(q.minors) + 1)]
            else:
                dup = []
        found.append(_Found(Redex(kind, path, deg, len(segment)), node, segment, dup))
    return found


def _measure_of(found: list[_Found]) -> Measure:
    if not found:
        return Measure(0, 0)
    d = max(f.redex.degree for f in found)
    return Measure(d, sum(f.redex.weight for f in found if f.redex.degree == d))


def _postorder_key(path: Path):
    return path + (1 << 30,)


def _select(found: list[_Found]) -> _Found | None:
    if not found:
        return None
    d = max(f.redex.degree for f in found)
    top = [f for f in found if f.redex.degree == d]
    in_segments = {s for f in top for s in f.segment}
    eligible = []
    for f in top:
        if f.redex.path in in_segments:
            continue
        blocked = any(
            other is not f and other.redex.path[:len(dp)] == dp
            for dp in f.duplicated for other in top
        )
        if not blocked:
            eligible.append(f)
    if not eligible:
        raise RuntimeError("no eligible redex of maximal degree; strategy invariant broken")
    return min(eligible, key=lambda f: _postorder_key(f.redex.path))


# -- public API ------------------------------------------------------------------

def find_redexes(p: Proof, permute_box: bool = True) -> list[Redex]:
    """Every maximal formula and maximal segment, in pre-order of their end nodes."""
    return [f.redex for f in _analyze(p, permute_box)]


def select_redex(p: Proof, permute_box: bool = True) -> Redex | None:
    f = _select(_analyze(p, permute_box))
    return None if f is None else f.redex


def measure(p: Proof, permute_box: bool = True) -> Measure:
    return _measure_of(_analyze(p, permute_box))


def is_normal(p: Proof, permute_box: bool = True) -> bool:
    return not _analyze(p, permute_box)


def _contract(node: Proof, kind: str, supply: LabelSupply) -> Proof:
    match kind, node:
        case "DetourConj", ConjE1(ConjI(a, _)):
            return a
        case "DetourConj", ConjE2(ConjI(_, b)):
            return b
        case "DetourImpl", ImplE(ImplI(lab, _, body), minor):
            return graft(body, {lab: minor}, supply)
        case "DetourDisj", DisjE(DisjI1(_, q), la, left, _, _):
            return graft(left, {la: q}, supply)
        case "DetourDisj", DisjE(DisjI2(_, q), _, _, lb, right):
            return graft(right, {lb: q}, supply)
        case "DetourV", VE(VI(ds, body), minors):
            return graft(body, {lab: m for (lab, _), m in zip(ds, minors)}, supply)
        case "DetourBox", BoxE(BoxI(ds, body), lab, _, minor):
            return _unfold_box(minor, lab, ds, body, supply)
        case "DetourBoxVacuous", BoxE(BoxI(), _, _, minor):
            return minor
        case "DetourFalsum", _:
            return FalsumE(conclusion(node), children(node)[0].premise)
        case "PermuteDisj", _:
            major: DisjE = children(node)[0]
            extras = children(node)[1:]
            left = with_children(node, [major.left, *extras])
            hole = Assume(supply.fresh("hole"), _HOLE)
            copy = fresh_relabel(with_children(node, [hole, *extras]), supply)
            right = replace_at(copy, (0,), major.right)
            return DisjE(major.major, major.left_label, left, major.right_label, right)
        case "PermuteBox", _:
            major: BoxE = children(node)[0]
            extras = children(node)[1:]
            new = supply.fresh(major.label)
            minor = graft(major.minor, {major.label: Assume(new, major.hypothesis)}, supply)
            return BoxE(major.major, new, major.hypothesis, with_children(node, [minor, *extras]))
    raise RedexStale(f"{kind} does not match node {type(node).__name__}")


def _unfold_box(minor: Proof, lab: str, ds, body: Proof, supply: LabelSupply) -> Proof:
    """Replace every use ``VE(lab, sigmas)`` in ``minor`` by ``body`` fed with ``sigmas``."""

    def walk(node: Proof) -> Proof:
        if isinstance(node, VE) and isinstance(node.major, Assume) and node.major.label == lab:
            sigmas = [walk(s) for s in node.minors]
            copy = fresh_relabel(body, supply)
            return graft(copy, {dl: s for (dl, _), s in zip(ds, sigmas)}, supply)
        cs = children(node)
        new = [walk(c) for c in cs]
        if all(a is b for a, b in zip(new, cs)):
            return node
        return with_children(node, new)

    return walk(minor)


def reduce_once(p: Proof, r: Redex, supply: LabelSupply | None = None,
                permute_box: bool = True) -> Proof:
    """Contract redex ``r`` of ``p``; raise ``RedexStale`` if it is not there."""
    supply = LabelSupply.for_proofs(p) if supply is None else supply
    try:
        node = subproof_at(p, r.path)
    except ProofError:
        raise RedexStale("path does not exist", r.path) from None
    kind = redex_kind(node, permute_box)
    if kind != r.kind:
        raise RedexStale(f"node at {format_path(r.path)} is {kind or 'not a redex'}, not {r.kind}",
                         r.path)
    return replace_at(p, r.path, _contract(node, r.kind, supply))


def normalize(p: Proof, fuel: int = 100_000, permute_box: bool = True,
              supply: LabelSupply | None = None) -> tuple[Proof, list[Step]]:
    """Reduce ``p`` to normal form, recording every step.

    Raises ``FuelExhausted`` after ``fuel`` steps and ``MeasureNotDecreasing``
    if a step fails to lower the measure.  With ``permute_box`` off the
    measure is still recorded but not enforced: a vacuous box detour sitting
    on an unpermuted box segment can expose a redex of any degree, so only
    the fuel bound guarantees termination there.
    """
    supply = LabelSupply.for_proofs(p) if supply is None else supply
    trace: list[Step] = []
    found = _analyze(p, permute_box)
    before = _measure_of(found)
    while True:
        chosen = _select(found)
        if chosen is None:
            return p, trace
        if len(trace) >= fuel:
            raise FuelExhausted(fuel, trace)
        p = replace_at(p, chosen.redex.path, _contract(chosen.node, chosen.redex.kind, supply))
        found = _analyze(p, permute_box)
        after = _measure_of(found)
        if permute_box and not after < before:
            raise MeasureNotDecreasing(
                f"step {len(trace) + 1} ({chosen.redex}) took measure {before} to {after}")
        trace.append(Step(chosen.redex, before, after, p))
        before = after
