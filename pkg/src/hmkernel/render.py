"""Plain-text rendering of proof trees.

One node per line, indented two spaces per level, conclusion last::

    impI [x: A]  =>  (imp A A)
      assume x  =>  A

Discharge sites carry ``[label: formula]`` markers.  Rendering never checks
the proof; a conclusion that cannot be computed is shown as ``?``.
"""

from __future__ import annotations

from .normalizer import conclusion
from .proof import Assume, BoxE, DisjE, Proof, bindings, children, rule_name
from .syntax import Disj, Formula, print_formula


def _safe_conclusion(p: Proof, memo: dict) -> Formula | None:
    try:
        return conclusion(p, memo)
    except (AttributeError, TypeError, ValueError):
        return None


def _show(f: Formula | None) -> str:
    return "?" if f is None else print_formula(f)


def _markers(p: Proof, memo: dict) -> list[str]:
    if isinstance(p, DisjE):
        major = _safe_conclusion(p.major, memo)
        left, right = (major.left, major.right) if isinstance(major, Disj) else (None, None)
        return [f"[{p.left_label}: {_show(left)}]", f"[{p.right_label}: {_show(right)}]"]
    return [f"[{lab}: {_show(f)}]" for lab, f, _ in bindings(p)]


def render(p: Proof, indent: str = "  ") -> str:
    memo: dict = {}
    lines: list[str] = []

    def go(node: Proof, depth: int) -> None:
        head = rule_name(node)
        if isinstance(node, Assume):
            head += f" {node.label}"
        marks = _markers(node, memo)
        if marks:
            head += " " + " ".join(marks)
        lines.append(f"{indent * depth}{head}  =>  {_show(_safe_conclusion(node, memo))}")
        for c in children(node):
            go(c, depth + 1)

    go(p, 0)
    return "\n".join(lines)


__all__ = ["render"]
