"""Two-level formula language.

Level-0 formulas are those of intuitionist propositional logic (atoms,
``bot``, ``and``, ``or``, ``imp``) extended by the multi-grade box
``(box (G1 ... Gn) A)``.  The only level-1 formulas are validities
``(valid (G1 ... Gn) A)``; every component of any formula is level 0, so a
validity never occurs strictly below the root of a formula.

Contexts are ordered tuples that may repeat entries.  Order matters for
identity: ``(box (P Q) R)`` and ``(box (Q P) R)`` are different formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .sexpr import ParseError, SExpr, SList, Symbol, expect_list, head, read_one

ATOM_RE = re.compile(r"[A-Za-z0-9_]+\Z")
RESERVED = frozenset({"bot"})


class WellFormednessError(ValueError):
    """A syntactically valid term that breaks the level discipline."""

    kind = "LevelViolation"


def _require_level0(f: "Formula", where: str) -> None:
    if isinstance(f, Valid):
        raise WellFormednessError(f"level-1 formula {f} not allowed as {where}")


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.match(self.name) or self.name in RESERVED:
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Falsum:
    def __str__(self):
        return "bot"


@dataclass(frozen=True, slots=True)
class _Binary:
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        _require_level0(self.left, "a connective argument")
        _require_level0(self.right, "a connective argument")

    def __str__(self):
        return print_formula(self)


class Conj(_Binary):
    __slots__ = ()


class Disj(_Binary):
    __slots__ = ()


class Impl(_Binary):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class _Contextual:
    context: tuple["Formula", ...]
    body: "Formula"

    def __post_init__(self):
        if not isinstance(self.context, tuple):
            object.__setattr__(self, "context", tuple(self.context))
        for g in self.context:
            _require_level0(g, "a context entry")
        _require_level0(self.body, "a body")

    def __str__(self):
        return print_formula(self)


class Box(_Contextual):
    """Relative necessity: the body holds necessarily given the context."""

    __slots__ = ()


class Valid(_Contextual):
    """Validity of inferring the body from the context (level 1)."""

    __slots__ = ()


Formula = Union[Atom, Falsum, Conj, Disj, Impl, Box, Valid]

_BINARY_TAGS = {"and": Conj, "or": Disj, "imp": Impl}
_TAG_OF = {Conj: "and", Disj: "or", Impl: "imp", Box: "box", Valid: "valid"}


def level(f: Formula) -> int:
    return 1 if isinstance(f, Valid) else 0


def degree(f: Formula) -> int:
    """Number of connective occurrences in ``f``, context entries included."""
    match f:
        case Atom() | Falsum():
            return 0
        case Conj(l, r) | Disj(l, r) | Impl(l, r):
            return 1 + degree(l) + degree(r)
        case Box(ctx, body) | Valid(ctx, body):
            return 1 + sum(degree(g) for g in ctx) + degree(body)
    raise TypeError(f"not a formula: {f!r}")


def equals(f: Formula, g: Formula) -> bool:
    return f == g


def subformulas(f: Formula) -> Iterable[Formula]:
    """Immediate components of ``f``."""
    match f:
        case Conj(l, r) | Disj(l, r) | Impl(l, r):
            return (l, r)
        case Box(ctx, body) | Valid(ctx, body):
            return (*ctx, body)
    return ()


def print_formula(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case Falsum():
            return "bot"
        case Conj(l, r) | Disj(l, r) | Impl(l, r):
            return f"({_TAG_OF[type(f)]} {print_formula(l)} {print_formula(r)})"
        case Box(ctx, body) | Valid(ctx, body):
            inner = " ".join(print_formula(g) for g in ctx)
            return f"({_TAG_OF[type(f)]} ({inner}) {print_formula(body)})"
    raise TypeError(f"not a formula: {f!r}")


def formula_from_sexpr(e: SExpr) -> Formula:
    if isinstance(e, Symbol):
        if e.name == "bot":
            return Falsum()
        if not ATOM_RE.match(e.name):
            raise ParseError(f"invalid atom name {e.name!r}", e.line, e.col)
        return Atom(e.name)
    tag = head(e)
    if tag in _BINARY_TAGS:
        if len(e) != 3:
            raise ParseError(f"'{tag}' takes two arguments", e.line, e.col)
        return _BINARY_TAGS[tag](formula_from_sexpr(e[1]), formula_from_sexpr(e[2]))
    if tag in ("box", "valid"):
        if len(e) != 3:
            raise ParseError(f"'{tag}' takes a context list and a body", e.line, e.col)
        ctx = expect_list(e[1], "context list")
        cls = Box if tag == "box" else Valid
        return cls(tuple(formula_from_sexpr(g) for g in ctx.items), formula_from_sexpr(e[2]))
    raise ParseError(f"unknown formula constructor {tag!r}", e.line, e.col)


def parse_formula(text: str) -> Formula:
    """Parse one formula.

    Raises ``ParseError`` for malformed text and ``WellFormednessError`` when
    a validity appears below the root.
    """
    return formula_from_sexpr(read_one(text))


__all__ = [
    "Atom", "Falsum", "Conj", "Disj", "Impl", "Box", "Valid", "Formula",
    "WellFormednessError", "level", "degree", "equals", "subformulas",
    "print_formula", "parse_formula", "formula_from_sexpr",
]
