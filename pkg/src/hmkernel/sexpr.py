"""Minimal s-expression reader shared by the formula, proof and JM grammars.

Symbols are any run of characters other than whitespace, parentheses and
``;`` (which starts a comment running to end of line).  Every node remembers
where it started so that grammar errors can point at the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class ParseError(ValueError):
    """Syntax error in textual input; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Symbol:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    line: int
    col: int

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


SExpr = Union[Symbol, SList]


def _tokens(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col = line + 1, 1
            i += 1
        elif c.isspace():
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, line, col
            i += 1
            col += 1
        else:
            start, scol = i, col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            yield text[start:i], line, scol


def read_all(text: str) -> list[SExpr]:
    """Read every top-level s-expression in ``text``."""
    stack: list[tuple[list, int, int]] = []
    out: list[SExpr] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else out).append(node)
        else:
            node = Symbol(tok, line, col)
            (stack[-1][0] if stack else out).append(node)
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unclosed '('", l0, c0)
    return out


def read_one(text: str) -> SExpr:
    """Read exactly one top-level s-expression."""
    forms = read_all(text)
    if not forms:
        raise ParseError("empty input", 1, 1)
    if len(forms) > 1:
        extra = forms[1]
        raise ParseError("unexpected trailing input", extra.line, extra.col)
    return forms[0]


def expect_list(e: SExpr, what: str) -> SList:
    if not isinstance(e, SList):
        raise ParseError(f"expected {what}, got symbol {e.name!r}", e.line, e.col)
    return e


def expect_symbol(e: SExpr, what: str) -> Symbol:
    if not isinstance(e, Symbol):
        raise ParseError(f"expected {what}, got a list", e.line, e.col)
    return e


def head(e: SList) -> str | None:
    """Name of the leading symbol of a list form, if any."""
    if e.items and isinstance(e.items[0], Symbol):
        return e.items[0].name
    return None
