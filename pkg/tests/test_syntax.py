from __future__ import annotations

import re

import pytest
from hypothesis import given

from hmkernel.sexpr import ParseError
from hmkernel.syntax import (Atom, Box, Conj, Falsum, Impl, Valid, WellFormednessError, degree,
                             equals, level, parse_formula, print_formula, subformulas)

from conftest import formulas, level0_formulas

A, B, C, P, Q, R = map(Atom, "ABCPQR")


def connective_count(text: str) -> int:
    """Independent degree oracle: count constructor keywords in printed text."""
    return len(re.findall(r"\((?:and|or|imp|box|valid) ", text))


class TestLevel:
    def test_atom_is_level_0(self):
        assert level(P) == 0

    def test_validity_is_level_1(self):
        assert level(Valid((), P)) == 1

    def test_box_is_level_0(self):
        assert level(Box((B,), A)) == 0


class TestDegree:
    def test_atom(self):
        assert degree(P) == 0

    def test_nested_implication(self):
        assert degree(Impl(Conj(P, Q), R)) == 2

    def test_validity_with_atomic_context(self):
        assert degree(Valid((B, B), A)) == 1

    def test_context_entries_count(self):
        assert degree(Box((Conj(A, B), Impl(A, B)), C)) == 3

    @given(formulas)
    def test_matches_keyword_count(self, f):
        assert degree(f) == connective_count(print_formula(f))

    @given(formulas)
    def test_zero_exactly_for_atoms_and_bot(self, f):
        assert (degree(f) == 0) == isinstance(f, (Atom, Falsum))

    @given(formulas)
    def test_components_are_strictly_smaller(self, f):
        for g in subformulas(f):
            assert degree(g) < degree(f)


class TestEquality:
    def test_reflexive(self):
        assert equals(Box((B,), A), Box((B,), A))

    def test_context_order_matters(self):
        assert not equals(Box((B, C), A), Box((C, B), A))

    def test_constructors_distinct(self):
        assert not equals(Valid((), A), Box((), A))

    def test_duplicates_matter(self):
        assert not equals(Box((B,), A), Box((B, B), A))


class TestParsePrint:
    def test_implication(self):
        assert parse_formula("(imp A A)") == Impl(A, A)

    def test_multigrade_box(self):
        assert parse_formula("(box (B1 B2) A)") == Box((Atom("B1"), Atom("B2")), A)

    def test_bot(self):
        assert parse_formula("bot") == Falsum()

    def test_whitespace_insensitive(self):
        assert parse_formula(" ( box\n(  B )\tA ) ") == Box((B,), A)

    @pytest.mark.parametrize("f, text", [
        (Impl(A, A), "(imp A A)"),
        (Box((), A), "(box () A)"),
        (Valid((B,), A), "(valid (B) A)"),
    ])
    def test_print(self, f, text):
        assert print_formula(f) == text

    def test_nested_validity_is_level_violation(self):
        with pytest.raises(WellFormednessError) as info:
            parse_formula("(valid ((valid () A)) B)")
        assert info.value.kind == "LevelViolation"
        assert not isinstance(info.value, ParseError)

    def test_validity_under_connective_rejected(self):
        with pytest.raises(WellFormednessError):
            parse_formula("(and (valid () A) B)")

    @pytest.mark.parametrize("text", ["(imp A)", "(box A B)", "(foo A B)", "(imp A B", "A)", "",
                                      "(and A B) C", "a-b"])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse_formula(text)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_formula("(and A\n   (foo B))")
        assert (info.value.line, info.value.col) == (2, 4)

    @given(formulas)
    def test_round_trip(self, f):
        assert parse_formula(print_formula(f)) == f

    @given(formulas)
    def test_validity_only_at_root(self, f):
        text = print_formula(f)
        assert text.count("(valid ") == level(f)
        if level(f):
            assert text.startswith("(valid ")

    @given(level0_formulas)
    def test_level0_generator_stays_level0(self, f):
        assert level(f) == 0
