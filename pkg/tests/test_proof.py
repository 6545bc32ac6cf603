from __future__ import annotations

import re
from collections import Counter

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hmkernel.checker import check
from hmkernel.generator import gen_proof
from hmkernel.proof import (Assume, AssumptionSet, BoxE, BoxI, ConjE1, ConjI, DisjE, ImplE, ImplI,
                            LabelSupply, ProofError, VE, VI, all_labels, bindings, children,
                            format_path, fresh_relabel, graft, iter_nodes, open_assumptions,
                            parse_proof, print_proof, replace_at, size, subproof_at)
from hmkernel.sexpr import ParseError
from hmkernel.syntax import Atom, Conj, Impl, Valid, level

from conftest import seeds

A, B, C = map(Atom, "ABC")


def scoped_opens(p) -> Counter:
    """Oracle: open leaves found by carrying the set of labels bound on the way down."""
    out: Counter = Counter()

    def walk(node, bound: frozenset):
        if isinstance(node, Assume):
            if node.label not in bound:
                out[(node.label, node.formula)] += 1
            return
        scoped = {}
        for lab, _, scope in bindings(node):
            for i in scope:
                scoped.setdefault(i, set()).add(lab)
        for i, c in enumerate(children(node)):
            walk(c, bound | scoped.get(i, set()))

    walk(p, frozenset())
    return out


def as_counter(s: AssumptionSet) -> Counter:
    return Counter(dict(s.items()))


def shape(p) -> str:
    """Printed proof with labels renumbered by first appearance.

    Generated labels are lowercase letters plus digits; atoms are uppercase,
    so the two never collide.
    """
    names: dict[str, str] = {}

    def canon(m):
        return names.setdefault(m.group(0), f"L{len(names)}")

    return re.sub(r"\b[a-z]+\d+(?:_\d+)?\b", canon, print_proof(p))


class TestOpenAssumptions:
    def test_single_leaf(self):
        assert open_assumptions(Assume("1", A)) == AssumptionSet({("1", A): 1})

    def test_discharged(self):
        assert open_assumptions(ImplI("1", A, Assume("1", A))) == AssumptionSet()

    def test_level_one_leaf(self):
        p = VE(Assume("h", Valid((), A)), ())
        assert open_assumptions(p) == AssumptionSet({("h", Valid((), A)): 1})

    def test_counts_occurrences(self):
        p = ConjI(Assume("x", A), Assume("x", A))
        assert open_assumptions(p).count("x", A) == 2

    def test_duplicate_binding(self):
        p = ConjI(ImplI("u", A, Assume("u", A)), ImplI("u", B, Assume("u", B)))
        with pytest.raises(ProofError) as info:
            open_assumptions(p)
        assert info.value.kind == "DuplicateLabelBinding"

    def test_class_formula_mismatch(self):
        with pytest.raises(ProofError) as info:
            open_assumptions(ConjI(Assume("x", A), Assume("x", B)))
        assert info.value.kind == "ClassFormulaMismatch"

    @given(seeds, st.integers(1, 8), st.sampled_from(["strict", "liberal-vi"]))
    def test_matches_scoped_oracle(self, seed, depth, mode):
        p = gen_proof(seed, depth, mode)
        assert as_counter(open_assumptions(p)) == scoped_opens(p)


class TestGraft:
    def test_single_leaf(self):
        q = ConjE1(Assume("y", Conj(B, C)))
        assert graft(Assume("1", B), {"1": q}, LabelSupply()) == q

    def test_under_non_capturing_binder(self):
        q = Assume("y", B)
        out = graft(ImplI("2", C, Assume("1", B)), {"1": q}, LabelSupply({"1", "2", "y"}))
        assert out == ImplI("2", C, q)

    def test_vacuous_target_is_noop(self):
        p = ImplI("2", C, Assume("3", B))
        assert graft(p, {"1": Assume("y", B)}, LabelSupply()) is p

    def test_copies_get_distinct_labels(self):
        q = ImplI("k", A, Assume("k", A))
        p = ConjI(Assume("x", Impl(A, A)), Assume("x", Impl(A, A)))
        out = graft(p, {"x": q}, LabelSupply({"x", "k"}))
        assert out == ConjI(ImplI("k_1", A, Assume("k_1", A)), ImplI("k_2", A, Assume("k_2", A)))

    def test_target_bound_inside_is_error(self):
        with pytest.raises(ProofError) as info:
            graft(ImplI("1", A, Assume("1", A)), {"1": Assume("y", A)}, LabelSupply())
        assert info.value.kind == "UnknownLabel"

    @given(seeds, seeds, st.data())
    def test_open_assumption_arithmetic(self, s1, s2, data):
        p = gen_proof(s1, 6)
        level0 = sorted({(lab, f) for (lab, f), _ in open_assumptions(p).items() if level(f) == 0},
                        key=lambda x: x[0])
        assume(level0)
        lab, f = data.draw(st.sampled_from(level0))
        inner = parse_proof(re.sub(r"\b([a-z]+\d+)\b", r"q\1", print_proof(gen_proof(s2, 5))))
        if level(check(inner).conclusion) == 1:
            inner = Assume("qz", A)
        q = ConjE1(ConjI(Assume("graft_y", f), inner))
        q_opens = open_assumptions(q)
        out = graft(p, {lab: q}, LabelSupply.for_proofs(p, q))
        before = open_assumptions(p)
        k = sum(n for (l2, _), n in before.items() if l2 == lab)
        expected = before.without(lab) + q_opens.scaled(k)
        assert open_assumptions(out) == expected
        labs = [l2 for _, node in iter_nodes(out) for l2, _, _ in bindings(node)]
        assert len(labs) == len(set(labs))


class TestFreshRelabel:
    def test_alpha_renaming(self):
        out = fresh_relabel(ImplI("1", A, Assume("1", A)), LabelSupply({"1"}))
        assert out == ImplI("1_1", A, Assume("1_1", A))

    def test_open_labels_untouched(self):
        assert fresh_relabel(Assume("1", A), LabelSupply({"1"})) == Assume("1", A)

    def test_nested_binders_distinct(self):
        p = ImplI("u", A, ImplI("v", B, Assume("u", A)))
        out = fresh_relabel(p, LabelSupply({"u", "v"}))
        assert out == ImplI("u_1", A, ImplI("v_2", B, Assume("u_1", A)))

    @given(seeds, st.sampled_from(["strict", "liberal-vi"]))
    def test_preserves_judgement_and_shape(self, seed, mode):
        p = gen_proof(seed, 7, mode)
        supply = LabelSupply.for_proofs(p)
        out = fresh_relabel(p, supply)
        assert check(out, mode) == check(p, mode)
        assert size(out) == size(p)
        bound_new = {lab for _, n in iter_nodes(out) for lab, _, _ in bindings(n)}
        assert not bound_new & all_labels(p)
        assert shape(out) == shape(p)


class TestLabelSupply:
    def test_skips_used(self):
        s = LabelSupply({"h_1", "h_3"})
        assert [s.fresh("h"), s.fresh("h"), s.fresh("h")] == ["h_2", "h_4", "h_5"]

    def test_strips_numeric_suffix(self):
        assert LabelSupply().fresh("k_7") == "k_1"

    def test_deterministic(self):
        a, b = LabelSupply({"x"}), LabelSupply({"x"})
        assert [a.fresh("x") for _ in range(5)] == [b.fresh("x") for _ in range(5)]


class TestPaths:
    P = parse_proof("(impE (impI u A (assume u A)) (andE1 (assume y (and A B))))")

    def test_format(self):
        assert format_path(()) == "0"
        assert format_path((1, 0)) == "0.1.0"

    def test_subproof_at(self):
        assert subproof_at(self.P, (1, 0)) == Assume("y", Conj(A, B))

    def test_replace_at(self):
        out = replace_at(self.P, (1,), Assume("z", A))
        assert out.minor == Assume("z", A) and out.major is self.P.major

    def test_bad_path(self):
        with pytest.raises(ProofError):
            subproof_at(self.P, (5,))

    def test_iter_nodes_preorder(self):
        assert [p for p, _ in iter_nodes(self.P)] == [(), (0,), (0, 0), (1,), (1, 0)]


class TestText:
    @pytest.mark.parametrize("text", [
        "(assume x A)",
        "(orE (assume d (or A B)) (x) (assume x A) (y) (botE A (assume z bot)))",
        "(VI ((x A) (y B)) (assume x A))",
        "(VE (assume h (valid (A B) C)) ((assume a A) (assume b B)))",
        "(boxE (assume m (box () A)) (h (valid () A)) (VE (assume h (valid () A)) ()))",
        "(orI1 B (assume a A))",
        "(orI2 A (assume b B))",
    ])
    def test_round_trip_examples(self, text):
        assert print_proof(parse_proof(text)) == text

    def test_or_intro_stored_formula(self):
        assert str(check(parse_proof("(orI1 B (assume a A))")).conclusion) == "(or A B)"
        assert str(check(parse_proof("(orI2 A (assume b B))")).conclusion) == "(or A B)"

    @given(seeds, st.integers(1, 8), st.sampled_from(["strict", "liberal-vi"]))
    def test_round_trip_generated(self, seed, depth, mode):
        p = gen_proof(seed, depth, mode)
        assert parse_proof(print_proof(p)) == p
        assert parse_proof(print_proof(p, indent=2)) == p

    @pytest.mark.parametrize("text", [
        "(assume x)", "(andI (assume x A))", "(orE (assume d (or A B)) x (assume x A) (y) (assume y A))",
        "(frob (assume x A))", "(boxE (assume m (box () A)) (h) (assume h A))",
        "(assume x-y A)", "assume",
    ])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_proof(text)

    def test_comments_ignored(self):
        assert parse_proof("; note\n(assume x A) ; trailing") == Assume("x", A)
