from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hmkernel.checker import Mode, check_errors
from hmkernel.generator import gen_proof
from hmkernel.proof import Assume, iter_nodes, print_proof, rule_name
from hmkernel.syntax import Atom, subformulas

from conftest import seeds

ALL_RULES = {"assume", "andI", "andE1", "andE2", "orI1", "orI2", "orE", "impI", "impE", "botE",
             "VI", "VE", "boxI", "boxE"}


def atoms_of(f):
    if isinstance(f, Atom):
        yield f.name
    for g in subformulas(f):
        yield from atoms_of(g)


@pytest.mark.parametrize("mode", list(Mode))
def test_thousand_samples_check(mode):
    bad = [s for s in range(1000) if check_errors(gen_proof(s, 8, mode), mode)]
    assert bad == []


@pytest.mark.parametrize("mode", list(Mode))
def test_all_rule_forms_occur(mode):
    seen = Counter(rule_name(n) for s in range(300) for _, n in iter_nodes(gen_proof(s, 8, mode)))
    assert set(seen) == ALL_RULES


def test_liberal_mode_exercises_open_level_one_under_vi():
    hits = [s for s in range(300)
            if check_errors(gen_proof(s, 8, Mode.LIBERAL_VI), Mode.STRICT)]
    assert hits


@given(seeds)
def test_depth_one_is_a_leaf(seed):
    assert isinstance(gen_proof(seed, 1), Assume)


@given(seeds, st.integers(1, 8), st.sampled_from(list(Mode)))
def test_deterministic(seed, depth, mode):
    assert print_proof(gen_proof(seed, depth, mode)) == print_proof(gen_proof(seed, depth, mode))


@given(seeds, st.integers(1, 8))
def test_height_bounded_by_depth(seed, depth):
    assert max(len(path) for path, _ in iter_nodes(gen_proof(seed, depth))) < depth


@given(seeds, st.integers(1, 8))
def test_atom_pool(seed, depth):
    names = set()
    for _, n in iter_nodes(gen_proof(seed, depth)):
        if isinstance(n, Assume):
            names |= set(atoms_of(n.formula))
    assert names <= {"P", "Q", "R", "S"}


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        gen_proof(0, 0)


def test_accepts_mode_strings():
    assert print_proof(gen_proof(7, 5, "liberal-vi")) == print_proof(gen_proof(7, 5, Mode.LIBERAL_VI))
