from __future__ import annotations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hmkernel.syntax import Atom, Box, Conj, Disj, Falsum, Impl, Valid

settings.register_profile(
    "default", deadline=None, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

atoms = st.sampled_from(["A", "B", "C", "P", "Q", "x_1", "G1"]).map(Atom)


def _extend(children):
    ctx = st.lists(children, max_size=3).map(tuple)
    return st.one_of(
        st.builds(Conj, children, children),
        st.builds(Disj, children, children),
        st.builds(Impl, children, children),
        st.builds(Box, ctx, children),
    )


level0_formulas = st.recursive(st.one_of(atoms, st.just(Falsum())), _extend, max_leaves=12)
level1_formulas = st.builds(Valid, st.lists(level0_formulas, max_size=3).map(tuple), level0_formulas)
formulas = st.one_of(level0_formulas, level1_formulas)

seeds = st.integers(min_value=0, max_value=10**9)

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
