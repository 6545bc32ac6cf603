"""Proof kernel for HM: two-level natural deduction with validity and relative necessity.

Submodules: ``syntax`` (formulas), ``proof`` (proof trees, grafting),
``checker`` (rule checking), ``normalizer`` (reductions and normal forms),
``jm`` (the judgmental system and its translation), ``render``,
``generator`` and ``cli``.
"""

from .checker import (CheckError, Judgement, Mode, ProofCheckError, check, check_errors,
                      derive_corpus, is_valid_proof)
from .generator import gen_proof
from .normalizer import (FuelExhausted, Measure, MeasureNotDecreasing, Redex, RedexStale, Step,
                         find_redexes, is_normal, measure, normalize, reduce_once, select_redex)
from .proof import (AssumptionSet, LabelSupply, Proof, ProofError, fresh_relabel, graft,
                    open_assumptions, parse_proof, print_proof)
from .render import render
from .sexpr import ParseError
from .syntax import (Formula, WellFormednessError, degree, equals, level, parse_formula,
                     print_formula)

__all__ = [
    "CheckError", "Judgement", "Mode", "ProofCheckError", "check", "check_errors",
    "derive_corpus", "is_valid_proof", "gen_proof", "FuelExhausted", "Measure",
    "MeasureNotDecreasing", "Redex", "RedexStale", "Step", "find_redexes", "is_normal",
    "measure", "normalize", "reduce_once", "select_redex", "AssumptionSet", "LabelSupply",
    "Proof", "ProofError", "fresh_relabel", "graft", "open_assumptions", "parse_proof",
    "print_proof", "render", "ParseError", "Formula", "WellFormednessError", "degree",
    "equals", "level", "parse_formula", "print_formula",
]
