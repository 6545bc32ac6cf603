"""Acceptance criteria 1-7, one test each, each reporting a PASS/FAIL line."""

from __future__ import annotations

import io
import time
from functools import lru_cache

from hmkernel.checker import Mode, check, check_errors, derive_corpus
from hmkernel.cli import main
from hmkernel.corpus import jm_items, read_text, reduction_goldens
from hmkernel.generator import gen_proof
from hmkernel.jm import embed, expected_opens, jm_check_errors, jm_to_hm
from hmkernel.normalizer import REDEX_KINDS, is_normal, measure, normalize, reduce_once
from hmkernel.proof import parse_proof
from hmkernel.syntax import level, parse_formula

from conftest import ACCEPTANCE

SEEDS = range(1000)
DEPTH = 8
LISTED_KINDS = {"DetourConj", "DetourImpl", "DetourDisj", "DetourV", "DetourBox",
              "DetourBoxVacuous", "PermuteDisj", "PermuteBox"}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)


@lru_cache(maxsize=1)
def generated():
    """Criterion 4 corpus: (proof, judgement, normal form, trace) per seed, plus wall time."""
    start = time.perf_counter()
    rows = []
    for seed in SEEDS:
        p = gen_proof(seed, DEPTH, Mode.STRICT)
        j = check(p, Mode.STRICT)
        nf, trace = normalize(p, fuel=100_000)
        rows.append((seed, p, j, nf, trace))
    return rows, time.perf_counter() - start


def test_criterion_1_rule_fidelity_corpus():
    start = time.perf_counter()
    items = derive_corpus()
    failures = [name for name, p, expected in items
                if check(p, Mode.STRICT) != expected or expected.opens]
    elapsed = time.perf_counter() - start
    names = {name for name, _, _ in items}
    required = {"identity", "thinning", "relative-necessity", "T", "4", "K"}
    got = {name: str(j.conclusion) for name, _, j in items}
    shapes_ok = (got.get("relative-necessity") == "(box (B) B)"
                 and got.get("T") == "(imp (box () A) A)"
                 and got.get("4") == "(imp (box () A) (box () (box () A)))"
                 and got.get("K") == "(imp (box () (imp A B)) (imp (box () A) (box () B)))")
    ok = not failures and required <= names and shapes_ok and elapsed < 1.0
    report(1, ok, f"{len(items) - len(failures)}/{len(items)} corpus proofs check with expected "
                  f"closed judgements in {elapsed:.3f}s (limit 1s)")
    assert ok, failures


def test_criterion_2_cut_gate(tmp_path):
    path = tmp_path / "cut.hm"
    path.write_text(read_text("hm/cut.hm"))
    out_strict, out_liberal = io.StringIO(), io.StringIO()
    code_strict = main(["check", "--mode", "strict", str(path)], stdout=out_strict)
    code_liberal = main(["check", "--mode", "liberal-vi", str(path)], stdout=out_liberal)
    strict_ok = code_strict == 1 and out_strict.getvalue().startswith("ERROR OpenLevelOneUnderVI at 0")
    j = check(parse_proof(read_text("hm/cut.hm")), Mode.LIBERAL_VI)
    liberal_ok = (code_liberal == 0
                  and out_liberal.getvalue().startswith("OK (valid (G1 D1) C)")
                  and j.conclusion == parse_formula("(valid (G1 D1) C)")
                  and sorted(lab for (lab, f), _ in j.opens.items() if level(f) == 1) == ["h1", "h2"])
    ok = strict_ok and liberal_ok
    report(2, ok, f"strict exit {code_strict} (want 1, OpenLevelOneUnderVI), "
                  f"liberal-vi exit {code_liberal} (want 0, {j.conclusion})")
    assert ok


def test_criterion_3_reduction_goldens():
    goldens = reduction_goldens()
    mismatches = [g.name for g in goldens if reduce_once(g.before, g.redex) != g.after]
    covered = {g.redex.kind for g in goldens}
    ok = not mismatches and LISTED_KINDS <= covered and covered == set(REDEX_KINDS)
    report(3, ok, f"{len(goldens) - len(mismatches)}/{len(goldens)} goldens equal exactly; "
                  f"kinds covered {len(covered)}/{len(REDEX_KINDS)}")
    assert ok, mismatches


def test_criterion_4_normalization_properties():
    rows, elapsed = generated()
    problems = []
    for seed, p, j, nf, trace in rows:
        if not is_normal(nf):
            problems.append((seed, "not normal"))
        jn = check(nf, Mode.STRICT)
        if jn.conclusion != j.conclusion:
            problems.append((seed, "conclusion changed"))
        if not jn.opens.support() <= j.opens.support():
            problems.append((seed, "new open assumptions"))
        prev = measure(p)
        for step in trace:
            if not (step.measure_before == prev and step.measure_after < step.measure_before):
                problems.append((seed, "measure not strictly decreasing"))
                break
            prev = step.measure_after
    steps = sum(len(r[4]) for r in rows)
    ok = not problems and elapsed < 60.0
    report(4, ok, f"{len(rows)} proofs (depth {DEPTH}) normalized, {steps} steps, "
                  f"{len(problems)} violations, {elapsed:.2f}s (limit 60s)")
    assert ok, problems[:5]


def test_criterion_5_idempotence():
    rows, _ = generated()
    nonempty = [seed for seed, _, _, nf, _ in rows if normalize(nf)[1]]
    ok = not nonempty
    report(5, ok, f"{len(rows) - len(nonempty)}/{len(rows)} normal forms re-normalize with empty trace")
    assert ok, nonempty[:5]


def test_criterion_6_jm_soundness():
    start = time.perf_counter()
    items = [it for it in jm_items() if not it.errors]
    failures = []
    for it in items:
        if jm_check_errors(it.proof, it.goal):
            failures.append(it.name)
            continue
        j = check(jm_to_hm(it.proof, it.goal), Mode.STRICT)
        if j.conclusion != embed(it.goal.conclusion) or not j.opens.support() <= expected_opens(it.goal):
            failures.append(it.name)
        if not it.goal.delta and not it.goal.gamma and j.opens:
            failures.append(it.name)
    elapsed = time.perf_counter() - start
    names = {it.name for it in items}
    ok = not failures and {"hyp*-boxI", "box-identity"} <= names and elapsed < 1.0
    report(6, ok, f"{len(items) - len(failures)}/{len(items)} JM derivations check and translate "
                  f"soundly in {elapsed:.3f}s (limit 1s)")
    assert ok, failures


def test_criterion_7_mode_monotonicity():
    rows, _ = generated()
    proofs = [p for _, p, _ in derive_corpus()] + [p for _, p, _, _, _ in rows]
    strict_ok = [p for p in proofs if not check_errors(p, Mode.STRICT)]
    differ = [p for p in strict_ok if check(p, Mode.LIBERAL_VI) != check(p, Mode.STRICT)]
    ok = not differ and len(strict_ok) == len(proofs)
    report(7, ok, f"{len(strict_ok) - len(differ)}/{len(strict_ok)} strict-accepted proofs get "
                  f"identical judgements in liberal-vi")
    assert ok
