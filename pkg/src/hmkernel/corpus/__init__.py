"""Bundled proofs, reduction goldens and JM derivations.

Everything is described by ``manifest.json`` next to this file; the proofs
themselves live in one file each under ``hm/``, ``reductions/`` and ``jm/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any

from ..checker import Judgement, Mode, ProofCheckError, check, check_errors
from ..jm import (JMProof, JMSequent, embed, expected_opens, jm_check_errors, jm_to_hm,
                  parse_jm_file)
from ..normalizer import Redex, is_normal, normalize, reduce_once
from ..proof import AssumptionSet, Proof, parse_proof
from ..syntax import parse_formula


def read_text(rel: str) -> str:
    return resources.files(__name__).joinpath(rel).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def manifest() -> dict[str, Any]:
    return json.loads(read_text("manifest.json"))


def _opens(entries) -> AssumptionSet:
    return AssumptionSet({(o["label"], parse_formula(o["formula"])): o["count"] for o in entries})


@dataclass(frozen=True)
class HMItem:
    name: str
    file: str
    proof: Proof
    mode: Mode
    expected: Judgement | None          # None when the item must be rejected
    errors: tuple[tuple[str, tuple[int, ...]], ...]
    extra: dict


@dataclass(frozen=True)
class ReductionGolden:
    name: str
    redex: Redex
    before: Proof
    after: Proof


@dataclass(frozen=True)
class JMItem:
    name: str
    file: str
    goal: JMSequent
    proof: JMProof
    errors: tuple[tuple[str, tuple[int, ...]], ...]
    hm: Proof | None                     # expected translation, when pinned down


def _errors(entry) -> tuple[tuple[str, tuple[int, ...]], ...]:
    return tuple((e["kind"], tuple(e["path"])) for e in entry.get("errors", ()))


def hm_items() -> list[HMItem]:
    out = []
    for e in manifest()["hm"]:
        expected = None
        if "conclusion" in e:
            expected = Judgement(parse_formula(e["conclusion"]), _opens(e["opens"]))
        extra = {k: v for k, v in e.items()
                 if k not in ("name", "file", "mode", "conclusion", "opens", "errors")}
        out.append(HMItem(e["name"], e["file"], parse_proof(read_text(e["file"])), Mode(e["mode"]),
                          expected, _errors(e), extra))
    return out


def derive_corpus() -> list[tuple[str, Proof, Judgement]]:
    """The closed proofs that must check in strict mode, with their Judgements."""
    return [(it.name, it.proof, it.expected) for it in hm_items()
            if it.mode is Mode.STRICT and it.expected is not None]


def reduction_goldens() -> list[ReductionGolden]:
    return [ReductionGolden(e["name"], Redex(e["kind"], tuple(e["path"])),
                            parse_proof(read_text(e["input"])), parse_proof(read_text(e["expected"])))
            for e in manifest()["reductions"]]


def jm_items() -> list[JMItem]:
    out = []
    for e in manifest()["jm"]:
        goal, p = parse_jm_file(read_text(e["file"]))
        hm = parse_proof(e["hm"]) if "hm" in e else None
        out.append(JMItem(e["name"], e["file"], goal, p, _errors(e), hm))
    return out


# -- running ------------------------------------------------------------------

@dataclass(frozen=True)
class Outcome:
    section: str
    name: str
    ok: bool
    detail: str


def _run_hm(it: HMItem) -> Outcome:
    errs = check_errors(it.proof, it.mode)
    if it.expected is None:
        got = tuple((e.kind, e.path) for e in errs)
        return Outcome("hm", it.name, got == it.errors,
                       f"{it.mode}: rejected with {', '.join(k for k, _ in got) or 'nothing'}")
    if errs:
        return Outcome("hm", it.name, False, f"{it.mode}: {errs[0]}")
    j = check(it.proof, it.mode)
    ok = j == it.expected
    detail = f"{it.mode}: {j.conclusion}"
    if "normal_form" in it.extra:
        nf, trace = normalize(it.proof)
        ok = ok and nf == parse_proof(it.extra["normal_form"]) and is_normal(nf)
        ok = ok and [s.redex.kind for s in trace] == it.extra["steps"]
        detail += f", normalizes in {len(trace)} steps"
    return Outcome("hm", it.name, ok, detail)


def _run_reduction(g: ReductionGolden) -> Outcome:
    try:
        check(g.before)
        got = reduce_once(g.before, g.redex)
    except (ProofCheckError, ValueError) as exc:
        return Outcome("reduction", g.name, False, str(exc))
    return Outcome("reduction", g.name, got == g.after, g.redex.kind)


def _run_jm(it: JMItem) -> Outcome:
    errs = jm_check_errors(it.proof, it.goal)
    if it.errors or errs:
        got = tuple((e.kind, e.path) for e in errs)
        return Outcome("jm", it.name, got == it.errors,
                       f"rejected with {', '.join(k for k, _ in got) or 'nothing'}")
    hm = jm_to_hm(it.proof, it.goal)
    j = check(hm, Mode.STRICT)
    ok = j.conclusion == embed(it.goal.conclusion) and j.opens.support() <= expected_opens(it.goal)
    if it.hm is not None:
        ok = ok and hm == it.hm
    return Outcome("jm", it.name, ok, f"translates to {j.conclusion}")


def run_corpus() -> list[Outcome]:
    return ([_run_hm(it) for it in hm_items()]
            + [_run_reduction(g) for g in reduction_goldens()]
            + [_run_jm(it) for it in jm_items()])


__all__ = [
    "HMItem", "ReductionGolden", "JMItem", "Outcome", "manifest", "read_text", "hm_items",
    "derive_corpus", "reduction_goldens", "jm_items", "run_corpus",
]
