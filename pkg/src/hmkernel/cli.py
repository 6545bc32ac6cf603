"""Command-line front end: ``hm <command> [options] [FILE]``.

Exit codes: 0 success, 1 parse or check failure, 2 fuel exhausted,
64 usage error.  ``FILE`` may be ``-`` or omitted to read standard input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import textwrap
from typing import Callable, TextIO

from .checker import Judgement, Mode, ProofCheckError, check
from .corpus import run_corpus
from .generator import gen_proof
from .jm import embed, jm_check_errors, jm_to_hm, parse_jm_file
from .normalizer import FuelExhausted, Step, is_normal, measure, normalize
from .proof import Proof, ProofError, parse_proof, print_proof
from .render import render
from .sexpr import ParseError
from .syntax import WellFormednessError, print_formula

EXIT_OK, EXIT_FAIL, EXIT_FUEL, EXIT_USAGE = 0, 1, 2, 64
DEFAULT_FUEL = 100_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _InputError(Exception):
    """Input that cannot be decoded or parsed; reported as one ERROR line."""

    def __init__(self, kind: str, detail: str):
        self.kind = kind
        self.detail = detail
        super().__init__(f"ERROR {kind}: {detail}")


def _fuel(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"fuel must be an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("fuel must be at least 1")
    return n


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return n


def _positive(text: str) -> int:
    n = _natural(text)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive number")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hm", description="Check, normalize and translate HM proofs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help: str, *, file=True, mode=True):
        p = sub.add_parser(name, help=help)
        if file:
            p.add_argument("file", nargs="?", default="-", help="input file, '-' for stdin")
        if mode:
            p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.STRICT.value)
        p.add_argument("--output", choices=["text", "json"], default="text")
        return p

    command("check", "check a proof and print its judgement")
    n = command("normalize", "normalize a proof")
    n.add_argument("--permute-box", choices=["on", "off"], default="on",
                   help="permute eliminations through boxE segments (default on)")
    n.add_argument("--fuel", type=_fuel, default=None,
                   help=f"maximum number of steps (default $HM_FUEL or {DEFAULT_FUEL})")
    n.add_argument("--trace", action="store_true", help="also print every reduction step")
    command("render", "print a proof as an indented tree", mode=False)
    command("jm-check", "check a JM derivation against its goal", mode=False)
    command("jm-translate", "translate a JM derivation into HM", mode=False)
    command("corpus", "run the bundled corpus and reduction goldens", file=False, mode=False)
    g = command("gen", "emit random well-formed proofs", file=False)
    g.add_argument("--seed", type=_natural, required=True)
    g.add_argument("--count", type=_positive, default=1)
    g.add_argument("--depth", type=_positive, default=6)
    return parser


# -- helpers ------------------------------------------------------------------

def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        data = stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read()
    else:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise _InputError("DecodeError", f"input is not UTF-8 ({exc.reason})") from None
    return data


def _parse_hm(text: str) -> Proof:
    try:
        return parse_proof(text)
    except ParseError as exc:
        raise _InputError("ParseError", str(exc)) from None
    except WellFormednessError as exc:
        raise _InputError(exc.kind, str(exc)) from None
    except (ProofError, ValueError) as exc:
        raise _InputError("ParseError", str(exc)) from None


def _parse_jm(text: str):
    try:
        return parse_jm_file(text)
    except (ParseError, ValueError) as exc:
        raise _InputError("ParseError", str(exc)) from None


def _judgement_text(j: Judgement) -> str:
    lines = [f"OK {print_formula(j.conclusion)}"]
    for (lab, f), n in j.opens.items():
        lines.append(f"  open {lab} : {print_formula(f)}  x{n}")
    return "\n".join(lines)


def _emit(out: TextIO, args, text: str | None, data) -> None:
    if args.output == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    elif text is not None:
        out.write(text + "\n")


def _report_errors(out: TextIO, args, errors) -> int:
    _emit(out, args, "\n".join(map(str, errors)), {"errors": [e.to_json() for e in errors]})
    return EXIT_FAIL


def _step_text(i: int, s: Step) -> str:
    head = f"step {i}: {s.redex}  measure {s.measure_before} -> {s.measure_after}"
    return head + "\n" + textwrap.indent(render(s.proof_after), "    ")


# -- commands -----------------------------------------------------------------

def cmd_check(args, out, stdin) -> int:
    p = _parse_hm(_read(args.file, stdin))
    try:
        j = check(p, args.mode)
    except ProofCheckError as exc:
        return _report_errors(out, args, exc.errors)
    _emit(out, args, _judgement_text(j), j.to_json())
    return EXIT_OK


def cmd_normalize(args, out, stdin) -> int:
    p = _parse_hm(_read(args.file, stdin))
    try:
        j = check(p, args.mode)
    except ProofCheckError as exc:
        return _report_errors(out, args, exc.errors)
    fuel = args.fuel if args.fuel is not None else _env_fuel()
    permute_box = args.permute_box == "on"
    try:
        nf, trace = normalize(p, fuel=fuel, permute_box=permute_box)
    except FuelExhausted as exc:
        msg = f"ERROR FuelExhausted: {exc}"
        _emit(out, args, msg, {"error": "FuelExhausted", "detail": str(exc),
                               "trace": [s.to_json(i) for i, s in enumerate(exc.trace, 1)]})
        return EXIT_FUEL
    data = {
        "proof": print_proof(nf),
        "conclusion": print_formula(j.conclusion),
        "normal": is_normal(nf, permute_box),
        "measure": list(measure(nf, permute_box)),
        "steps": len(trace),
    }
    text = print_proof(nf, indent=2)
    if args.trace:
        data["trace"] = [s.to_json(i) for i, s in enumerate(trace, 1)]
        log = [f"initial measure {measure(p, permute_box)}"]
        log += [_step_text(i, s) for i, s in enumerate(trace, 1)]
        log.append(f"normal form after {len(trace)} steps:")
        text = "\n".join(log) + "\n" + text
    _emit(out, args, text, data)
    return EXIT_OK


def _env_fuel() -> int:
    raw = os.environ.get("HM_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        return _fuel(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"HM_FUEL: {exc}") from None


def cmd_render(args, out, stdin) -> int:
    p = _parse_hm(_read(args.file, stdin))
    _emit(out, args, render(p), {"proof": print_proof(p), "tree": render(p).split("\n")})
    return EXIT_OK


def cmd_jm_check(args, out, stdin) -> int:
    goal, p = _parse_jm(_read(args.file, stdin))
    errors = jm_check_errors(p, goal)
    if errors:
        return _report_errors(out, args, errors)
    _emit(out, args, f"OK {goal}", {"ok": True, "goal": str(goal)})
    return EXIT_OK


def cmd_jm_translate(args, out, stdin) -> int:
    goal, p = _parse_jm(_read(args.file, stdin))
    errors = jm_check_errors(p, goal)
    if errors:
        return _report_errors(out, args, errors)
    hm = jm_to_hm(p, goal)
    j = check(hm, Mode.STRICT)
    _emit(out, args, print_proof(hm, indent=2) + "\n; " + _judgement_text(j).replace("\n", "\n; "),
          {"proof": print_proof(hm), "conclusion": print_formula(embed(goal.conclusion)),
           "judgement": j.to_json()})
    return EXIT_OK


def cmd_corpus(args, out, stdin) -> int:
    outcomes = run_corpus()
    width = max(len(o.name) for o in outcomes)
    lines = [f"{'PASS' if o.ok else 'FAIL'}  {o.section:<9} {o.name:<{width}}  {o.detail}"
             for o in outcomes]
    failed = sum(not o.ok for o in outcomes)
    lines.append(f"{len(outcomes) - failed}/{len(outcomes)} passed")
    _emit(out, args, "\n".join(lines),
          [{"section": o.section, "name": o.name, "ok": o.ok, "detail": o.detail}
           for o in outcomes])
    return EXIT_FAIL if failed else EXIT_OK


def cmd_gen(args, out, stdin) -> int:
    items = []
    for seed in range(args.seed, args.seed + args.count):
        p = gen_proof(seed, args.depth, args.mode)
        items.append({"seed": seed, "proof": print_proof(p),
                      "conclusion": print_formula(check(p, args.mode).conclusion)})
    text = "\n\n".join(f"; seed {it['seed']}: {it['conclusion']}\n{it['proof']}" for it in items)
    _emit(out, args, text, items)
    return EXIT_OK


COMMANDS: dict[str, Callable] = {
    "check": cmd_check, "normalize": cmd_normalize, "render": cmd_render,
    "jm-check": cmd_jm_check, "jm-translate": cmd_jm_translate, "corpus": cmd_corpus,
    "gen": cmd_gen,
}


def main(argv: list[str] | None = None, stdout: TextIO | None = None,
         stdin: TextIO | None = None) -> int:
    out = sys.stdout if stdout is None else stdout
    stdin = sys.stdin if stdin is None else stdin
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out, stdin)
    except UsageError as exc:
        print(f"hm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _InputError as exc:
        _emit(out, args, str(exc), {"errors": [{"kind": exc.kind, "path": [], "detail": exc.detail}]})
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
