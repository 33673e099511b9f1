"""``horn`` command line interface.

Programs are passed inline (quoted program text) or as file paths; an
argument naming an existing file is read from disk, and an ``@path`` prefix
forces the file reading.  Output is deterministic: the same argv yields
byte-identical output (``--timings`` opts out by adding a wall-clock field).

Exit codes: 0 success, 1 relation/equivalence does not hold (or no witness
found), 2 usage/parse/alphabet errors, 3 search or sweep bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import algebra, green, semantics
from .errors import AlphabetError, BoundExceededError, ProgramSyntaxError
from .green import GreenWitness
from .syntax import (
    Alphabet,
    Program,
    all_programs,
    infer_alphabet,
    parse_interpretation,
    parse_program,
    render_interpretation,
    render_program,
    render_rule,
)

VERSION = 1

_ENUM_MAX_ATOMS = 2  # classes --enumerate walks all 2^(n*2^n) programs


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class _Outcome:
    command: str
    alphabet: Alphabet
    inputs: dict
    result: object
    text: str
    witness: object = None
    method: Optional[str] = None
    code: int = 0
    extra_lines: list = field(default_factory=list)


# -- input loading -----------------------------------------------------


def _load_text(arg: str) -> str:
    if arg.startswith("@"):
        path = arg[1:]
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    if os.path.isfile(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_program(arg: str) -> Program:
    return parse_program(_load_text(arg))


def _load_interp(arg: str):
    return parse_interpretation(_load_text(arg))


def _resolve_alphabet(ns, *items) -> Alphabet:
    inferred = infer_alphabet(items)
    if ns.alphabet is None:
        return inferred
    explicit = Alphabet(parse_interpretation(ns.alphabet))
    if not explicit.covers(inferred.as_set()):
        missing = sorted(inferred.as_set() - explicit.as_set())
        raise AlphabetError(
            "explicit alphabet does not cover inputs; missing: "
            + ", ".join(a.name for a in missing)
        )
    return explicit


# -- rendering helpers ---------------------------------------------------


def _prog_json(p: Program) -> list:
    return [render_rule(r) for r in p]


def _interp_json(i) -> list:
    return sorted(a.name for a in i)


def _witness_block(label: str, p: Program) -> list:
    lines = [f"{label}:"]
    if p:
        lines.extend(f"  {render_rule(r)}" for r in p)
    else:
        lines.append("  %")  # comment line parses back to the empty program
    return lines


def _le_lines(tag: str, w: GreenWitness) -> tuple:
    """Render a witness; returns (lines, exit code)."""
    if not w.decided:
        return [f"{tag}: undecided (search bound exceeded)"], 3
    if not w.holds:
        return [f"{tag}: does not hold"], 1
    lines = [f"{tag}: holds", f"method: {w.method}"]
    if w.relation in ("L", "J"):
        lines.extend(_witness_block("prefix", w.prefix))
    if w.relation in ("R", "J"):
        lines.extend(_witness_block("suffix", w.suffix))
    return lines, 0


def _witness_json(w: GreenWitness) -> dict:
    return {
        "holds": w.holds,
        "decided": w.decided,
        "prefix": _prog_json(w.prefix) if w.prefix is not None else None,
        "suffix": _prog_json(w.suffix) if w.suffix is not None else None,
    }


# -- command handlers ----------------------------------------------------


def _program_result(ns, name: str, out: Program, a: Alphabet, inputs: dict) -> _Outcome:
    return _Outcome(name, a, inputs, _prog_json(out), render_program(out))


def _cmd_fmt(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    return _program_result(ns, "fmt", p, a, {"p": _prog_json(p)})


def _cmd_compose(ns) -> _Outcome:
    p, r = _load_program(ns.left), _load_program(ns.right)
    a = _resolve_alphabet(ns, p, r)
    out = algebra.compose(p, r)
    return _program_result(
        ns, "compose", out, a, {"p": _prog_json(p), "r": _prog_json(r)}
    )


def _cmd_power(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    out = algebra.power(p, ns.n, a)
    return _program_result(ns, "power", out, a, {"p": _prog_json(p), "n": ns.n})


def _cmd_star(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    return _program_result(ns, "star", algebra.star(p, a), a, {"p": _prog_json(p)})


def _cmd_plus(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    return _program_result(ns, "plus", algebra.plus(p, a), a, {"p": _prog_json(p)})


def _cmd_dual(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    return _program_result(ns, "dual", algebra.dual(p), a, {"p": _prog_json(p)})


def _cmd_facts(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    return _program_result(ns, "facts", p.facts, a, {"p": _prog_json(p)})


def _cmd_heads(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    h, _ = algebra.heads_bodies(p, a)
    return _Outcome(
        "heads", a, {"p": _prog_json(p)}, _interp_json(h), render_interpretation(h)
    )


def _cmd_bodies(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    _, b = algebra.heads_bodies(p, a)
    return _Outcome(
        "bodies", a, {"p": _prog_json(p)}, _interp_json(b), render_interpretation(b)
    )


def _cmd_unit(ns) -> _Outcome:
    if ns.alphabet is None:
        raise _UsageError("unit requires --alphabet")
    a = _resolve_alphabet(ns)
    return _program_result(ns, "unit", algebra.unit(a), a, {})


def _cmd_reduct(ns) -> _Outcome:
    if ns.side == "left":
        i, p = _load_interp(ns.x), _load_program(ns.y)
        a = _resolve_alphabet(ns, p, i)
        out = algebra.left_reduct(i, p)
        inputs = {"side": "left", "i": _interp_json(i), "p": _prog_json(p)}
    else:
        p, i = _load_program(ns.x), _load_interp(ns.y)
        a = _resolve_alphabet(ns, p, i)
        out = algebra.right_reduct(p, i)
        inputs = {"side": "right", "p": _prog_json(p), "i": _interp_json(i)}
    return _program_result(ns, "reduct", out, a, inputs)


def _cmd_ominus(ns) -> _Outcome:
    i = _load_interp(ns.interp)
    a = _resolve_alphabet(ns, i)
    out = algebra.build_ominus(i, a)
    return _program_result(ns, "ominus", out, a, {"i": _interp_json(i)})


def _cmd_oplus(ns) -> _Outcome:
    i = _load_interp(ns.interp)
    a = _resolve_alphabet(ns, i)
    out = algebra.build_oplus(i, a)
    return _program_result(ns, "oplus", out, a, {"i": _interp_json(i)})


def _cmd_omega(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    out = algebra.omega(p, a)
    return _Outcome(
        "omega", a, {"p": _prog_json(p)}, _interp_json(out), render_interpretation(out)
    )


def _cmd_lm(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    lm, trace = semantics.least_model(p, a)
    extra = []
    if ns.trace:
        extra = [
            f"stage {k}: {render_interpretation(s)}"
            for k, s in enumerate(trace.stages)
        ]
    return _Outcome(
        "lm",
        a,
        {"p": _prog_json(p)},
        {
            "least_model": _interp_json(lm),
            "stages": [_interp_json(s) for s in trace.stages],
            "converged_at": trace.converged_at,
        },
        render_interpretation(lm),
        extra_lines=extra,
    )


def _cmd_tp(ns) -> _Outcome:
    p, i = _load_program(ns.program), _load_interp(ns.interp)
    a = _resolve_alphabet(ns, p, i)
    out = semantics.tp(p, i)
    return _Outcome(
        "tp",
        a,
        {"p": _prog_json(p), "i": _interp_json(i)},
        _interp_json(out),
        render_interpretation(out),
    )


def _cmd_models(ns) -> _Outcome:
    p = _load_program(ns.program)
    a = _resolve_alphabet(ns, p)
    found = semantics.enumerate_models(p, a, ns.kind, cap=ns.cap)
    ordered = sorted(found, key=lambda s: tuple(sorted(x.name for x in s)))
    return _Outcome(
        "models",
        a,
        {"p": _prog_json(p), "kind": ns.kind},
        [_interp_json(i) for i in ordered],
        "\n".join(render_interpretation(i) for i in ordered),
    )


def _cmd_ss_equiv(ns) -> _Outcome:
    p, r = _load_program(ns.left), _load_program(ns.right)
    a = _resolve_alphabet(ns, p, r)
    eq = semantics.subsumption_equivalent(p, r, a, cap=ns.cap)
    return _Outcome(
        "ss-equiv",
        a,
        {"p": _prog_json(p), "r": _prog_json(r)},
        eq,
        f"ss-equiv: {'equivalent' if eq else 'not equivalent'}",
        code=0 if eq else 1,
    )


def _decide(ns, rel: str, p: Program, r: Program, a: Alphabet) -> GreenWitness:
    if ns.oracle:
        relu = rel.upper()
        if relu == "L":
            q = green.oracle_prefix(p, r, a)
            return GreenWitness("L", q is not None, prefix=q, method="oracle")
        if relu == "R":
            s = green.oracle_suffix(p, r, a)
            return GreenWitness("R", s is not None, suffix=s, method="oracle")
        pair = green.oracle_j_witness(p, r, a)
        if pair is None:
            return GreenWitness("J", False, method="oracle")
        return GreenWitness("J", True, prefix=pair[0], suffix=pair[1], method="oracle")
    return green.le(rel, p, r, a)


def _cmd_le(ns) -> _Outcome:
    p, r = _load_program(ns.left), _load_program(ns.right)
    a = _resolve_alphabet(ns, p, r)
    w = _decide(ns, ns.relation, p, r, a)
    if w.holds and not w.verify(p, r):
        raise AssertionError("witness failed re-verification")
    lines, code = _le_lines(f"le {ns.relation}", w)
    return _Outcome(
        "le",
        a,
        {"relation": ns.relation, "p": _prog_json(p), "r": _prog_json(r)},
        "holds" if w.holds else ("undecided" if not w.decided else "does not hold"),
        "\n".join(lines),
        witness=_witness_json(w),
        method=w.method,
        code=code,
    )


def _cmd_equiv(ns) -> _Outcome:
    p, r = _load_program(ns.left), _load_program(ns.right)
    a = _resolve_alphabet(ns, p, r)
    rel = ns.relation
    inputs = {"relation": rel, "p": _prog_json(p), "r": _prog_json(r)}
    if rel in ("ss", "lm"):
        if rel == "ss":
            eq = semantics.subsumption_equivalent(p, r, a, cap=ns.cap)
        else:
            eq = semantics.least_model(p, a)[0] == semantics.least_model(r, a)[0]
        return _Outcome(
            "equiv",
            a,
            inputs,
            {"equivalent": eq},
            f"equiv {rel}: {'equivalent' if eq else 'not equivalent'}",
            code=0 if eq else 1,
        )
    fw = _decide(ns, rel, p, r, a)
    bw = _decide(ns, rel, r, p, a)
    for w, x, y in ((fw, p, r), (bw, r, p)):
        if w.holds and not w.verify(x, y):
            raise AssertionError("witness failed re-verification")
    if not (fw.decided and bw.decided):
        return _Outcome(
            "equiv",
            a,
            inputs,
            {"equivalent": None},
            f"equiv {rel}: undecided (search bound exceeded)",
            code=3,
        )
    eq = fw.holds and bw.holds
    lines = [f"equiv {rel}: {'equivalent' if eq else 'not equivalent'}"]
    fl, _ = _le_lines("forward", fw)
    bl, _ = _le_lines("backward", bw)
    lines.extend(fl)
    lines.extend(bl)
    return _Outcome(
        "equiv",
        a,
        inputs,
        {"equivalent": eq},
        "\n".join(lines),
        witness={"forward": _witness_json(fw), "backward": _witness_json(bw)},
        method=fw.method,
        code=0 if eq else 1,
    )


def _cmd_classes(ns) -> _Outcome:
    if ns.enumerate:
        if ns.alphabet is None:
            raise _UsageError("classes --enumerate requires --alphabet")
        a = Alphabet(parse_interpretation(ns.alphabet))
        if len(a) > _ENUM_MAX_ATOMS:
            raise BoundExceededError(
                f"--enumerate needs |A| <= {_ENUM_MAX_ATOMS}, got {len(a)}"
            )
        progs = list(all_programs(a))
        inputs = {"relation": ns.relation, "programs": "enumerated"}
    else:
        if ns.programs is None:
            raise _UsageError("classes requires --programs FILE or --enumerate")
        with open(ns.programs, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        progs = [parse_program(line) for line in lines if line.strip()]
        a = _resolve_alphabet(ns, *progs)
        inputs = {
            "relation": ns.relation,
            "programs": [_prog_json(p) for p in progs],
        }
        if ns.alphabet is None and not progs:
            raise _UsageError("no programs given and no --alphabet to fall back on")
    report = green.green_partition(progs, ns.relation, a)
    text = report.to_dot() if ns.dot else report.to_text()
    return _Outcome(
        "classes",
        a,
        inputs,
        {
            "classes": [[_prog_json(p) for p in c] for c in report.classes],
            "order": sorted(list(e) for e in report.order_edges),
            "hasse": [list(e) for e in report.hasse_edges()],
        },
        text,
    )


def _cmd_nonassoc(ns) -> _Outcome:
    if ns.alphabet is not None:
        a = Alphabet(parse_interpretation(ns.alphabet))
    else:
        a = Alphabet(["a", "b"])
    triple = green.find_nonassociative_triple(a)
    if triple is None:
        return _Outcome(
            "nonassoc", a, {}, None, "none found", code=1
        )
    p, q, r = triple
    left = algebra.compose(algebra.compose(p, q), r)
    right = algebra.compose(p, algebra.compose(q, r))
    inline = lambda x: " ".join(render_rule(t) for t in x) or "%"
    text = "\n".join(
        [
            f"p: {inline(p)}",
            f"q: {inline(q)}",
            f"r: {inline(r)}",
            f"(p q) r: {inline(left)}",
            f"p (q r): {inline(right)}",
        ]
    )
    return _Outcome(
        "nonassoc",
        a,
        {},
        {
            "p": _prog_json(p),
            "q": _prog_json(q),
            "r": _prog_json(r),
            "left": _prog_json(left),
            "right": _prog_json(right),
        },
        text,
    )


_HANDLERS = {
    "fmt": _cmd_fmt,
    "compose": _cmd_compose,
    "power": _cmd_power,
    "star": _cmd_star,
    "plus": _cmd_plus,
    "omega": _cmd_omega,
    "dual": _cmd_dual,
    "facts": _cmd_facts,
    "heads": _cmd_heads,
    "bodies": _cmd_bodies,
    "unit": _cmd_unit,
    "reduct": _cmd_reduct,
    "ominus": _cmd_ominus,
    "oplus": _cmd_oplus,
    "lm": _cmd_lm,
    "tp": _cmd_tp,
    "models": _cmd_models,
    "ss-equiv": _cmd_ss_equiv,
    "le": _cmd_le,
    "equiv": _cmd_equiv,
    "classes": _cmd_classes,
    "nonassoc": _cmd_nonassoc,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="horn", description="Horn program composition algebra")
    sub = parser.add_subparsers(dest="command", metavar="verb")

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--alphabet", help="explicit alphabet, e.g. a,b,c")
        sp.add_argument("--json", action="store_true", help="structured output")
        sp.add_argument("--timings", action="store_true", help="include wall time")
        sp.add_argument("--cap", type=int, default=semantics.DEFAULT_SWEEP_CAP,
                        help="exhaustive sweep cap (atoms)")
        sp.add_argument("--oracle", action="store_true",
                        help="decide le/equiv by brute-force oracle")
        return sp

    add("fmt", "canonicalize a program").add_argument("program")
    sp = add("compose", "sequential composition P o R")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("power", "left-associated power P^n")
    sp.add_argument("program")
    sp.add_argument("n", type=int)
    add("star", "Kleene star P^*").add_argument("program")
    add("plus", "Kleene plus P^+").add_argument("program")
    add("omega", "facts of P^+ (the least model)").add_argument("program")
    add("dual", "reverse arrows of proper rules").add_argument("program")
    add("facts", "the facts of P").add_argument("program")
    add("heads", "head atoms of P").add_argument("program")
    add("bodies", "body atoms of P").add_argument("program")
    add("unit", "the unit program over --alphabet")
    sp = add("reduct", "left reduct (heads in I) or right reduct (bodies in I)")
    sp.add_argument("side", choices=("left", "right"))
    sp.add_argument("x")
    sp.add_argument("y")
    add("ominus", "body-atom deletion gadget for I").add_argument("interp")
    add("oplus", "body-atom insertion gadget for I").add_argument("interp")
    sp = add("lm", "least model with fixpoint trace")
    sp.add_argument("program")
    sp.add_argument("--trace", action="store_true", help="print fixpoint stages")
    sp = add("tp", "one step of the consequence operator")
    sp.add_argument("program")
    sp.add_argument("interp")
    sp = add("models", "enumerate models or supported models")
    sp.add_argument("program")
    sp.add_argument("--kind", choices=("all", "supported"), default="all")
    sp = add("ss-equiv", "subsumption equivalence (T_P == T_R)")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("le", "decide P <= R for a Green relation, with witness")
    sp.add_argument("relation", choices=("l", "r", "j"))
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("equiv", "mutual relation / operator / least-model equivalence")
    sp.add_argument("relation", choices=("l", "r", "j", "ss", "lm"))
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("classes", "partition programs into relation classes")
    sp.add_argument("--relation", choices=("l", "r", "j"), required=True)
    sp.add_argument("--programs", help="file with one program per line")
    sp.add_argument("--enumerate", action="store_true",
                    help="all programs over --alphabet")
    sp.add_argument("--dot", action="store_true", help="emit graphviz")
    add("nonassoc", "find programs with (PQ)R != P(QR)")
    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"horn: error: {exc}\n")
        return 2
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return 2
    started = time.perf_counter()
    try:
        outcome = _HANDLERS[ns.command](ns)
    except _UsageError as exc:
        sys.stderr.write(f"horn: error: {exc}\n")
        return 2
    except ProgramSyntaxError as exc:
        sys.stderr.write(f"horn: parse error: {exc}\n")
        return 2
    except AlphabetError as exc:
        sys.stderr.write(f"horn: alphabet error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"horn: file not found: {exc.filename}\n")
        return 2
    except BoundExceededError as exc:
        sys.stderr.write(f"horn: bound exceeded: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"horn: error: {exc}\n")
        return 2
    elapsed = time.perf_counter() - started
    if ns.json:
        doc = {
            "version": VERSION,
            "command": outcome.command,
            "alphabet": [a.name for a in outcome.alphabet],
            "inputs": outcome.inputs,
            "result": outcome.result,
            "witness": outcome.witness,
            "method": outcome.method,
            "timings": {"seconds": round(elapsed, 6)} if ns.timings else None,
        }
        sys.stdout.write(json.dumps(doc) + "\n")
    else:
        if outcome.text:
            sys.stdout.write(outcome.text + "\n")
        for line in outcome.extra_lines:
            sys.stdout.write(line + "\n")
        if ns.timings:
            sys.stdout.write(f"time: {elapsed:.6f}s\n")
    return outcome.code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
