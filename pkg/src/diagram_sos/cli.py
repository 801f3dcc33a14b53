"""Command-line front end. Exit status: 0 success, 1 failed check, 2 usage or
input error."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .algebra import SEMIRING, LabelAlgebra, parse_algebra
from .bisim import bisimilar
from .checks import ProbeConfig, check_frobenius_axioms, congruence_probe, lawvere_counterexample
from .diagram import canonical_key, congruent, to_dot, to_hypergraph
from .errors import DiagramError, ParseError
from .proccalc import (
    ProcessSystem,
    encode,
    format_action,
    format_process,
    milner_window,
    parse_declarations,
    parse_judgement,
    process_lts,
    theorem_check,
    type_check,
    alphabet,
)
from .sos import SCHEMA_VERSION, build_lts, load_signature, step
from .syntax import Signature, circ_signature, frobenius_signature, parse_term, place_term, pretty_print, term_to_tree

log = logging.getLogger("diagram_sos")


class CheckFailed(Exception):
    """Raised after a report has been written, to select exit status 1."""


@dataclass
class RunConfig:
    subcommand: str
    algebra: str = "zmod:2"
    inputs: tuple = ()
    max_states: int = 10000
    max_depth: int = 64
    samples: int = 200
    seed: int = 0
    format: str = "text"
    output: Optional[str] = None

    def __post_init__(self):
        for name in ("max_states", "max_depth", "samples"):
            if getattr(self, name) <= 0:
                raise DiagramError(f"--{name.replace('_', '-')} must be positive")


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _signature(args) -> Signature:
    alg = parse_algebra(args.algebra)
    if getattr(args, "signature", None):
        obj = json.loads(_read(args.signature))
        return load_signature(obj, alg)
    if alg.has(SEMIRING):
        return circ_signature(alg)
    return frobenius_signature("black", alg)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DiagramError(f"cannot read {path}: {exc.strerror}") from None


def _term(text: str, sig: Signature):
    text = text.strip()
    if text.startswith("place:"):
        return place_term(sig, sig.algebra.parse_label(text[len("place:"):]))
    return parse_term(text, sig)


def _emit(args, payload, text: Optional[str] = None) -> None:
    """Write JSON (with schema tag), DOT/plain text, to --output or stdout."""
    fmt = getattr(args, "format", "text")
    if fmt == "json" and not isinstance(payload, str):
        if isinstance(payload, dict):
            payload = {"schema": SCHEMA_VERSION, **payload}
        out = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    else:
        out = text if text is not None else str(payload)
        if not out.endswith("\n"):
            out += "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


def _limits(args) -> dict:
    return {"max_states": args.max_states, "max_depth": args.max_depth}


def _word(alg: LabelAlgebra, w) -> str:
    return alg.format_word(w) or "ε"


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_parse(args):
    sig = _signature(args)
    t = _term(args.term, sig)
    _emit(args, {"term": pretty_print(t), "sort": list(t.sort), "tree": term_to_tree(t)}, pretty_print(t))


def cmd_sort(args):
    sig = _signature(args)
    t = _term(args.term, sig)
    _emit(args, {"sort": list(t.sort)}, f"({t.sort.left}, {t.sort.right})")


def cmd_congruent(args):
    sig = _signature(args)
    a, b = _term(args.left, sig), _term(args.right, sig)
    ok = congruent(a, b)
    _emit(args, {"congruent": ok, "left_key": canonical_key(a), "right_key": canonical_key(b)}, str(ok).lower())
    if not ok:
        raise CheckFailed


def cmd_diagram_dot(args):
    sig = _signature(args)
    t = _term(args.term, sig)
    args.format = "dot"
    _emit(args, to_dot(to_hypergraph(t)))


def cmd_sos_step(args):
    sig = _signature(args)
    t = _term(args.term, sig)
    alg = sig.algebra
    moves = sorted(step(t, sig), key=lambda tr: (alg.word_key(tr.inp), alg.word_key(tr.out), canonical_key(tr.target)))
    rows = [{"in": alg.format_word(m.inp), "out": alg.format_word(m.out), "target": pretty_print(m.target)} for m in moves]
    text = "\n".join(f"{_word(alg, m.inp)}/{_word(alg, m.out)} -> {pretty_print(m.target)}" for m in moves)
    _emit(args, {"sort": list(t.sort), "transitions": rows}, text or "(no transitions)")


def cmd_sos_lts(args):
    sig = _signature(args)
    t = _term(args.term, sig)
    lts = build_lts(t, sig, **_limits(args))
    if args.format == "dot":
        _emit(args, lts.to_dot())
        return
    alg = sig.algebra
    lines = [f"states: {len(lts.states)}  edges: {len(lts.edges)}  complete: {str(lts.complete).lower()}"]
    for i, term in enumerate(lts.terms):
        lines.append(f"s{i}: {pretty_print(term)}")
    for s, i, o, d in lts.edges:
        lines.append(f"s{s} --{_word(alg, i)}/{_word(alg, o)}--> s{d}")
    if not lts.complete:
        lines.append("caveat: exploration hit a limit; the system shown is truncated")
    out = lts.to_json()
    out.pop("schema")
    _emit(args, out, "\n".join(lines))


def cmd_bisim_check(args):
    sig = _signature(args)
    a, b = _term(args.left, sig), _term(args.right, sig)
    res = bisimilar(a, b, sig, **_limits(args))
    text = f"bisimilar: {str(res.related).lower()}"
    if not res.related:
        text += f"\nwitness: {res.witness_text(sig.algebra)} (move of the {res.witness[0][0]} side)" if res.witness else ""
    if not res.complete_inputs:
        text += "\ncaveat: a transition system was truncated; the verdict is about the truncated systems only"
    _emit(args, res.to_json(sig.algebra), text)
    if not res.related:
        raise CheckFailed


def cmd_check_frobenius(args):
    alg = parse_algebra(args.algebra)
    checks = check_frobenius_axioms(args.mode, alg)
    lines = []
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        line = f"{c.name:22s} {status}"
        if not c.result.related:
            line += f"  witness {c.result.witness_text(alg)} ({c.result.witness[0][0]} side)"
        lines.append(line)
    failed = [c.name for c in checks if not c.passed]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} axioms hold for {args.mode} over {alg.name}")
    _emit(
        args,
        {"mode": args.mode, "algebra": alg.name, "checks": [c.to_json(alg) for c in checks], "failed": failed},
        "\n".join(lines),
    )
    if failed:
        raise CheckFailed


def cmd_congruence_probe(args):
    sig = _signature(args)
    rep = congruence_probe(sig, ProbeConfig(samples=args.samples, max_size=args.max_size, seed=args.seed))
    j = rep.to_json()
    text = (
        f"pairs: {j['pairs']} (rewrites {j['pairs_from_rewrites']}, filtered {j['pairs_from_filtering']})\n"
        f"context checks: {j['checks']}  skipped: {j['skipped']}  truncated: {j['incomplete']}\n"
        f"violations: {len(j['violations'])}"
    )
    for v in j["violations"]:
        text += "\n  " + json.dumps(v, ensure_ascii=False)
    _emit(args, j, text)
    if not rep.ok:
        raise CheckFailed


def cmd_lawvere(args):
    rep = lawvere_counterexample()
    j = rep.to_json()
    text = (
        f"d;bcopy outputs: {{{', '.join(rep.copy_outputs)}}}\n"
        f"d*d outputs:     {{{', '.join(rep.tensor_outputs)}}}\n"
        f"bisimilar: {str(rep.result.related).lower()}  witness: {j['witness']}\n"
        f"counterexample confirmed: {str(rep.confirmed).lower()}"
    )
    _emit(args, j, text)
    if not rep.confirmed:
        raise CheckFailed


def _proc_setup(args):
    ds = parse_declarations(_read(args.decls), args.mode)
    n, p = parse_judgement(args.root)
    return ds, type_check(n, p, ds)


def cmd_proc_typecheck(args):
    ds, tp = _proc_setup(args)
    al = sorted(alphabet(tp.process, ds))
    _emit(
        args,
        {"judgement": str(tp), "alphabet": [f"a{i}" for i in al]},
        f"{tp}\nalphabet: {{{', '.join(f'a{i}' for i in al)}}}",
    )


def cmd_proc_encode(args):
    ds, tp = _proc_setup(args)
    t = encode(tp, ds, args.mode)
    _emit(args, {"judgement": str(tp), "term": pretty_print(t), "sort": list(t.sort)}, pretty_print(t))


def cmd_proc_lts(args):
    ds, tp = _proc_setup(args)
    window = milner_window(tp.process) if args.mode == "milner" else 1
    lts = process_lts(tp.process, ProcessSystem(ds, args.mode, window), **_limits(args))
    lines = [f"states: {len(lts.states)}  edges: {len(lts.edges)}  complete: {str(lts.complete).lower()}"]
    lines += [f"p{i}: {format_process(s)}" for i, s in enumerate(lts.states)]
    lines += [f"p{s} --{format_action(a, args.mode)}--> p{d}" for s, a, d in lts.edges]
    _emit(args, lts.to_json(args.mode), "\n".join(lines))


def cmd_proc_theorem(args):
    ds, tp = _proc_setup(args)
    rep = theorem_check(tp, ds, args.mode, args.depth)
    j = rep.to_json()
    name = "Hoare/black" if args.mode == "hoare" else "Milner/white"
    lines = [
        f"{name} correspondence for {tp}, depth {args.depth}: {'pass' if rep.passed else 'FAIL'}",
        f"states: {j['states_checked']}  process moves: {j['process_moves']}  diagram moves: {j['diagram_moves']}",
        f"matched by: {j['equal_by']}",
    ]
    if rep.truncated_comparisons:
        lines.append(f"caveat: {rep.truncated_comparisons} matches rest on truncated bisimilarity")
    for m in rep.mismatches:
        lines.append(f"  {m.direction} at {m.judgement} on {m.action}: {m.detail}")
    if rep.perm_only_failure:
        lines.append(
            "note: every mismatch involves a permutation; the action-renaming convention "
            "(alpha o sigma versus alpha o sigma^-1) is the likely culprit"
        )
    _emit(args, j, "\n".join(lines))
    if not rep.passed:
        raise CheckFailed


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diagram-sos", description="Operational semantics of string diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra="zmod:2", fmt=("text", "json")):
        sp.add_argument("--algebra", default=algebra, help="zmod:N | nat:C | bool | two | int:B | labels:a,b")
        sp.add_argument("--signature", help="signature JSON file (replaces the default generators)")
        sp.add_argument("--format", choices=fmt, default="text")
        sp.add_argument("--output", help="write the report here instead of stdout")

    def limits(sp):
        sp.add_argument("--max-states", type=int, default=10000)
        sp.add_argument("--max-depth", type=int, default=64)

    for name, fn in (("parse", cmd_parse), ("sort", cmd_sort)):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--term", required=True)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("congruent")
    common(sp)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.set_defaults(func=cmd_congruent)

    dg = sub.add_parser("diagram").add_subparsers(dest="action", required=True)
    sp = dg.add_parser("dot")
    common(sp, fmt=("dot",))
    sp.add_argument("--term", required=True)
    sp.set_defaults(func=cmd_diagram_dot)

    so = sub.add_parser("sos").add_subparsers(dest="action", required=True)
    sp = so.add_parser("step")
    common(sp)
    sp.add_argument("--term", required=True)
    sp.set_defaults(func=cmd_sos_step)
    sp = so.add_parser("lts")
    common(sp, fmt=("text", "json", "dot"))
    limits(sp)
    sp.add_argument("--term", required=True)
    sp.set_defaults(func=cmd_sos_lts)

    bi = sub.add_parser("bisim").add_subparsers(dest="action", required=True)
    sp = bi.add_parser("check")
    common(sp)
    limits(sp)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.set_defaults(func=cmd_bisim_check)

    sp = sub.add_parser("check-frobenius")
    common(sp)
    sp.add_argument("--mode", choices=("black", "white"), required=True)
    sp.set_defaults(func=cmd_check_frobenius)

    sp = sub.add_parser("congruence-probe")
    common(sp)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--max-size", type=int, default=6)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_congruence_probe)

    sp = sub.add_parser("lawvere-demo")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_lawvere)

    pr = sub.add_parser("proc").add_subparsers(dest="action", required=True)
    for name, fn in (("typecheck", cmd_proc_typecheck), ("encode", cmd_proc_encode), ("lts", cmd_proc_lts), ("theorem", cmd_proc_theorem)):
        sp = pr.add_parser(name)
        sp.add_argument("--decls", required=True, help="declaration file")
        sp.add_argument("--root", required=True, help="typed root, e.g. '1: nu(2) (f [perm 1 2] | g)'")
        sp.add_argument("--mode", choices=("hoare", "milner"), default="hoare")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output")
        if name == "theorem":
            sp.add_argument("--depth", type=int, default=3)
        if name == "lts":
            limits(sp)
        sp.set_defaults(func=fn)
    return p


def _run_config(args) -> RunConfig:
    return RunConfig(
        subcommand=" ".join(x for x in (args.command, getattr(args, "action", None)) if x),
        algebra=getattr(args, "algebra", "zmod:2"),
        inputs=tuple(x for x in (getattr(args, "decls", None), getattr(args, "signature", None)) if x),
        max_states=getattr(args, "max_states", 10000),
        max_depth=getattr(args, "max_depth", 64),
        samples=getattr(args, "samples", 200),
        seed=getattr(args, "seed", 0),
        format=getattr(args, "format", "text"),
        output=getattr(args, "output", None),
    )


def main(argv: Optional[list[str]] = None) -> int:
    level = os.environ.get("DIAGRAM_SOS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = _run_config(args)
        log.debug("run config: %s", asdict(cfg))
        args.func(args)
    except CheckFailed:
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.text is not None and exc.pos is not None and "\n" not in exc.text and exc.pos <= len(exc.text):
            print(f"  {exc.text}\n  {' ' * exc.pos}^", file=sys.stderr)
        return 2
    except (DiagramError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
