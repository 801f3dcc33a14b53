"""Executable semantic checks: Frobenius laws under bisimilarity, congruence
of bisimilarity under random contexts, and the Lawvere-theory failure."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .algebra import LabelAlgebra, plain_labels
from .bisim import BisimResult, bisimilar
from .diagram import congruent
from .rewrite import TermSampler, random_congruent, signature_atoms
from .sos import load_toy_coalgebra, step
from .syntax import (
    ID1,
    SWAP,
    Seq,
    Signature,
    Tens,
    Term,
    frobenius_generators,
    frobenius_signature,
    frobenius_symbol,
    pretty_print,
)


@dataclass
class AxiomCheck:
    name: str
    lhs: Term
    rhs: Term
    result: BisimResult

    @property
    def passed(self) -> bool:
        return self.result.related and self.result.complete_inputs

    def to_json(self, algebra) -> dict:
        d = {"name": self.name, "pass": self.passed, "lhs": str(self.lhs), "rhs": str(self.rhs)}
        d.update(self.result.to_json(algebra))
        return d


def frobenius_axioms(colour: str, sig: Signature) -> list[tuple[str, Term, Term]]:
    """The eleven special-Frobenius equations as term pairs of one colour."""

    def g(role):
        return sig[frobenius_symbol(colour, role)].term()

    copy, dele, new, merge = g("comult"), g("counit"), g("unit"), g("mult")
    return [
        ("comonoid_assoc", Seq(copy, Tens(copy, ID1)), Seq(copy, Tens(ID1, copy))),
        ("comonoid_comm", Seq(copy, SWAP), copy),
        ("comonoid_unit_left", Seq(copy, Tens(dele, ID1)), ID1),
        ("comonoid_unit_right", Seq(copy, Tens(ID1, dele)), ID1),
        ("monoid_assoc", Seq(Tens(merge, ID1), merge), Seq(Tens(ID1, merge), merge)),
        ("monoid_comm", Seq(SWAP, merge), merge),
        ("monoid_unit_left", Seq(Tens(new, ID1), merge), ID1),
        ("monoid_unit_right", Seq(Tens(ID1, new), merge), ID1),
        ("special", Seq(copy, merge), ID1),
        ("frobenius_left", Seq(Tens(copy, ID1), Tens(ID1, merge)), Seq(merge, copy)),
        ("frobenius_right", Seq(Tens(ID1, copy), Tens(merge, ID1)), Seq(merge, copy)),
    ]


def check_frobenius_axioms(mode: str, algebra: LabelAlgebra) -> list[AxiomCheck]:
    """Check every axiom's two sides for bisimilarity in one colour.

    The white colour is instantiated even without group structure, so that
    failures over such algebras are reported rather than refused.
    """
    if mode not in ("black", "white"):
        raise ValueError(f"mode must be black or white, not {mode!r}")
    sig = frobenius_signature(mode, algebra, strict=False)
    return [
        AxiomCheck(name, lhs, rhs, bisimilar(lhs, rhs, sig))
        for name, lhs, rhs in frobenius_axioms(mode, sig)
    ]


# --------------------------------------------------------------------------
# Congruence probe
# --------------------------------------------------------------------------


@dataclass
class ProbeConfig:
    samples: int = 200
    max_size: int = 6
    seed: int = 0
    context_size: int = 2
    max_width: int = 3
    filter_tries: int = 6
    max_states: int = 2000
    max_depth: int = 32


@dataclass
class ProbeReport:
    config: ProbeConfig
    pairs: int = 0
    from_rewrites: int = 0
    from_filter: int = 0
    congruent_pairs_bisimilar: int = 0
    checks: int = 0
    skipped: int = 0
    incomplete: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "samples": self.config.samples,
            "max_size": self.config.max_size,
            "seed": self.config.seed,
            "pairs": self.pairs,
            "pairs_from_rewrites": self.from_rewrites,
            "pairs_from_filtering": self.from_filter,
            "checks": self.checks,
            "skipped": self.skipped,
            "incomplete": self.incomplete,
            "violations": self.violations,
        }


def congruence_probe(sig: Signature, config: Optional[ProbeConfig] = None, **overrides) -> ProbeReport:
    """Sample bisimilar pairs ``(a, b)`` and random contexts, and check that
    ``c;a;d ~ c;b;d`` and ``a*e ~ b*e``.

    Pairs come from two sources: a random term paired with a random rewrite
    of itself (equal modulo the structural laws, hence bisimilar), and pairs
    of independently sampled terms of equal sort that turn out bisimilar.
    """
    cfg = config or ProbeConfig()
    for k, v in overrides.items():
        setattr(cfg, k, v)
    rng = random.Random(cfg.seed)
    sampler = TermSampler(signature_atoms(sig), rng, cfg.max_width)
    report = ProbeReport(cfg)
    lim = dict(max_states=cfg.max_states, max_depth=cfg.max_depth)

    for i in range(cfg.samples):
        a = sampler.term(rng.randint(1, cfg.max_size))
        b = None
        if i % 2 == 1:
            for _ in range(cfg.filter_tries):
                cand = sampler.with_sort(a.sort.left, a.sort.right, rng.randint(1, cfg.max_size), tries=20)
                if cand is None or cand == a:
                    continue
                res = bisimilar(a, cand, sig, **lim)
                if res.related and res.complete_inputs:
                    b = cand
                    report.from_filter += 1
                    break
        if b is None:
            b = random_congruent(a, rng, steps=rng.randint(1, 4), max_size=cfg.max_size + 6)
            report.from_rewrites += 1
            pre = bisimilar(a, b, sig, **lim)
            if congruent(a, b) and pre.related:
                report.congruent_pairs_bisimilar += 1
            elif congruent(a, b):
                report.violations.append(
                    {"kind": "congruent-not-bisimilar", "a": str(a), "b": str(b)}
                )
                continue
        report.pairs += 1

        n, m = a.sort
        c = _context_into(sampler, n, cfg.context_size, rng)
        d = sampler.with_left(m, cfg.context_size)
        e = sampler.term(rng.randint(1, cfg.context_size))
        if c is None or d is None or max(Seq(Seq(c, a), d).sort) > cfg.max_width + 1:
            report.skipped += 1
        else:
            _check(report, "seq-context", Seq(Seq(c, a), d), Seq(Seq(c, b), d), sig, lim)
        _check(report, "tens-context", Tens(a, e), Tens(b, e), sig, lim)
    return report


def _context_into(sampler: TermSampler, n: int, size: int, rng) -> Optional[Term]:
    """A term whose right interface has width ``n``."""
    for _ in range(60):
        t = sampler.term(rng.randint(1, size))
        if t.sort.right == n:
            return t
    return None


def _check(report: ProbeReport, kind: str, lhs: Term, rhs: Term, sig: Signature, lim: dict) -> None:
    res = bisimilar(lhs, rhs, sig, **lim)
    report.checks += 1
    if not res.complete_inputs:
        report.incomplete += 1
        return
    if not res.related:
        report.violations.append(
            {
                "kind": kind,
                "lhs": pretty_print(lhs),
                "rhs": pretty_print(rhs),
                "witness": res.witness_text(sig.algebra),
            }
        )


# --------------------------------------------------------------------------
# Lawvere counterexample
# --------------------------------------------------------------------------


@dataclass
class LawvereReport:
    copy_outputs: list
    tensor_outputs: list
    result: BisimResult
    algebra: LabelAlgebra

    @property
    def confirmed(self) -> bool:
        return (
            not self.result.related
            and set(self.copy_outputs) < set(self.tensor_outputs)
        )

    def to_json(self) -> dict:
        return {
            "d;bcopy outputs": self.copy_outputs,
            "d*d outputs": self.tensor_outputs,
            "bisimilar": self.result.related,
            "witness": self.result.witness_text(self.algebra),
            "witness_length": len(self.result.witness),
            "counterexample_confirmed": self.confirmed,
        }


def lawvere_signature() -> Signature:
    """A single generator ``d : (0, 1)`` that can emit ``a`` or ``b`` forever,
    next to the black (co)monoid over the labels ``{a, b}``."""
    alg = plain_labels(["a", "b"])
    return load_toy_coalgebra(
        [{"symbol": "d", "arity": 0, "coarity": 1, "transitions": [["", "a", "d"], ["", "b", "d"]]}],
        alg,
        extra=frobenius_generators("black", alg),
    )


def lawvere_counterexample() -> LawvereReport:
    sig = lawvere_signature()
    d = sig["d"].term()
    copied = Seq(d, sig["bcopy"].term())
    doubled = Tens(d, d)
    fw = sig.algebra.format_word
    outs = lambda t: sorted({fw(tr.out) for tr in step(t, sig)})
    return LawvereReport(outs(copied), outs(doubled), bisimilar(copied, doubled, sig), sig.algebra)
