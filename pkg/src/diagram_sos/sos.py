"""Labelled transitions of diagrams, and finite transition systems.

Generators get their moves from their rule tables; composite terms combine
the moves of their parts (``;`` joins on equal middle words, ``*``
concatenates words, identities and the symmetry copy or swap labels).
"""
from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .algebra import LabelAlgebra, Word, plain_labels
from .diagram import canonical_key
from .errors import SignatureError, SortMismatch
from .syntax import (
    Gen,
    Generator,
    Id0,
    Id1,
    Seq,
    Signature,
    Sym,
    Tens,
    Term,
    parse_term,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = "diagram-sos/1"


@dataclass(frozen=True)
class Transition:
    """``source --inp/out--> target``; ``target`` is a term of the source's sort."""

    inp: Word
    target: Term
    out: Word


def generator_transitions(gen: Gen, sig: Signature) -> frozenset:
    """All moves of one generator occurrence, per its rule table."""
    try:
        g = sig[gen.symbol]
    except KeyError:
        raise SignatureError(f"generator {gen.symbol!r} is not in the signature") from None
    if g.stateful and gen.state not in g.state_space:
        raise SignatureError(f"state {gen.state!r} is not valid for {gen.symbol}")
    if g.rule is None:
        return frozenset()
    out = set()
    for inp, target, outw in g.rule(g, gen.state):
        inp, outw = tuple(inp), tuple(outw)
        if len(inp) != g.arity or len(outw) != g.coarity:
            raise SignatureError(
                f"rule for {g.symbol} produced words of lengths ({len(inp)}, {len(outw)}); "
                f"expected ({g.arity}, {g.coarity})"
            )
        out.add(Transition(inp, target, outw))
    return frozenset(out)


def _step(t: Term, sig: Signature, memo: Optional[dict]) -> frozenset:
    if memo is not None:
        hit = memo.get(t)
        if hit is not None:
            return hit
    if isinstance(t, Gen):
        res = generator_transitions(t, sig)
    elif isinstance(t, Id0):
        res = frozenset({Transition((), t, ())})
    elif isinstance(t, Id1):
        res = frozenset(Transition((k,), t, (k,)) for k in sig.algebra.carrier)
    elif isinstance(t, Sym):
        K = sig.algebra.carrier
        res = frozenset(Transition((k, l), t, (l, k)) for k in K for l in K)
    elif isinstance(t, Seq):
        left = _step(t.first, sig, memo)
        right = _step(t.second, sig, memo)
        by_mid: dict[tuple, list[Transition]] = {}
        for tr in right:
            by_mid.setdefault(tr.inp, []).append(tr)
        acc = set()
        for a in left:
            for b in by_mid.get(a.out, ()):
                acc.add(Transition(a.inp, Seq(a.target, b.target), b.out))
        res = frozenset(acc)
    elif isinstance(t, Tens):
        left = _step(t.first, sig, memo)
        right = _step(t.second, sig, memo)
        res = frozenset(
            Transition(a.inp + b.inp, Tens(a.target, b.target), a.out + b.out)
            for a in left
            for b in right
        )
    else:
        raise TypeError(f"not a term: {t!r}")
    if memo is not None:
        memo[t] = res
    return res


def step(t: Term, sig: Signature, memo: bool = True) -> frozenset:
    """Every transition of ``t`` (a set of :class:`Transition`)."""
    cache = sig._cache.setdefault("step", {}) if memo else None
    return _step(t, sig, cache)


def step_keys(t: Term, sig: Signature, memo: bool = True) -> frozenset:
    """Transitions with targets replaced by canonical keys, so that two step
    sets can be compared modulo the structural laws."""
    return frozenset((tr.inp, canonical_key(tr.target), tr.out) for tr in step(t, sig, memo))


# --------------------------------------------------------------------------
# LTS
# --------------------------------------------------------------------------


@dataclass
class LTS:
    """States are canonical keys numbered in BFS order; ``terms`` holds the
    first-discovered representative of each state."""

    sort: tuple
    algebra: LabelAlgebra
    states: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # (src, inp, out, dst)
    root: int = 0
    complete: bool = True
    limits: tuple = (10000, 64)
    expanded: set = field(default_factory=set)  # states whose moves are all listed

    def successors(self, s: int) -> list:
        return [(inp, out, dst) for (src, inp, out, dst) in self.edges if src == s]

    def adjacency(self) -> list[list[tuple]]:
        adj = [[] for _ in self.states]
        for src, inp, out, dst in self.edges:
            adj[src].append(((inp, out), dst))
        return adj

    def to_json(self) -> dict:
        fw = self.algebra.format_word
        return {
            "schema": SCHEMA_VERSION,
            "sort": list(self.sort),
            "algebra": self.algebra.name,
            "complete": self.complete,
            "limits": list(self.limits),
            "root": self.root,
            "states": list(self.states),
            "terms": [str(t) for t in self.terms],
            "edges": [[s, fw(i), fw(o), d] for (s, i, o, d) in self.edges],
        }

    def to_dot(self, name: str = "lts") -> str:
        fw = self.algebra.format_word
        lines = [f"digraph {json.dumps(name)} {{", "  rankdir=LR;"]
        for i, t in enumerate(self.terms):
            shape = "doublecircle" if i == self.root else "circle"
            lines.append(f"  s{i} [shape={shape}, label={json.dumps(str(t))}];")
        for s, i, o, d in self.edges:
            label = f"{fw(i) or 'ε'}/{fw(o) or 'ε'}"
            lines.append(f"  s{s} -> s{d} [label={json.dumps(label)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_lts(
    root: Term, sig: Signature, max_states: int = 10000, max_depth: int = 64
) -> LTS:
    """Breadth-first closure of ``root`` under :func:`step`, identifying
    states by canonical key. Hitting a limit leaves ``complete`` false."""
    if max_states < 1 or max_depth < 0:
        raise ValueError("limits must be positive")
    alg = sig.algebra
    lts = LTS(root.sort, alg, limits=(max_states, max_depth))
    index: dict[str, int] = {}
    depth: list[int] = []

    def register(key: str, term: Term, d: int) -> Optional[int]:
        if key in index:
            return index[key]
        if len(lts.states) >= max_states:
            return None
        index[key] = len(lts.states)
        lts.states.append(key)
        lts.terms.append(term)
        depth.append(d)
        return index[key]

    register(canonical_key(root), root, 0)
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if depth[s] >= max_depth:
            lts.complete = False
            continue
        moves = []
        for tr in step(lts.terms[s], sig):
            moves.append((alg.word_key(tr.inp), alg.word_key(tr.out), canonical_key(tr.target), tr))
        moves.sort(key=lambda m: m[:3])
        overflow = False
        out_edges = []
        for _, _, key, tr in moves:
            fresh = key not in index
            d = register(key, tr.target, depth[s] + 1)
            if d is None:
                overflow = True
                continue
            if fresh:
                queue.append(d)
            out_edges.append((s, tr.inp, tr.out, d))
        if overflow:
            lts.complete = False
            log.debug("state limit %d reached", max_states)
            continue
        lts.edges.extend(out_edges)
        lts.expanded.add(s)
    lts.edges.sort(key=lambda e: (e[0], alg.word_key(e[1]), alg.word_key(e[2]), e[3]))
    return lts


# --------------------------------------------------------------------------
# Signatures from tables
# --------------------------------------------------------------------------


def _table_rule(entries: list, holder: dict):
    """Rule function backed by a list of ``(state, inp, out, next)`` rows;
    ``next`` is a state value for stateful generators, otherwise a term (or
    term text, parsed lazily against the final signature)."""

    def rule(g: Generator, state):
        parsed = holder.setdefault(g.symbol, {})
        for i, (st, inp, out, nxt) in enumerate(entries):
            if st != state:
                continue
            if g.stateful:
                target = g.term(nxt)
            else:
                if i not in parsed:
                    t = nxt if isinstance(nxt, Term) else parse_term(nxt, holder["__sig__"])
                    if t.sort != (g.arity, g.coarity):
                        raise SortMismatch(t.sort, (g.arity, g.coarity))
                    parsed[i] = t
                target = parsed[i]
            yield inp, target, out

    return rule


def table_generator(
    symbol: str,
    arity: int,
    coarity: int,
    rows: Sequence,
    holder: dict,
    state_space: Optional[tuple] = None,
) -> Generator:
    rows = [tuple(r) for r in rows]
    for st, inp, out, nxt in rows:
        if len(inp) != arity or len(out) != coarity:
            raise SortMismatch((len(inp), len(out)), (arity, coarity))
        if state_space is not None and (st not in state_space or nxt not in state_space):
            raise SignatureError(f"{symbol}: state outside the declared state space")
    return Generator(symbol, arity, coarity, state_space, _table_rule(rows, holder))


def load_toy_coalgebra(
    entries: Iterable[dict], algebra: Optional[LabelAlgebra] = None, extra: Iterable[Generator] = ()
) -> Signature:
    """Signature whose generators behave exactly as tabulated.

    Each entry is ``{"symbol", "arity", "coarity", "transitions"}`` where a
    transition is ``[in_word, out_word, target]``; the target is a symbol of
    the same sort or any term text of that sort.
    """
    entries = list(entries)
    if algebra is None:
        labels = []
        for e in entries:
            for inp, out, _ in e["transitions"]:
                for c in str(inp) + str(out):
                    if c not in labels:
                        labels.append(c)
        algebra = plain_labels(sorted(labels) or ["a"])
    holder: dict = {}
    gens = list(extra)
    for e in entries:
        rows = []
        for inp, out, target in e["transitions"]:
            iw = algebra.parse_word(inp) if isinstance(inp, str) else tuple(inp)
            ow = algebra.parse_word(out) if isinstance(out, str) else tuple(out)
            rows.append((None, iw, ow, target))
        gens.append(table_generator(e["symbol"], e["arity"], e["coarity"], rows, holder))
    sig = Signature(tuple(gens), algebra)
    holder["__sig__"] = sig
    return sig


def load_signature(obj: dict, algebra: LabelAlgebra, base: Optional[Signature] = None) -> Signature:
    """Signature from the JSON file format::

        {"generators": [{"symbol", "arity", "coarity", "stateful", "states"?,
                         "transitions": [{"state", "in", "out", "next"}]}],
         "frobenius": "none|black|white|both"}

    For stateless generators ``next`` is term text; for stateful ones it is
    a state value. ``base`` contributes further generators (e.g. Frobenius
    structure) that tabulated targets may mention.
    """
    from .syntax import frobenius_generators

    mode = obj.get("frobenius", "none")
    holder: dict = {}
    gens: list[Generator] = list(base.generators) if base is not None else []
    if mode in ("black", "both"):
        gens += [g for g in frobenius_generators("black", algebra) if g.symbol not in {x.symbol for x in gens}]
    if mode in ("white", "both"):
        gens += [g for g in frobenius_generators("white", algebra) if g.symbol not in {x.symbol for x in gens}]
    for spec in obj.get("generators", []):
        stateful = bool(spec.get("stateful", False))
        states = None
        if stateful:
            states = tuple(spec.get("states", algebra.carrier))
        rows = []
        for tr in spec.get("transitions", []):
            inp = algebra.parse_word(tr["in"]) if isinstance(tr["in"], str) else tuple(tr["in"])
            out = algebra.parse_word(tr["out"]) if isinstance(tr["out"], str) else tuple(tr["out"])
            rows.append((tr.get("state"), inp, out, tr["next"]))
        gens.append(
            table_generator(spec["symbol"], spec["arity"], spec["coarity"], rows, holder, states)
        )
    sig = Signature(tuple(gens), algebra, mode)
    holder["__sig__"] = sig
    return sig


TOY_COALGEBRA = [
    {"symbol": "x", "arity": 1, "coarity": 2, "transitions": [["b", "ab", "y"], ["a", "aa", "x"]]},
    {"symbol": "y", "arity": 1, "coarity": 2, "transitions": []},
    {"symbol": "z", "arity": 1, "coarity": 1, "transitions": [["b", "a", "z"]]},
]
