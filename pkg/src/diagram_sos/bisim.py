"""Strong bisimilarity by partition refinement over the disjoint union of two
transition systems, with distinguishing-trace extraction."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import SortMismatch
from .sos import LTS, build_lts
from .syntax import Signature, Term


@dataclass
class BisimResult:
    related: bool
    partition: list  # block id per state of the union (left states first)
    witness: list = field(default_factory=list)  # [(side, inp, out), ...]
    complete_inputs: bool = True
    sizes: tuple = (0, 0)
    rounds: int = 0

    def witness_text(self, algebra) -> str:
        fw = algebra.format_word
        return " . ".join(f"{fw(i) or 'ε'}/{fw(o) or 'ε'}" for _, i, o in self.witness)

    def to_json(self, algebra) -> dict:
        fw = algebra.format_word
        return {
            "related": self.related,
            "complete_inputs": self.complete_inputs,
            "lts_sizes": list(self.sizes),
            "rounds": self.rounds,
            "witness": [
                {"side": side, "in": fw(i), "out": fw(o)} for side, i, o in self.witness
            ],
        }


def refine(adj: list[list[tuple]]) -> list[list[int]]:
    """Kanellakis-Smolka refinement. ``adj[s]`` lists ``(label, target)``.

    Returns the history of partitions (block id per state), starting from
    the one-block partition and ending at the coarsest stable one.
    """
    n = len(adj)
    history = [[0] * n]
    while True:
        cur = history[-1]
        sigs = {}
        new = []
        for s in range(n):
            sig = (cur[s], frozenset((lab, cur[t]) for lab, t in adj[s]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(cur)):
            return history
        history.append(new)


def is_bisimulation(adj: list[list[tuple]], block: list[int]) -> bool:
    """Independent check that ``block`` is stable: states sharing a block
    have the same (label, target block) sets."""
    seen: dict[int, frozenset] = {}
    for s in range(len(adj)):
        moves = frozenset((lab, block[t]) for lab, t in adj[s])
        if seen.setdefault(block[s], moves) != moves:
            return False
    return True


def _label_order(label, algebra):
    inp, out = label
    return (algebra.word_key(inp), algebra.word_key(out))


def distinguishing_trace(adj, history, s: int, t: int, algebra, side_names=("left", "right")):
    """A trace of labels separating ``s`` from ``t``.

    At each step find the first round that splits the pair, then a move of
    one side (left preferred, labels in carrier order) that the other side
    cannot match into the previous round's block; follow it to the first
    matching-label successor on the other side, if any.
    """
    trace = []
    while True:
        r = next((k for k, p in enumerate(history) if p[s] != p[t]), None)
        if r is None or r == 0:
            return trace
        prev = history[r - 1]
        found = None
        for name, a, b in ((side_names[0], s, t), (side_names[1], t, s)):
            for lab, a2 in sorted(adj[a], key=lambda m: (_label_order(m[0], algebra), m[1])):
                matches = [b2 for lab2, b2 in adj[b] if lab2 == lab]
                if all(prev[b2] != prev[a2] for b2 in matches):
                    found = (name, lab, a2, sorted(matches))
                    break
            if found:
                break
        if found is None:  # cannot happen for a genuine split
            return trace
        name, (inp, out), a2, matches = found
        trace.append((name, inp, out))
        if not matches:
            return trace
        b2 = matches[0]
        # continue from the pair in the orientation of the original sides
        s, t = (a2, b2) if name == side_names[0] else (b2, a2)


def bisimilar_lts(l1: LTS, l2: LTS) -> BisimResult:
    """Bisimilarity of the two roots, each LTS taken as given."""
    n1 = len(l1.states)
    adj = l1.adjacency() + [[(lab, d + n1) for lab, d in row] for row in l2.adjacency()]
    history = refine(adj)
    final = history[-1]
    assert is_bisimulation(adj, final), "refinement produced an unstable partition"
    r1, r2 = l1.root, l2.root + n1
    related = final[r1] == final[r2]
    witness = [] if related else distinguishing_trace(adj, history, r1, r2, l1.algebra)
    return BisimResult(
        related=related,
        partition=final,
        witness=witness,
        complete_inputs=l1.complete and l2.complete,
        sizes=(n1, len(l2.states)),
        rounds=len(history) - 1,
    )


def bisimilar(
    t1: Term,
    t2: Term,
    sig: Signature,
    max_states: int = 10000,
    max_depth: int = 64,
    sig2: Optional[Signature] = None,
) -> BisimResult:
    """Build both transition systems and decide bisimilarity of their roots.

    When either system is truncated the verdict is about the truncated
    systems only and ``complete_inputs`` is false.
    """
    if t1.sort != t2.sort:
        raise SortMismatch(t1.sort, t2.sort)
    l1 = build_lts(t1, sig, max_states, max_depth)
    l2 = build_lts(t2, sig2 or sig, max_states, max_depth)
    return bisimilar_lts(l1, l2)
