"""Open hypergraphs with linear wires, and their canonical keys.

Two terms are equal modulo the symmetric monoidal laws exactly when their
hypergraphs are isomorphic by a map that fixes the interfaces and respects
port order. Because every wire has one producer end and one consumer end, a
hypergraph is determined by its box labels plus a bijection from producer
ends to consumer ends; the canonical key serialises that bijection under a
canonical box numbering.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .syntax import FROBENIUS_ROLES, Gen, Id0, Id1, Seq, Sort, Sym, Tens, Term

# End points. A producer is ("L", i) for left interface position i or
# ("B", b, p) for output port p of box b. A consumer is ("R", j) or ("B", b, p)
# for input port p of box b.


@dataclass(frozen=True)
class Box:
    symbol: str
    state: object
    n_in: int
    n_out: int

    @property
    def label(self) -> tuple:
        return (self.symbol, self.state)


@dataclass(frozen=True)
class OpenHypergraph:
    """Boxes, plus one wire per producer end naming its consumer end.

    ``wires`` maps every producer end to its consumer end; ``sort`` gives the
    interface widths. Wire identity is the producer end itself.
    """

    sort: Sort
    boxes: tuple  # tuple[Box, ...]
    wires: dict  # producer -> consumer

    def __hash__(self):
        return hash((self.sort, self.boxes, tuple(sorted(self.wires.items(), key=repr))))

    @property
    def left_interface(self) -> list:
        return [("L", i) for i in range(self.sort.left)]

    @property
    def right_interface(self) -> list:
        inv = self.producers()
        return [inv[("R", j)] for j in range(self.sort.right)]

    def producers(self) -> dict:
        """Inverse of ``wires``: consumer end -> producer end."""
        return {c: p for p, c in self.wires.items()}

    def check(self) -> None:
        """Assert the linearity invariant."""
        prods = set(self.left_interface)
        cons = {("R", j) for j in range(self.sort.right)}
        for b, box in enumerate(self.boxes):
            prods.update(("B", b, p) for p in range(box.n_out))
            cons.update(("B", b, p) for p in range(box.n_in))
        assert set(self.wires) == prods, "producer ends do not match wires"
        assert sorted(map(repr, self.wires.values())) == sorted(map(repr, cons)), (
            "consumer ends are not hit exactly once"
        )


# --------------------------------------------------------------------------
# Term -> hypergraph
# --------------------------------------------------------------------------


class _Builder:
    """Builds a hypergraph by structural recursion, with union-find on
    wire placeholders to fuse the interfaces glued by ``;``."""

    def __init__(self):
        self.parent: list[int] = []
        self.boxes: list[Box] = []
        self.box_in: list[list[int]] = []
        self.box_out: list[list[int]] = []

    def fresh(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _to_hypergraph_rec(t: Term, b: _Builder):
    if isinstance(t, Gen):
        ins = [b.fresh() for _ in range(t.arity)]
        outs = [b.fresh() for _ in range(t.coarity)]
        b.boxes.append(Box(t.symbol, t.state, t.arity, t.coarity))
        b.box_in.append(ins)
        b.box_out.append(outs)
        return ins, outs
    if isinstance(t, Id0):
        return [], []
    if isinstance(t, Id1):
        w = b.fresh()
        return [w], [w]
    if isinstance(t, Sym):
        x, y = b.fresh(), b.fresh()
        return [x, y], [y, x]
    if isinstance(t, Seq):
        l1, r1 = _to_hypergraph_rec(t.first, b)
        l2, r2 = _to_hypergraph_rec(t.second, b)
        for x, y in zip(r1, l2):
            b.union(x, y)
        return l1, r2
    if isinstance(t, Tens):
        l1, r1 = _to_hypergraph_rec(t.first, b)
        l2, r2 = _to_hypergraph_rec(t.second, b)
        return l1 + l2, r1 + r2
    raise TypeError(f"not a term: {t!r}")


def to_hypergraph(t: Term) -> OpenHypergraph:
    """Interpret a term as an open hypergraph; identities and symmetries
    contribute no boxes, only wiring."""
    import sys

    b = _Builder()
    limit = sys.getrecursionlimit()
    depth_needed = _depth(t) + 50
    if depth_needed > limit:
        sys.setrecursionlimit(depth_needed)
    left, right = _to_hypergraph_rec(t, b)
    producer: dict[int, tuple] = {}
    consumer: dict[int, tuple] = {}
    for i, w in enumerate(left):
        producer[b.find(w)] = ("L", i)
    for j, w in enumerate(right):
        consumer[b.find(w)] = ("R", j)
    for k, (ins, outs) in enumerate(zip(b.box_in, b.box_out)):
        for p, w in enumerate(ins):
            consumer[b.find(w)] = ("B", k, p)
        for p, w in enumerate(outs):
            producer[b.find(w)] = ("B", k, p)
    wires = {producer[w]: consumer[w] for w in producer}
    return OpenHypergraph(t.sort, tuple(b.boxes), wires)


def _depth(t: Term) -> int:
    best = 0
    stack = [(t, 1)]
    while stack:
        u, d = stack.pop()
        best = max(best, d)
        if isinstance(u, (Seq, Tens)):
            stack.append((u.first, d + 1))
            stack.append((u.second, d + 1))
    return best


# --------------------------------------------------------------------------
# Canonical form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalDiagram:
    key: str
    graph: OpenHypergraph
    sort: Sort


def _label_text(box: Box) -> str:
    if box.state is None:
        return box.symbol
    return f"{box.symbol}({json.dumps(box.state, default=str)})"


def _neighbours(g: OpenHypergraph, prod_of: dict, b: int) -> list[int]:
    """Boxes adjacent to ``b``: producers of its inputs in port order, then
    consumers of its outputs in port order."""
    out = []
    box = g.boxes[b]
    for p in range(box.n_in):
        src = prod_of[("B", b, p)]
        if src[0] == "B":
            out.append(src[1])
    for p in range(box.n_out):
        dst = g.wires[("B", b, p)]
        if dst[0] == "B":
            out.append(dst[1])
    return out


def _bfs(g: OpenHypergraph, prod_of: dict, seeds: list[int], order: dict) -> list[int]:
    """Extend ``order`` (box -> rank) by BFS from ``seeds``; return visit list."""
    visited = []
    queue = deque()
    for s in seeds:
        if s not in order:
            order[s] = len(order)
            visited.append(s)
            queue.append(s)
    while queue:
        b = queue.popleft()
        for n in _neighbours(g, prod_of, b):
            if n not in order:
                order[n] = len(order)
                visited.append(n)
                queue.append(n)
    return visited


def _end_text(end: tuple, order: dict) -> str:
    if end[0] == "R":
        return f"R{end[1]}"
    if end[0] == "L":
        return f"L{end[1]}"
    return f"{order[end[1]]}.{end[2]}"


def _serialise(g: OpenHypergraph, order: dict, boxes: list[int]) -> list:
    """Per box (in ``boxes`` order): label and output-port consumers."""
    rows = []
    for b in boxes:
        box = g.boxes[b]
        rows.append(
            [
                _label_text(box),
                [_end_text(g.wires[("B", b, p)], order) for p in range(box.n_out)],
            ]
        )
    return rows


def _refined_colours(g: OpenHypergraph, prod_of: dict, boxes: list[int], rounds: int = 3) -> dict:
    """Colour refinement restricted to ``boxes``; colours are compressed to
    ranks so they are invariant under renumbering."""
    colour = {b: _label_text(g.boxes[b]) for b in boxes}
    for _ in range(rounds):
        sig = {}
        for b in boxes:
            box = g.boxes[b]
            ins = []
            for p in range(box.n_in):
                src = prod_of[("B", b, p)]
                ins.append((colour.get(src[1]), src[2]) if src[0] == "B" else ("iface",))
            outs = []
            for p in range(box.n_out):
                dst = g.wires[("B", b, p)]
                outs.append((colour.get(dst[1]), dst[2]) if dst[0] == "B" else ("iface",))
            sig[b] = repr((colour[b], ins, outs))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {b: str(ranks[sig[b]]) for b in boxes}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    return colour


def canonical_form(g: OpenHypergraph) -> CanonicalDiagram:
    """Canonical relabelling of ``g`` and its key."""
    prod_of = g.producers()
    order: dict[int, int] = {}
    seeds = []
    for i in range(g.sort.left):
        dst = g.wires[("L", i)]
        if dst[0] == "B":
            seeds.append(dst[1])
    for j in range(g.sort.right):
        src = prod_of[("R", j)]
        if src[0] == "B":
            seeds.append(src[1])
    anchored = _bfs(g, prod_of, seeds, order)

    # closed components: not reachable from either interface
    rest = [b for b in range(len(g.boxes)) if b not in order]
    components = []
    seen: set[int] = set()
    for b in rest:
        if b in seen:
            continue
        comp_order: dict[int, int] = {}
        comp = _bfs(g, prod_of, [b], comp_order)
        seen.update(comp)
        components.append(comp)

    comp_best = []
    for comp in components:
        colours = _refined_colours(g, prod_of, comp)
        least = min(colours.values(), key=lambda c: (int(c) if c.isdigit() else c))
        best = None
        for start in comp:
            if colours[start] != least:
                continue
            local: dict[int, int] = {}
            visit = _bfs(g, prod_of, [start], local)
            text = json.dumps(_serialise(g, local, visit))
            if best is None or text < best[0]:
                best = (text, visit)
        comp_best.append(best)
    comp_best.sort(key=lambda x: x[0])

    final_order = list(anchored)
    for _, visit in comp_best:
        final_order.extend(visit)
    rank = {b: i for i, b in enumerate(final_order)}

    left_row = [_end_text(g.wires[("L", i)], rank) for i in range(g.sort.left)]
    body = _serialise(g, rank, final_order)
    if g.sort == (0, 0) and not g.boxes:
        key = ""
    else:
        key = json.dumps(
            [list(g.sort), [r[0] for r in body], left_row, [r[1] for r in body]],
            separators=(",", ":"),
        )
    graph = _relabel(g, rank)
    return CanonicalDiagram(key, graph, g.sort)


def _relabel(g: OpenHypergraph, rank: dict) -> OpenHypergraph:
    def ren(end):
        return ("B", rank[end[1]], end[2]) if end[0] == "B" else end

    boxes = [None] * len(g.boxes)
    for b, r in rank.items():
        boxes[r] = g.boxes[b]
    wires = {ren(p): ren(c) for p, c in g.wires.items()}
    return OpenHypergraph(g.sort, tuple(boxes), wires)


def canonical_key(t: Term) -> str:
    return canonical_form(to_hypergraph(t)).key


def congruent(t1: Term, t2: Term) -> bool:
    """Equality modulo the symmetric monoidal laws."""
    if t1.sort != t2.sort:
        return False
    return canonical_key(t1) == canonical_key(t2)


def shuffle_graph(g: OpenHypergraph, rng) -> OpenHypergraph:
    """Random box renumbering (used to test key invariance)."""
    perm = list(range(len(g.boxes)))
    rng.shuffle(perm)
    return _relabel(g, {b: perm[b] for b in range(len(g.boxes))})


# --------------------------------------------------------------------------
# Frobenius unit/counit simplification
# --------------------------------------------------------------------------


def _role(box: Box) -> Optional[tuple[str, str]]:
    return FROBENIUS_ROLES.get(box.symbol)


def simplify_frobenius(g: OpenHypergraph) -> OpenHypergraph:
    """Apply the (co)unit laws of the Frobenius generators left to right until
    none applies: a comultiplication with one output discarded by a counit of
    the same colour becomes a wire; a multiplication with one input fed by a
    unit of the same colour becomes a wire; a unit feeding a counit vanishes.

    These laws hold up to bisimilarity in both colours, so the result is a
    semantically equivalent but (usually) smaller diagram.
    """
    boxes = dict(enumerate(g.boxes))
    wires = dict(g.wires)

    def producers():
        return {c: p for p, c in wires.items()}

    changed = True
    while changed:
        changed = False
        prod_of = producers()
        for b, box in sorted(boxes.items()):
            role = _role(box)
            if role is None:
                continue
            colour, kind = role
            if kind == "comult":
                for p in (0, 1):
                    dst = wires[("B", b, p)]
                    if dst[0] != "B":
                        continue
                    other = boxes[dst[1]]
                    if _role(other) != (colour, "counit"):
                        continue
                    # input producer now feeds the surviving output's consumer
                    src = prod_of[("B", b, 0)]
                    keep = wires.pop(("B", b, 1 - p))
                    wires.pop(("B", b, p))
                    wires[src] = keep
                    del boxes[b], boxes[dst[1]]
                    changed = True
                    break
            elif kind == "mult":
                for p in (0, 1):
                    src = prod_of[("B", b, p)]
                    if src[0] != "B":
                        continue
                    other = boxes[src[1]]
                    if _role(other) != (colour, "unit"):
                        continue
                    keep_src = prod_of[("B", b, 1 - p)]
                    out_dst = wires.pop(("B", b, 0))
                    wires.pop(("B", src[1], 0))
                    wires[keep_src] = out_dst
                    del boxes[b], boxes[src[1]]
                    changed = True
                    break
            elif kind == "unit":
                dst = wires[("B", b, 0)]
                if dst[0] == "B" and _role(boxes[dst[1]]) == (colour, "counit"):
                    wires.pop(("B", b, 0))
                    del boxes[b], boxes[dst[1]]
                    changed = True
            if changed:
                break
    # compact box numbering
    alive = sorted(boxes)
    rank = {b: i for i, b in enumerate(alive)}

    def ren(end):
        return ("B", rank[end[1]], end[2]) if end[0] == "B" else end

    return OpenHypergraph(
        g.sort, tuple(boxes[b] for b in alive), {ren(p): ren(c) for p, c in wires.items()}
    )


def simplified_key(t: Term) -> str:
    return canonical_form(simplify_frobenius(to_hypergraph(t))).key


# --------------------------------------------------------------------------
# DOT export
# --------------------------------------------------------------------------


def to_dot(g: OpenHypergraph, name: str = "diagram") -> str:
    """Boxes as nodes, wires as edges, interfaces as ranked anchor nodes."""
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=LR;"]
    lines.append("  { rank=source; " + " ".join(f"L{i};" for i in range(g.sort.left)) + " }")
    lines.append("  { rank=sink; " + " ".join(f"R{j};" for j in range(g.sort.right)) + " }")
    for i in range(g.sort.left):
        lines.append(f'  L{i} [shape=point, xlabel="{i}"];')
    for j in range(g.sort.right):
        lines.append(f'  R{j} [shape=point, xlabel="{j}"];')
    for b, box in enumerate(g.boxes):
        text = box.symbol if box.state is None else f"{box.symbol}({box.state})"
        lines.append(f"  B{b} [shape=box, label={json.dumps(text)}];")

    def node(end):
        if end[0] == "L":
            return f"L{end[1]}", ""
        if end[0] == "R":
            return f"R{end[1]}", ""
        return f"B{end[1]}", str(end[2])

    for p, c in sorted(g.wires.items(), key=repr):
        (a, pa), (b, pb) = node(p), node(c)
        attrs = []
        if pa:
            attrs.append(f'taillabel="{pa}"')
        if pb:
            attrs.append(f'headlabel="{pb}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {a} -> {b}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
