"""The symmetric monoidal laws as one-step term rewrites, in both directions.

Used three ways: to generate pairs of terms that are equal by construction,
as a brute-force oracle for the canonical-key decision procedure, and to
produce random well-sorted terms for property tests.
"""
from __future__ import annotations

import random
from typing import Iterator, Optional, Sequence

from .syntax import (
    ID0,
    ID1,
    SWAP,
    Gen,
    Seq,
    Signature,
    Tens,
    Term,
    identity,
    symmetry,
    term_size,
)

LAW_NAMES = (
    "tens_assoc",
    "tens_unit",
    "seq_assoc",
    "seq_unit",
    "swap_involution",
    "interchange",
    "slide_left",
    "slide_right",
)


def _is_identity(t: Term, n: int) -> bool:
    return t.sort == (n, n) and t == identity(n)


def root_rewrites(t: Term, intro: bool = True) -> Iterator[tuple[str, Term]]:
    """All single applications of a law at the root of ``t``.

    With ``intro`` false, only rewrites that do not introduce fresh identity
    or unit material are produced.
    """
    if isinstance(t, Tens):
        f, g = t.first, t.second
        if isinstance(f, Tens):
            yield "tens_assoc", Tens(f.first, Tens(f.second, g))
        if isinstance(g, Tens):
            yield "tens_assoc", Tens(Tens(f, g.first), g.second)
        if f == ID0:
            yield "tens_unit", g
        if g == ID0:
            yield "tens_unit", f
        if isinstance(f, Seq) and isinstance(g, Seq):
            yield "interchange", Seq(Tens(f.first, g.first), Tens(f.second, g.second))
    if isinstance(t, Seq):
        f, g = t.first, t.second
        if isinstance(f, Seq):
            yield "seq_assoc", Seq(f.first, Seq(f.second, g))
        if isinstance(g, Seq):
            yield "seq_assoc", Seq(Seq(f, g.first), g.second)
        if _is_identity(g, g.sort.left):
            yield "seq_unit", f
        if _is_identity(f, f.sort.left):
            yield "seq_unit", g
        if f == SWAP and g == SWAP:
            yield "swap_involution", Tens(ID1, ID1)
        if (
            isinstance(f, Tens)
            and isinstance(g, Tens)
            and f.first.sort.right == g.first.sort.left
        ):
            yield "interchange", Tens(Seq(f.first, g.first), Seq(f.second, g.second))
        # sigma_{1,n} ; (h * id)  <->  (id * h) ; sigma_{1,m}
        if isinstance(g, Tens) and g.second == ID1:
            h = g.first
            n, m = h.sort
            if f == symmetry(1, n):
                yield "slide_left", Seq(Tens(ID1, h), symmetry(1, m))
        if isinstance(f, Tens) and f.first == ID1:
            h = f.second
            n, m = h.sort
            if g == symmetry(1, m):
                yield "slide_left", Seq(symmetry(1, n), Tens(h, ID1))
        # sigma_{n,1} ; (id * h)  <->  (h * id) ; sigma_{m,1}
        if isinstance(g, Tens) and g.first == ID1:
            h = g.second
            n, m = h.sort
            if f == symmetry(n, 1):
                yield "slide_right", Seq(Tens(h, ID1), symmetry(m, 1))
        if isinstance(f, Tens) and f.second == ID1:
            h = f.first
            n, m = h.sort
            if g == symmetry(m, 1):
                yield "slide_right", Seq(symmetry(n, 1), Tens(ID1, h))
    if t == Tens(ID1, ID1):
        yield "swap_involution", Seq(SWAP, SWAP)
    if intro:
        yield "tens_unit", Tens(ID0, t)
        yield "tens_unit", Tens(t, ID0)
        yield "seq_unit", Seq(t, identity(t.sort.right)) if t.sort.right else Seq(t, ID0)
        yield "seq_unit", Seq(identity(t.sort.left), t) if t.sort.left else Seq(ID0, t)


def all_rewrites(t: Term, intro: bool = True) -> Iterator[tuple[str, Term]]:
    """Single law applications at every position of ``t``."""
    yield from root_rewrites(t, intro)
    if isinstance(t, Seq):
        for name, u in all_rewrites(t.first, intro):
            yield name, Seq(u, t.second)
        for name, u in all_rewrites(t.second, intro):
            yield name, Seq(t.first, u)
    elif isinstance(t, Tens):
        for name, u in all_rewrites(t.first, intro):
            yield name, Tens(u, t.second)
        for name, u in all_rewrites(t.second, intro):
            yield name, Tens(t.first, u)


def rewrite_closure(t: Term, depth: int, max_size: int, intro: bool = True) -> set[Term]:
    """Terms reachable from ``t`` in at most ``depth`` law applications,
    never passing through a term with more than ``max_size`` atoms."""
    seen = {t}
    frontier = [t]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for _, v in all_rewrites(u, intro and u.size < max_size):
                if v not in seen and term_size(v) <= max_size:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def oracle_congruent(t1: Term, t2: Term, depth: int = 3, max_size: int = 7) -> bool:
    """Meet-in-the-middle search for a chain of law applications linking the
    two terms. ``True`` is a proof; ``False`` only means none was found."""
    if t1.sort != t2.sort:
        return False
    a = rewrite_closure(t1, depth, max_size)
    if t2 in a:
        return True
    return not a.isdisjoint(rewrite_closure(t2, depth, max_size))


def random_rewrite(t: Term, rng: random.Random, intro_prob: float = 0.25) -> tuple[str, Term]:
    """One random law application somewhere in ``t`` (``t`` itself if none)."""
    use_intro = rng.random() < intro_prob
    options = list(all_rewrites(t, intro=use_intro))
    if not options and not use_intro:
        options = list(all_rewrites(t, intro=True))
    if not options:
        return "none", t
    return rng.choice(options)


def random_congruent(t: Term, rng: random.Random, steps: int = 4, max_size: int = 24) -> Term:
    """Apply ``steps`` random law applications, staying under ``max_size``."""
    u = t
    for _ in range(steps):
        for _ in range(8):
            _, v = random_rewrite(u, rng)
            if term_size(v) <= max_size:
                u = v
                break
    return u


# --------------------------------------------------------------------------
# Random terms
# --------------------------------------------------------------------------


def signature_atoms(sig: Signature, structural: bool = True) -> list[Term]:
    """Every atom: each generator at each state, plus ``id``/``swap``/``id0``."""
    atoms: list[Term] = []
    for g in sig.generators:
        if g.stateful:
            atoms.extend(g.term(s) for s in g.state_space)
        else:
            atoms.append(g.term())
    if structural:
        atoms.extend([ID1, SWAP, ID0])
    return atoms


class TermSampler:
    """Random well-sorted terms over a fixed atom pool.

    ``max_width`` bounds every interface width that appears, which keeps the
    transition sets of sampled terms small.
    """

    def __init__(self, atoms: Sequence[Term], rng: random.Random, max_width: int = 3):
        self.atoms = list(atoms)
        self.rng = rng
        self.max_width = max_width
        self.by_left: dict[int, list[Term]] = {}
        for a in self.atoms:
            self.by_left.setdefault(a.sort.left, []).append(a)

    def atom(self) -> Term:
        return self.rng.choice(self.atoms)

    def term(self, size: int) -> Term:
        for _ in range(100):
            t = self._term(size)
            if t is not None and max(t.sort) <= self.max_width:
                return t
        return self.atom()

    def _term(self, size: int) -> Optional[Term]:
        if size <= 1:
            return self.atom()
        k = self.rng.randint(1, size - 1)
        if self.rng.random() < 0.45:
            a, b = self._term(k), self._term(size - k)
            if a is None or b is None:
                return None
            t = Tens(a, b)
        else:
            a = self._term(k)
            if a is None:
                return None
            b = self.with_left(a.sort.right, size - k)
            if b is None:
                return None
            t = Seq(a, b)
        return t if max(t.sort) <= self.max_width else None

    def with_left(self, n: int, size: int) -> Optional[Term]:
        """A term whose left interface has width ``n``, with about ``size`` atoms."""
        if n == 0:
            zeros = self.by_left.get(0, [ID0])
            parts = [self.rng.choice(zeros) for _ in range(max(1, min(size, 2)))]
            out = parts[0]
            for p in parts[1:]:
                out = Tens(out, p)
            return out
        parts: list[Term] = []
        remaining = n
        budget = size
        while remaining > 0:
            choices = [a for a in self.atoms if 1 <= a.sort.left <= remaining]
            if budget <= 0 or not choices:
                a = ID1
            else:
                a = self.rng.choice(choices)
            parts.append(a)
            remaining -= a.sort.left
            budget -= 1
        out = parts[0]
        for p in parts[1:]:
            out = Tens(out, p)
        if budget >= 2 and self.rng.random() < 0.5:
            nxt = self.with_left(out.sort.right, budget - 1)
            if nxt is not None:
                out = Seq(out, nxt)
        return out

    def with_right(self, m: int, size: int) -> Optional[Term]:
        """A term whose right interface has width ``m``."""
        for _ in range(50):
            t = self.term(size)
            if t.sort.right == m:
                return t
        # fallback: pad with units of the right width
        return identity(m) if m else ID0

    def with_sort(self, n: int, m: int, size: int, tries: int = 200) -> Optional[Term]:
        for _ in range(tries):
            t = self.with_left(n, size) if n else self.term(size)
            if t is not None and t.sort == (n, m):
                return t
        return None


def enumerate_terms(atoms: Sequence[Term], max_size: int) -> list[Term]:
    """Every well-sorted term with at most ``max_size`` atoms, by size."""
    by_size: dict[int, list[Term]] = {1: list(atoms)}
    for s in range(2, max_size + 1):
        out = []
        for k in range(1, s):
            for a in by_size[k]:
                for b in by_size[s - k]:
                    out.append(Tens(a, b))
                    if a.sort.right == b.sort.left:
                        out.append(Seq(a, b))
        by_size[s] = out
    return [t for s in sorted(by_size) for t in by_size[s]]


def sample_gen(sig: Signature, rng: random.Random) -> Gen:
    g = rng.choice(sig.generators)
    return g.term(rng.choice(g.state_space)) if g.stateful else g.term()
