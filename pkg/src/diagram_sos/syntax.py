"""Sorted diagrammatic terms: signatures, AST, sort inference, parser, printer.

Surface grammar (``*`` binds tighter than ``;``, both left-associative)::

    term  := tens (';' tens)*
    tens  := atom ('*' atom)*
    atom  := 'id' | 'id0' | 'swap' | SYMBOL | SYMBOL '(' STATE ')' | '(' term ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, NamedTuple, Optional

from .algebra import SEMIRING, ABELIAN_GROUP, LabelAlgebra, Word
from .errors import ParseError, SignatureError, SortMismatch


class Sort(NamedTuple):
    left: int
    right: int


# --------------------------------------------------------------------------
# Terms
# --------------------------------------------------------------------------


class Term:
    """Base class of the term AST. Concrete nodes are frozen dataclasses that
    compute their sort on construction (raising :class:`SortMismatch`)."""

    __slots__ = ()
    sort: Sort
    size = 1  # number of atoms; composites override per instance

    def __hash__(self):
        return self._hash

    # convenience operators, mirroring the surface syntax
    def __rshift__(self, other: "Term") -> "Seq":
        return Seq(self, other)

    def __matmul__(self, other: "Term") -> "Tens":
        return Tens(self, other)

    def __str__(self):
        return pretty_print(self)


@dataclass(frozen=True, eq=True)
class Gen(Term):
    symbol: str
    arity: int
    coarity: int
    state: Hashable = None
    sort: Sort = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sort", Sort(self.arity, self.coarity))
        object.__setattr__(self, "_hash", hash(("G", self.symbol, self.arity, self.coarity, self.state)))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Id0(Term):
    sort: Sort = field(init=False, compare=False, repr=False, default=Sort(0, 0))
    _hash: int = field(init=False, compare=False, repr=False, default=hash("Id0"))
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Id1(Term):
    sort: Sort = field(init=False, compare=False, repr=False, default=Sort(1, 1))
    _hash: int = field(init=False, compare=False, repr=False, default=hash("Id1"))
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Sym(Term):
    sort: Sort = field(init=False, compare=False, repr=False, default=Sort(2, 2))
    _hash: int = field(init=False, compare=False, repr=False, default=hash("Sym"))
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Seq(Term):
    first: Term
    second: Term
    sort: Sort = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b = self.first.sort, self.second.sort
        if a.right != b.left:
            raise SortMismatch(a, b)
        object.__setattr__(self, "sort", Sort(a.left, b.right))
        object.__setattr__(self, "_hash", hash(("S", self.first._hash, self.second._hash)))
        object.__setattr__(self, "size", self.first.size + self.second.size)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Tens(Term):
    first: Term
    second: Term
    sort: Sort = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b = self.first.sort, self.second.sort
        object.__setattr__(self, "sort", Sort(a.left + b.left, a.right + b.right))
        object.__setattr__(self, "_hash", hash(("T", self.first._hash, self.second._hash)))
        object.__setattr__(self, "size", self.first.size + self.second.size)

    __hash__ = Term.__hash__


ID0 = Id0()
ID1 = Id1()
SWAP = Sym()


def infer_sort(t: Term) -> Sort:
    """The unique sort of ``t`` (computed bottom-up when the tree was built)."""
    if isinstance(t, Gen):
        return Sort(t.arity, t.coarity)
    if isinstance(t, (Id0, Id1, Sym)):
        return t.sort
    if isinstance(t, Seq):
        a, b = infer_sort(t.first), infer_sort(t.second)
        if a.right != b.left:
            raise SortMismatch(a, b)
        return Sort(a.left, b.right)
    if isinstance(t, Tens):
        a, b = infer_sort(t.first), infer_sort(t.second)
        return Sort(a.left + b.left, a.right + b.right)
    raise TypeError(f"not a term: {t!r}")


def term_size(t: Term) -> int:
    """Number of atoms (leaves) in the tree."""
    return t.size


def box_count(t: Term) -> int:
    """Number of generator occurrences."""
    if isinstance(t, (Seq, Tens)):
        return box_count(t.first) + box_count(t.second)
    return 1 if isinstance(t, Gen) else 0


def generators_of(t: Term) -> Iterable[Gen]:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Seq, Tens)):
            stack.append(u.second)
            stack.append(u.first)
        elif isinstance(u, Gen):
            yield u


def seq_all(terms: Iterable[Term]) -> Term:
    """Left-nested sequential composition; raises on an empty iterable."""
    out = None
    for t in terms:
        out = t if out is None else Seq(out, t)
    if out is None:
        raise ValueError("seq_all of nothing")
    return out


def tens_all(terms: Iterable[Term]) -> Term:
    """Left-nested parallel composition; the empty product is ``id0``."""
    out = None
    for t in terms:
        out = t if out is None else Tens(out, t)
    return ID0 if out is None else out


def identity(n: int) -> Term:
    """``id_n``: ``id0`` for 0, otherwise ``n`` copies of ``id`` in parallel."""
    if n < 0:
        raise ValueError("negative width")
    return tens_all([ID1] * n)


def symmetry(n: int, m: int) -> Term:
    """``sigma_{n,m} : (n+m, m+n)``, built recursively from ``swap``."""
    if n == 0 or m == 0:
        return identity(n + m)
    if n == 1 and m == 1:
        return SWAP
    if n == 1:
        # sigma_{1,m} = (swap * id_{m-1}) ; (id_1 * sigma_{1,m-1})
        return Seq(_pad(SWAP, 0, m - 1), Tens(ID1, symmetry(1, m - 1)))
    # sigma_{n,m} = (id_{n-1} * sigma_{1,m}) ; (sigma_{n-1,m} * id_1)
    return Seq(_pad(symmetry(1, m), n - 1, 0), Tens(symmetry(n - 1, m), ID1))


def _pad(t: Term, before: int, after: int) -> Term:
    out = t
    if before:
        out = Tens(identity(before), out)
    if after:
        out = Tens(out, identity(after))
    return out


def permutation(targets: list[int]) -> Term:
    """Wiring term of sort ``(n, n)`` sending left wire ``i`` to right position
    ``targets[i]`` (0-based), built from adjacent swaps."""
    n = len(targets)
    if sorted(targets) != list(range(n)):
        raise ValueError(f"not a permutation: {targets}")
    if n == 0:
        return ID0
    cur = list(targets)  # cur[p] = destination of the wire now at position p
    layers = []
    changed = True
    while changed:
        changed = False
        for p in range(n - 1):
            if cur[p] > cur[p + 1]:
                layers.append(_pad(SWAP, p, n - p - 2))
                cur[p], cur[p + 1] = cur[p + 1], cur[p]
                changed = True
    if not layers:
        return identity(n)
    return seq_all(layers)


# --------------------------------------------------------------------------
# Generators and signatures
# --------------------------------------------------------------------------

# A rule maps (generator, state) to (input word, target term, output word) triples.
Rule = Callable[["Generator", Hashable], Iterable[tuple[Word, Term, Word]]]


@dataclass(frozen=True)
class Generator:
    symbol: str
    arity: int
    coarity: int
    state_space: Optional[tuple] = None
    rule: Optional[Rule] = field(default=None, compare=False, repr=False)
    family: str = "plain"  # "black", "white" or "plain"

    @property
    def stateful(self) -> bool:
        return self.state_space is not None

    def term(self, state=None) -> Gen:
        return Gen(self.symbol, self.arity, self.coarity, state)


FROBENIUS_MODES = ("none", "black", "white", "both")


@dataclass(frozen=True)
class Signature:
    generators: tuple
    algebra: LabelAlgebra
    frobenius_mode: str = "none"
    allow_nongroup_white: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        table = {}
        for g in self.generators:
            if g.symbol in table:
                raise SignatureError(f"duplicate generator symbol {g.symbol!r}")
            if g.symbol in _KEYWORDS:
                raise SignatureError(f"generator symbol {g.symbol!r} is reserved")
            table[g.symbol] = g
        if self.frobenius_mode not in FROBENIUS_MODES:
            raise SignatureError(f"unknown frobenius mode {self.frobenius_mode!r}")
        if (
            self.frobenius_mode in ("white", "both")
            and not self.algebra.has(ABELIAN_GROUP)
            and not self.allow_nongroup_white
        ):
            raise SignatureError(
                f"white Frobenius structure needs an abelian group of labels; "
                f"{self.algebra.name} has none"
            )
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_cache", {})

    def __getitem__(self, symbol: str) -> Generator:
        return self._table[symbol]

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._table

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def with_generators(self, extra: Iterable[Generator]) -> "Signature":
        return Signature(
            self.generators + tuple(extra),
            self.algebra,
            self.frobenius_mode,
            self.allow_nongroup_white,
        )


# --------------------------------------------------------------------------
# Built-in generator rules
# --------------------------------------------------------------------------


def _black_rules(alg: LabelAlgebra) -> dict[str, tuple[int, int, Rule]]:
    K = alg.carrier
    return {
        "bdel": (1, 0, lambda g, s: [((k,), g.term(), ()) for k in K]),
        "bcopy": (1, 2, lambda g, s: [((k,), g.term(), (k, k)) for k in K]),
        "bnew": (0, 1, lambda g, s: [((), g.term(), (k,)) for k in K]),
        "bmerge": (2, 1, lambda g, s: [((k, k), g.term(), (k,)) for k in K]),
    }


def _white_rules(alg: LabelAlgebra) -> dict[str, tuple[int, int, Rule]]:
    K, add, zero = alg.carrier, alg.add, alg.zero
    if add is None or zero is None:
        raise SignatureError(f"white generators need additive structure; {alg.name} has none")

    def wadd(g, s):
        out = []
        for k in K:
            for l in K:
                x = add(k, l)
                if x is not None:
                    out.append(((k, l), g.term(), (x,)))
        return out

    def wcopy(g, s):
        out = []
        for k in K:
            for l in K:
                x = add(k, l)
                if x is not None:
                    out.append(((x,), g.term(), (k, l)))
        return out

    return {
        "wdel": (1, 0, lambda g, s: [((zero,), g.term(), ())]),
        "wcopy": (1, 2, wcopy),
        "wzero": (0, 1, lambda g, s: [((), g.term(), (zero,))]),
        "wadd": (2, 1, wadd),
    }


def frobenius_generators(colour: str, algebra: LabelAlgebra) -> list[Generator]:
    """The four (co)monoid generators of one colour: counit, comultiplication,
    unit, multiplication."""
    rules = _black_rules(algebra) if colour == "black" else _white_rules(algebra)
    return [Generator(sym, a, c, None, rule, colour) for sym, (a, c, rule) in rules.items()]


# Role of each Frobenius generator symbol: (colour, role)
FROBENIUS_ROLES = {
    "bdel": ("black", "counit"),
    "bcopy": ("black", "comult"),
    "bnew": ("black", "unit"),
    "bmerge": ("black", "mult"),
    "wdel": ("white", "counit"),
    "wcopy": ("white", "comult"),
    "wzero": ("white", "unit"),
    "wadd": ("white", "mult"),
}


def frobenius_symbol(colour: str, role: str) -> str:
    for sym, (c, r) in FROBENIUS_ROLES.items():
        if c == colour and r == role:
            return sym
    raise KeyError((colour, role))


def circ_signature(algebra: LabelAlgebra) -> Signature:
    """The twelve-generator signature with the register/scalar calculus rules."""
    if not algebra.has(SEMIRING):
        raise SignatureError(f"the register calculus needs a semiring; {algebra.name} is not one")
    K, mul = algebra.carrier, algebra.mul

    def reg(g, k):
        return [((l,), g.term(l), (k,)) for l in K]

    def coreg(g, k):
        return [((k,), g.term(l), (l,)) for l in K]

    def amp(g, k):
        out = []
        for l in K:
            x = mul(l, k)
            if x is not None:
                out.append(((l,), g.term(k), (x,)))
        return out

    def coamp(g, k):
        out = []
        for l in K:
            x = mul(l, k)
            if x is not None:
                out.append(((x,), g.term(k), (l,)))
        return out

    black = {g.symbol: g for g in frobenius_generators("black", algebra)}
    white = {g.symbol: g for g in frobenius_generators("white", algebra)}
    gens = [
        black["bdel"],
        black["bcopy"],
        Generator("reg", 1, 1, K, reg),
        Generator("amp", 1, 1, K, amp),
        white["wadd"],
        white["wzero"],
        black["bnew"],
        black["bmerge"],
        Generator("coreg", 1, 1, K, coreg),
        Generator("coamp", 1, 1, K, coamp),
        white["wcopy"],
        white["wdel"],
    ]
    return Signature(tuple(gens), algebra, "black")


def frobenius_signature(colour: str, algebra: LabelAlgebra, strict: bool = False) -> Signature:
    """Signature holding just one colour of Frobenius generators."""
    return Signature(
        tuple(frobenius_generators(colour, algebra)),
        algebra,
        colour,
        allow_nongroup_white=not strict,
    )


def place_term(sig: Signature, k) -> Term:
    """The Petri-net place holding ``k`` tokens (sort (1, 1))."""
    g = sig.__getitem__
    left = Tens(Seq(g("bnew").term(), g("bcopy").term()), ID1)
    mid = Tens(ID1, seq_all([g("wadd").term(), g("reg").term(k), g("wcopy").term()]))
    right = Tens(Seq(g("bmerge").term(), g("bdel").term()), ID1)
    return seq_all([left, mid, right])


def place_term_flat(sig: Signature, k) -> Term:
    """A second rendering of the same place: one generator per layer."""
    g = sig.__getitem__
    return seq_all(
        [
            Tens(g("bnew").term(), ID1),
            Tens(g("bcopy").term(), ID1),
            Tens(ID1, g("wadd").term()),
            Tens(ID1, g("reg").term(k)),
            Tens(ID1, g("wcopy").term()),
            Tens(g("bmerge").term(), ID1),
            Tens(g("bdel").term(), ID1),
        ]
    )


# --------------------------------------------------------------------------
# Parser / printer
# --------------------------------------------------------------------------

_KEYWORDS = {"id": ID1, "id0": ID0, "swap": SWAP}
_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<num>-?\d+)|(?P<punct>[();*]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _TermParser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            what = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected {value!r}, found {what}", pos, self.text)

    def parse(self) -> Term:
        t = self.term()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return t

    def term(self) -> Term:
        t = self.tens()
        while self.peek()[1] == ";":
            _, _, pos = self.take()
            rhs = self.tens()
            try:
                t = Seq(t, rhs)
            except SortMismatch as e:
                raise SortMismatch(e.left, e.right, pos) from None
        return t

    def tens(self) -> Term:
        t = self.atom()
        while self.peek()[1] == "*":
            self.take()
            t = Tens(t, self.atom())
        return t

    def atom(self) -> Term:
        kind, val, pos = self.take()
        if val == "(":
            t = self.term()
            self.expect(")")
            return t
        if kind != "ident":
            what = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected a term, found {what}", pos, self.text)
        if val in _KEYWORDS:
            return _KEYWORDS[val]
        if val not in self.sig:
            raise ParseError(f"unknown generator symbol {val!r}", pos, self.text)
        gen = self.sig[val]
        state = None
        if self.peek()[1] == "(" and gen.stateful:
            self.take()
            skind, sval, spos = self.take()
            if skind not in ("ident", "num"):
                raise ParseError("expected a state value", spos, self.text)
            state = _match_state(gen, sval)
            if state is _MISSING:
                raise ParseError(
                    f"state {sval!r} is not in the state space of {gen.symbol}", spos, self.text
                )
            self.expect(")")
        elif gen.stateful:
            raise ParseError(f"generator {gen.symbol!r} needs a state argument", pos, self.text)
        return gen.term(state)


_MISSING = object()


def _match_state(gen: Generator, text: str):
    for v in gen.state_space:
        if str(v) == text:
            return v
    return _MISSING


def parse_term(text: str, sig: Signature) -> Term:
    """Parse surface syntax into a sorted term."""
    return _TermParser(text, sig).parse()


def _atom_text(t: Term) -> str:
    if isinstance(t, Gen):
        return t.symbol if t.state is None else f"{t.symbol}({t.state})"
    if isinstance(t, Id0):
        return "id0"
    if isinstance(t, Id1):
        return "id"
    if isinstance(t, Sym):
        return "swap"
    raise TypeError(t)


def pretty_print(t: Term) -> str:
    """Emit surface syntax with the minimum parentheses needed to round-trip."""
    if isinstance(t, Seq):
        rhs = pretty_print(t.second)
        if isinstance(t.second, Seq):
            rhs = f"({rhs})"
        return f"{pretty_print(t.first)} ; {rhs}"
    if isinstance(t, Tens):
        lhs = pretty_print(t.first)
        rhs = pretty_print(t.second)
        if isinstance(t.first, Seq):
            lhs = f"({lhs})"
        if isinstance(t.second, (Seq, Tens)):
            rhs = f"({rhs})"
        return f"{lhs} * {rhs}"
    return _atom_text(t)


def term_to_tree(t: Term):
    """Nested-list view of the AST, used for JSON output."""
    if isinstance(t, Seq):
        return ["seq", term_to_tree(t.first), term_to_tree(t.second)]
    if isinstance(t, Tens):
        return ["tens", term_to_tree(t.first), term_to_tree(t.second)]
    if isinstance(t, Gen):
        return ["gen", t.symbol] + ([t.state] if t.state is not None else [])
    return [_atom_text(t)]
