"""Finite label algebras.

Every transition label ranges over a finite, ordered carrier. Operations may
be partial: a result outside the carrier is reported as ``None`` and the rule
instance that needed it simply produces no transition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Optional, Sequence

from .errors import AlgebraError

Label = Hashable
Word = tuple  # tuple of labels; () is the empty word

PLAIN_SET = "plain-set"
COMMUTATIVE_MONOID = "commutative-monoid"
SEMIRING = "semiring"
ABELIAN_GROUP = "abelian-group"

BinOp = Callable[[Label, Label], Optional[Label]]
UnOp = Callable[[Label], Optional[Label]]


@dataclass(frozen=True)
class LabelAlgebra:
    """A finite enumerable carrier with optional additive/multiplicative structure.

    The carrier order is part of the algebra's identity: it fixes enumeration
    order everywhere (words, transitions, LTS numbering).
    """

    name: str
    carrier: tuple
    capabilities: frozenset = frozenset({PLAIN_SET})
    zero: Label = None
    one: Label = None
    add: Optional[BinOp] = field(default=None, compare=False, repr=False)
    mul: Optional[BinOp] = field(default=None, compare=False, repr=False)
    neg: Optional[UnOp] = field(default=None, compare=False, repr=False)
    partial: bool = False

    def __post_init__(self):
        if len(set(self.carrier)) != len(self.carrier):
            raise AlgebraError(f"{self.name}: carrier values are not distinct")
        if not self.carrier:
            raise AlgebraError(f"{self.name}: empty carrier")
        index = {v: i for i, v in enumerate(self.carrier)}
        object.__setattr__(self, "_index", index)
        for unit in ("zero", "one"):
            v = getattr(self, unit)
            if v is not None and v not in index:
                raise AlgebraError(f"{self.name}: {unit} {v!r} is not in the carrier")

    def has(self, capability: str) -> bool:
        return capability in self.capabilities

    def __contains__(self, value) -> bool:
        try:
            return value in self._index
        except TypeError:
            return False

    def index(self, value) -> int:
        return self._index[value]

    def word_key(self, word: Sequence) -> tuple:
        """Sort key putting words in lexicographic carrier order."""
        return tuple(self._index[v] for v in word)

    def format_label(self, value) -> str:
        return str(value)

    def format_word(self, word: Sequence) -> str:
        if all(len(str(v)) == 1 for v in self.carrier):
            return "".join(str(v) for v in word)
        return " ".join(str(v) for v in word)

    def parse_label(self, text: str):
        for v in self.carrier:
            if str(v) == text:
                return v
        raise AlgebraError(f"{text!r} is not a label of {self.name}")

    def parse_word(self, text: str) -> Word:
        """Inverse of :meth:`format_word`; also accepts space/comma separated labels."""
        text = text.strip()
        if text in ("", "ε", "eps"):
            return ()
        if any(c in text for c in " ,"):
            parts = [p for p in text.replace(",", " ").split() if p]
        elif all(len(str(v)) == 1 for v in self.carrier):
            parts = list(text)
        else:
            parts = [text]
        return tuple(self.parse_label(p) for p in parts)


def _mod_algebra(n: int) -> LabelAlgebra:
    return LabelAlgebra(
        name=f"zmod:{n}",
        carrier=tuple(range(n)),
        capabilities=frozenset({PLAIN_SET, COMMUTATIVE_MONOID, SEMIRING, ABELIAN_GROUP}),
        zero=0,
        one=1 % n,
        add=lambda x, y: (x + y) % n,
        mul=lambda x, y: (x * y) % n,
        neg=lambda x: (-x) % n,
    )


def _capped(c: int) -> LabelAlgebra:
    def add(x, y):
        s = x + y
        return s if s <= c else None

    def mul(x, y):
        p = x * y
        return p if p <= c else None

    return LabelAlgebra(
        name=f"nat:{c}",
        carrier=tuple(range(c + 1)),
        capabilities=frozenset({PLAIN_SET, COMMUTATIVE_MONOID, SEMIRING}),
        zero=0,
        one=1,
        add=add,
        mul=mul,
        partial=True,
    )


def _bool_or() -> LabelAlgebra:
    return LabelAlgebra(
        name="bool",
        carrier=(0, 1),
        capabilities=frozenset({PLAIN_SET, COMMUTATIVE_MONOID, SEMIRING}),
        zero=0,
        one=1,
        add=lambda x, y: x | y,
        mul=lambda x, y: x & y,
    )


def _two_set() -> LabelAlgebra:
    # Hoare labels: the monoid (2, union, 0), no multiplication
    return LabelAlgebra(
        name="two",
        carrier=(0, 1),
        capabilities=frozenset({PLAIN_SET, COMMUTATIVE_MONOID}),
        zero=0,
        add=lambda x, y: x | y,
    )


def _int_window(b: int) -> LabelAlgebra:
    def add(x, y):
        s = x + y
        return s if -b <= s <= b else None

    return LabelAlgebra(
        name=f"int:{b}",
        carrier=tuple(range(-b, b + 1)),
        capabilities=frozenset({PLAIN_SET, COMMUTATIVE_MONOID, ABELIAN_GROUP}),
        zero=0,
        add=add,
        neg=lambda x: -x,
        partial=True,
    )


BUILTIN_NAMES = ("zmod", "nat_capped", "bool_or", "two_set", "int_window")


def make_builtin_algebra(name: str, params: Sequence[int] = ()) -> LabelAlgebra:
    """Construct one of the built-in label algebras.

    >>> make_builtin_algebra("zmod", [2]).carrier
    (0, 1)
    """
    params = list(params)

    def one_positive() -> int:
        if len(params) != 1:
            raise AlgebraError(f"{name} takes exactly one integer parameter")
        (p,) = params
        if not isinstance(p, int) or p <= 0:
            raise AlgebraError(f"{name}: parameter must be a positive integer, got {p!r}")
        return p

    if name == "zmod":
        return _mod_algebra(one_positive())
    if name == "nat_capped":
        return _capped(one_positive())
    if name == "int_window":
        return _int_window(one_positive())
    if name in ("bool_or", "two_set"):
        if params:
            raise AlgebraError(f"{name} takes no parameters")
        return _bool_or() if name == "bool_or" else _two_set()
    raise AlgebraError(f"unknown algebra {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")


def plain_labels(labels: Sequence, name: str | None = None) -> LabelAlgebra:
    """A bare label set without operations (e.g. ``{a, b}``)."""
    labels = tuple(labels)
    return LabelAlgebra(name=name or "labels:" + ",".join(map(str, labels)), carrier=labels)


_SHORT = {"zmod": "zmod", "nat": "nat_capped", "bool": "bool_or", "two": "two_set", "int": "int_window"}


def parse_algebra(spec: str) -> LabelAlgebra:
    """Parse a CLI algebra spec such as ``zmod:2``, ``nat:6``, ``bool``, ``two``,
    ``int:3`` or ``labels:a,b``."""
    head, _, rest = spec.partition(":")
    if head == "labels":
        labels = [x for x in rest.split(",") if x]
        if not labels:
            raise AlgebraError("labels: needs at least one label")
        return plain_labels(labels)
    if head not in _SHORT:
        raise AlgebraError(f"unknown algebra spec {spec!r}")
    params = []
    if rest:
        try:
            params = [int(x) for x in rest.split(",")]
        except ValueError:
            raise AlgebraError(f"bad parameter in algebra spec {spec!r}") from None
    return make_builtin_algebra(_SHORT[head], params)


def enumerate_words(algebra: LabelAlgebra, n: int) -> list[Word]:
    """All ``|carrier|**n`` words of length ``n`` in lexicographic carrier order."""
    if n < 0:
        raise ValueError("word length must be non-negative")
    return list(itertools.product(algebra.carrier, repeat=n))


def iter_words(algebra: LabelAlgebra, n: int) -> Iterator[Word]:
    return itertools.product(algebra.carrier, repeat=n)
