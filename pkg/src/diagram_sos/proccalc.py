"""A minimal process calculus with Hoare (CSP-style) and Milner (CCS-style)
synchronisation, its encoding into Frobenius string diagrams, and an
executable check that the two step relations agree.

Syntax::

    P    := P '|' P | 'nu' '(' i ')' P | NAME | P '[' 'perm' i j (',' i j)* ']' | '(' P ')'
    decl := NAME '(' n ')' ':=' branch ('+' branch)*   |   NAME '(' n ')' ':=' ['0']
    branch := action '.' P
    action := atom | '{' [atom (',' atom)*] '}'      atom := ['-'] 'a' i

Names are ``a1, a2, ...``; in the AST a name is its 1-based index. A
permutation suffix lists transpositions, applied in the order written.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .algebra import LabelAlgebra, make_builtin_algebra
from .bisim import bisimilar
from .diagram import canonical_key, simplified_key
from .errors import DeclarationError, ParseError, TypingError
from .syntax import (
    ID0,
    Gen,
    Generator,
    Seq,
    Signature,
    Tens,
    Term,
    frobenius_generators,
    frobenius_symbol,
    identity,
    permutation,
    tens_all,
)

MODES = ("hoare", "milner")

# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


class Process:
    __slots__ = ()

    def __str__(self):
        return format_process(self)


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process


@dataclass(frozen=True)
class Nu(Process):
    name: int
    body: Process


@dataclass(frozen=True)
class Var(Process):
    name: str


@dataclass(frozen=True)
class Perm(Process):
    body: Process
    mapping: tuple  # sorted (i, sigma(i)) pairs over the support

    def apply(self, i: int) -> int:
        for a, b in self.mapping:
            if a == i:
                return b
        return i

    def inverse(self, i: int) -> int:
        for a, b in self.mapping:
            if b == i:
                return a
        return i

    @property
    def degree(self) -> int:
        return max((a for a, _ in self.mapping), default=0)


def make_perm(body: Process, transpositions: Iterable[tuple[int, int]]) -> Perm:
    """``body`` under the product of the transpositions, the first one
    applied first."""
    table: dict[int, int] = {}
    for i, j in transpositions:
        if i < 1 or j < 1:
            raise ParseError("names are numbered from 1")
        # sigma := (i j) . sigma
        for k in list(table) + [i, j]:
            table.setdefault(k, k)
        table = {k: (j if v == i else i if v == j else v) for k, v in table.items()}
    return Perm(body, tuple(sorted((k, v) for k, v in table.items() if k != v)))


def format_process(p: Process) -> str:
    if isinstance(p, Var):
        return p.name
    if isinstance(p, Par):
        return f"{_fmt_unary(p.left)} | {_fmt_par_right(p.right)}"
    if isinstance(p, Nu):
        return f"nu({p.name}) {_fmt_atom(p.body)}"
    if isinstance(p, Perm):
        pairs = _as_transpositions(p.mapping)
        inner = _fmt_atom(p.body) if not isinstance(p.body, (Var, Perm)) else format_process(p.body)
        pairs = pairs or [(1, 1)]  # the identity still prints as a suffix
        return f"{inner} [perm {', '.join(f'{i} {j}' for i, j in pairs)}]"
    raise TypeError(p)


def _fmt_unary(p):
    return f"({format_process(p)})" if isinstance(p, Par) else format_process(p)


def _fmt_par_right(p):
    return f"({format_process(p)})" if isinstance(p, Par) else format_process(p)


def _fmt_atom(p):
    return format_process(p) if isinstance(p, Var) else f"({format_process(p)})"


def _as_transpositions(mapping: tuple) -> list[tuple[int, int]]:
    """Transpositions whose left-to-right application gives ``mapping``.

    Peels transpositions off the outside: ``sigma = t . rest`` with
    ``t = (sigma(k) k)``, which fixes ``k`` in ``rest``.
    """
    rest = dict(mapping)
    peeled = []
    while True:
        k = next((x for x in sorted(rest) if rest[x] != x), None)
        if k is None:
            return list(reversed(peeled))
        a = rest[k]
        peeled.append((min(a, k), max(a, k)))
        rest = {x: (k if v == a else a if v == k else v) for x, v in rest.items()}


# --------------------------------------------------------------------------
# Actions
# --------------------------------------------------------------------------

Action = tuple  # sorted ((name, value), ...) with value != 0
ZERO: Action = ()


def make_action(values: dict) -> Action:
    return tuple(sorted((i, v) for i, v in values.items() if v != 0))


def action_support(a: Action) -> frozenset:
    return frozenset(i for i, _ in a)


def action_value(a: Action, i: int) -> int:
    for k, v in a:
        if k == i:
            return v
    return 0


def format_action(a: Action, mode: str = "hoare") -> str:
    if not a:
        return "{}" if mode == "hoare" else "0"
    parts = []
    for i, v in a:
        if mode == "hoare" or v == 1:
            parts.append(f"a{i}")
        elif v == -1:
            parts.append(f"-a{i}")
        else:
            parts.append(f"{v}*a{i}")
    return "{" + ",".join(parts) + "}"


def action_word(a: Action, width: int) -> tuple:
    return tuple(action_value(a, i) for i in range(1, width + 1))


def word_action(word: tuple) -> Action:
    return make_action({i + 1: v for i, v in enumerate(word)})


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_PTOK = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>:=|[()|\[\],.+{}\-:]))")


def _ptokens(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        m = re.compile(r"\s*").match(text, pos)
        pos = m.end()
        if pos >= len(text):
            break
        m = _PTOK.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _ProcParser:
    def __init__(self, text: str, offset: int = 0):
        self.text = text
        self.toks = _ptokens(text)
        self.i = 0
        self.offset = offset

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, pos):
        raise ParseError(msg, pos + self.offset, self.text)

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            self.error(f"expected {value!r}, found {val!r}" if kind != "eof" else f"expected {value!r}, found end of input", pos)
        return pos

    def integer(self):
        kind, val, pos = self.take()
        if kind != "num":
            self.error(f"expected a number, found {val!r}", pos)
        return int(val)

    def name_index(self):
        kind, val, pos = self.take()
        m = re.fullmatch(r"a(\d+)", val) if kind == "name" else None
        if not m or int(m.group(1)) < 1:
            self.error(f"expected a name a1, a2, ..., found {val!r}", pos)
        return int(m.group(1))

    def done(self):
        kind, val, pos = self.peek()
        if kind != "eof":
            self.error(f"unexpected {val!r}", pos)

    # P := unary ('|' unary)*
    def process(self) -> Process:
        p = self.unary()
        while self.peek()[1] == "|":
            self.take()
            p = Par(p, self.unary())
        return p

    def unary(self) -> Process:
        kind, val, pos = self.peek()
        if kind == "name" and val == "nu":
            self.take()
            self.expect("(")
            i = self.integer()
            if i < 1:
                self.error("restricted names are numbered from 1", pos)
            self.expect(")")
            return Nu(i, self.unary())
        return self.postfix()

    def postfix(self) -> Process:
        p = self.atom()
        while self.peek()[1] == "[":
            self.take()
            kind, val, pos = self.take()
            if val != "perm":
                self.error(f"expected 'perm', found {val!r}", pos)
            pairs = []
            while True:
                i = self.integer()
                j = self.integer()
                pairs.append((i, j))
                if self.peek()[1] == ",":
                    self.take()
                    continue
                break
            self.expect("]")
            p = make_perm(p, pairs)
        return p

    def atom(self) -> Process:
        kind, val, pos = self.take()
        if val == "(":
            p = self.process()
            self.expect(")")
            return p
        if kind == "name" and val != "nu":
            return Var(val)
        what = "end of input" if kind == "eof" else repr(val)
        self.error(f"expected a process, found {what}", pos)

    def action(self, mode: str) -> Action:
        values: dict[int, int] = {}
        if self.peek()[1] == "{":
            self.take()
            if self.peek()[1] != "}":
                while True:
                    self._signed_atom(values, mode)
                    if self.peek()[1] == ",":
                        self.take()
                        continue
                    break
            self.expect("}")
        else:
            self._signed_atom(values, mode)
        return make_action(values)

    def _signed_atom(self, values: dict, mode: str):
        sign = 1
        kind, val, pos = self.peek()
        if val == "-":
            if mode != "milner":
                self.error("co-names (-a) exist only in milner mode", pos)
            self.take()
            sign = -1
        i = self.name_index()
        if mode == "hoare":
            values[i] = 1
        else:
            values[i] = values.get(i, 0) + sign


def parse_process(text: str) -> Process:
    p = _ProcParser(text)
    out = p.process()
    p.done()
    return out


@dataclass(frozen=True)
class Declaration:
    name: str
    arity: int
    branches: tuple  # ((Action, Process), ...)


@dataclass
class Declarations:
    mode: str
    decls: dict  # name -> Declaration

    def __getitem__(self, name: str) -> Declaration:
        try:
            return self.decls[name]
        except KeyError:
            raise DeclarationError(f"undeclared process variable {name!r}") from None

    def __contains__(self, name):
        return name in self.decls

    def arity(self, name: str) -> int:
        return self[name].arity


def _logical_lines(text: str) -> list[tuple[str, int]]:
    """Strip comments; join continuation lines (those starting with '+')."""
    out: list[tuple[str, int]] = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0]
        if line.strip():
            if line.strip().startswith("+") and out:
                prev, off = out[-1]
                out[-1] = (prev + " " + line.strip(), off)
            else:
                out.append((line.rstrip("\n"), offset))
        offset += len(raw)
    return out


def parse_declarations(text: str, mode: str = "hoare") -> Declarations:
    """Parse and validate declarations (one per logical line)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    decls: dict[str, Declaration] = {}
    for line, offset in _logical_lines(text):
        p = _ProcParser(line, offset)
        kind, name, pos = p.take()
        if kind != "name":
            p.error(f"expected a process variable, found {name!r}", pos)
        p.expect("(")
        arity = p.integer()
        p.expect(")")
        p.expect(":=")
        branches = []
        if p.peek()[0] == "eof":
            pass
        elif p.peek()[1] == "0" and p.peek(1)[0] == "eof":
            p.take()
        else:
            while True:
                act = p.action(mode)
                p.expect(".")
                branches.append((act, p.process()))
                if p.peek()[1] == "+":
                    p.take()
                    continue
                break
        p.done()
        if name in decls:
            raise DeclarationError(f"process variable {name!r} declared twice")
        decls[name] = Declaration(name, arity, tuple(branches))
    result = Declarations(mode, decls)
    validate_declarations(result)
    return result


def validate_declarations(ds: Declarations) -> None:
    """Every name ``a1..a_ar(f)`` must occur in some branch action or branch
    body; actions and bodies must fit within ``ar(f)`` names."""
    for d in ds.decls.values():
        covered: set[int] = set()
        for act, body in d.branches:
            covered |= action_support(act)
            covered |= alphabet(body, ds)
            if any(i > d.arity for i in action_support(act)):
                raise DeclarationError(
                    f"{d.name}: action {format_action(act, ds.mode)} uses names beyond a{d.arity}"
                )
            w = min_width(body, ds)
            if w > d.arity:
                raise TypingError(
                    f"{d.name}: branch body {format_process(body)} needs width {w} > ar({d.name}) = {d.arity}"
                )
        missing = sorted(set(range(1, d.arity + 1)) - covered)
        if missing:
            raise DeclarationError(
                f"{d.name}: names {', '.join(f'a{i}' for i in missing)} are not covered by any "
                f"branch action or body alphabet"
            )


# --------------------------------------------------------------------------
# Typing and alphabets
# --------------------------------------------------------------------------


def alphabet(p: Process, ds: Declarations) -> frozenset:
    if isinstance(p, Var):
        return frozenset(range(1, ds.arity(p.name) + 1))
    if isinstance(p, Par):
        return alphabet(p.left, ds) | alphabet(p.right, ds)
    if isinstance(p, Nu):
        return alphabet(p.body, ds) - {p.name}
    if isinstance(p, Perm):
        return frozenset(p.apply(i) for i in alphabet(p.body, ds))
    raise TypeError(p)


def min_width(p: Process, ds: Declarations) -> int:
    """Least ``n`` with ``n |- p``; raises :class:`TypingError` if none."""
    if isinstance(p, Var):
        return ds.arity(p.name)
    if isinstance(p, Par):
        return max(min_width(p.left, ds), min_width(p.right, ds))
    if isinstance(p, Nu):
        inner = min_width(p.body, ds)
        if inner > p.name:
            raise TypingError(
                f"nu({p.name}) must restrict the topmost name, but its body needs width {inner}"
            )
        return p.name - 1
    if isinstance(p, Perm):
        return max(min_width(p.body, ds), p.degree)
    raise TypeError(p)


def parallel_components(p: Process) -> int:
    if isinstance(p, Par):
        return parallel_components(p.left) + parallel_components(p.right)
    if isinstance(p, (Nu, Perm)):
        return parallel_components(p.body)
    return 1


@dataclass(frozen=True)
class TypedProcess:
    width: int
    process: Process

    def __str__(self):
        return f"{self.width} |- {format_process(self.process)}"


def type_check(n: int, p: Process, ds: Declarations) -> TypedProcess:
    w = min_width(p, ds)
    if n < w:
        raise TypingError(f"{format_process(p)} needs width at least {w}, got {n}")
    return TypedProcess(n, p)


def parse_judgement(text: str) -> tuple[int, Process]:
    """``"n: P"`` -> ``(n, P)``."""
    head, sep, rest = text.partition(":")
    if not sep or not head.strip().isdigit():
        raise ParseError("expected a judgement of the form 'n: P'", 0, text)
    return int(head.strip()), parse_process(rest)


# --------------------------------------------------------------------------
# Step semantics
# --------------------------------------------------------------------------


@dataclass
class ProcessSystem:
    """Declarations plus the synchronisation mode and label window."""

    decls: Declarations
    mode: str
    window: int = 1  # Milner label bound: values live in [-window, window]
    _memo: dict = field(default_factory=dict, repr=False)

    def in_window(self, a: Action) -> bool:
        return self.mode == "hoare" or all(-self.window <= v <= self.window for _, v in a)

    def step(self, p: Process) -> frozenset:
        """Every ``(action, successor)`` pair of ``p``."""
        hit = self._memo.get(p)
        if hit is not None:
            return hit
        out: set = set()
        ds = self.decls
        if isinstance(p, Var):
            out.add((ZERO, p))
            for act, body in ds[p.name].branches:
                if self.in_window(act):
                    out.add((act, body))
        elif isinstance(p, Perm):
            for act, q in self.step(p.body):
                # (act o sigma)(a_j) = act(sigma(a_j))
                moved = make_action({p.inverse(i): v for i, v in act})
                out.add((moved, Perm(q, p.mapping)))
        elif isinstance(p, Par):
            left, right = self.step(p.left), self.step(p.right)
            if self.mode == "hoare":
                al_l, al_r = alphabet(p.left, ds), alphabet(p.right, ds)
                for a, p2 in left:
                    sa = action_support(a)
                    for b, q2 in right:
                        sb = action_support(b)
                        if sa & al_r == sb & al_l:
                            out.add((make_action({i: 1 for i in sa | sb}), Par(p2, q2)))
            else:
                for a, p2 in left:
                    for b, q2 in right:
                        vals = dict(a)
                        for i, v in b:
                            vals[i] = vals.get(i, 0) + v
                        act = make_action(vals)
                        if self.in_window(act):
                            out.add((act, Par(p2, q2)))
        elif isinstance(p, Nu):
            for a, q in self.step(p.body):
                if self.mode == "hoare":
                    out.add((make_action({i: v for i, v in a if i != p.name}), Nu(p.name, q)))
                elif action_value(a, p.name) == 0:
                    out.add((a, Nu(p.name, q)))
        else:
            raise TypeError(p)
        res = frozenset(out)
        self._memo[p] = res
        return res


def proc_step(p: Process, ds: Declarations, mode: str, window: int = 1) -> frozenset:
    return ProcessSystem(ds, mode, window).step(p)


@dataclass
class ProcessLTS:
    states: list
    edges: list  # (src, action, dst)
    complete: bool

    def to_json(self, mode: str) -> dict:
        return {
            "mode": mode,
            "complete": self.complete,
            "states": [format_process(s) for s in self.states],
            "edges": [[s, format_action(a, mode), d] for s, a, d in self.edges],
        }


def process_lts(root: Process, system: ProcessSystem, max_states: int = 10000, max_depth: int = 64) -> ProcessLTS:
    index = {root: 0}
    states = [root]
    depth = [0]
    edges = []
    complete = True
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if depth[s] >= max_depth:
            complete = False
            continue
        for act, q in sorted(system.step(states[s]), key=lambda m: (m[0], format_process(m[1]))):
            if q not in index:
                if len(states) >= max_states:
                    complete = False
                    continue
                index[q] = len(states)
                states.append(q)
                depth.append(depth[s] + 1)
                queue.append(index[q])
            edges.append((s, act, index[q]))
    return ProcessLTS(states, edges, complete)


# --------------------------------------------------------------------------
# Encoding into diagrams
# --------------------------------------------------------------------------


def _colour(mode: str) -> str:
    return "black" if mode == "hoare" else "white"


def _frob(mode: str, role: str) -> Gen:
    sym = frobenius_symbol(_colour(mode), role)
    arity, coarity = {"comult": (1, 2), "counit": (1, 0), "unit": (0, 1), "mult": (2, 1)}[role]
    return Gen(sym, arity, coarity)


def copy_n(n: int, mode: str) -> Term:
    """``n`` wires each copied, then rewired to ``x1..xn, x1..xn``."""
    if n == 0:
        return ID0
    copies = tens_all([_frob(mode, "comult")] * n)
    targets = []
    for j in range(n):
        targets += [j, n + j]
    return Seq(copies, permutation(targets))


def discard_n(n: int, mode: str) -> Term:
    return tens_all([_frob(mode, "counit")] * n)


def _weaken(t: Term, extra: int, mode: str) -> Term:
    return t if extra == 0 else Tens(t, discard_n(extra, mode))


def _perm_term(p: Perm, width: int) -> Term:
    # left wire j goes to right position sigma(j)
    return permutation([p.apply(j + 1) - 1 for j in range(width)])


def encode(tp: TypedProcess, ds: Declarations, mode: str, strategy: str = "syntax") -> Term:
    """The diagram of sort ``(n, 0)`` for ``n |- P``.

    ``strategy="syntax"`` pushes weakening down to variables and
    restrictions; ``strategy="root"`` encodes every subprocess at its least
    width and weakens right there. The two derivations give bisimilar
    diagrams.
    """
    min_width(tp.process, ds)  # raises on untypeable input
    if tp.width < min_width(tp.process, ds):
        raise TypingError(f"{tp} is not derivable")
    if strategy == "syntax":
        return _enc_syntax(tp.width, tp.process, ds, mode)
    if strategy == "root":
        return _enc_root(tp.width, tp.process, ds, mode)
    raise ValueError(f"unknown strategy {strategy!r}")


def _enc_syntax(w: int, p: Process, ds: Declarations, mode: str) -> Term:
    if isinstance(p, Var):
        ar = ds.arity(p.name)
        return _weaken(Gen(p.name, ar, 0), w - ar, mode)
    if isinstance(p, Par):
        body = Tens(_enc_syntax(w, p.left, ds, mode), _enc_syntax(w, p.right, ds, mode))
        return body if w == 0 else Seq(copy_n(w, mode), body)
    if isinstance(p, Perm):
        inner = _enc_syntax(w, p.body, ds, mode)
        return inner if w == 0 else Seq(_perm_term(p, w), inner)
    if isinstance(p, Nu):
        i = p.name
        if w == i - 1:
            return Seq(Tens(identity(i - 1), _frob(mode, "unit")), _enc_syntax(i, p.body, ds, mode))
        return _weaken(_enc_syntax(i - 1, p, ds, mode), w - (i - 1), mode)
    raise TypeError(p)


def _enc_root(w: int, p: Process, ds: Declarations, mode: str) -> Term:
    m = min_width(p, ds)
    if isinstance(p, Var):
        core: Term = Gen(p.name, m, 0)
    elif isinstance(p, Par):
        body = Tens(_enc_root(m, p.left, ds, mode), _enc_root(m, p.right, ds, mode))
        core = body if m == 0 else Seq(copy_n(m, mode), body)
    elif isinstance(p, Perm):
        inner = _enc_root(m, p.body, ds, mode)
        core = inner if m == 0 else Seq(_perm_term(p, m), inner)
    elif isinstance(p, Nu):
        core = Seq(Tens(identity(m), _frob(mode, "unit")), _enc_root(m + 1, p.body, ds, mode))
    else:
        raise TypeError(p)
    return _weaken(core, w - m, mode)


def label_algebra(mode: str, window: int = 1) -> LabelAlgebra:
    if mode == "hoare":
        return make_builtin_algebra("two_set", [])
    return make_builtin_algebra("int_window", [window])


def process_signature(ds: Declarations, mode: str, window: int = 1) -> Signature:
    """One generator ``f : (ar(f), 0)`` per variable, moving to the encoding
    of each branch body (or idling), beside the mode's Frobenius structure."""
    alg = label_algebra(mode, window)
    gens: list[Generator] = list(frobenius_generators(_colour(mode), alg))
    for d in ds.decls.values():
        moves = [(action_word(ZERO, d.arity), Gen(d.name, d.arity, 0))]
        for act, body in d.branches:
            word = action_word(act, d.arity)
            if all(v in alg for v in word):
                target = _enc_syntax(d.arity, body, ds, mode)
                moves.append((word, target))
        gens.append(Generator(d.name, d.arity, 0, None, _fixed_moves(moves)))
    return Signature(tuple(gens), alg, _colour(mode), allow_nongroup_white=True)


def _fixed_moves(moves):
    def rule(g, state):
        for word, target in moves:
            yield word, target, ()

    return rule


# --------------------------------------------------------------------------
# Correspondence check
# --------------------------------------------------------------------------


@dataclass
class Mismatch:
    direction: str  # "process->diagram" or "diagram->process"
    judgement: str
    action: str
    detail: str
    involves_perm: bool

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "judgement": self.judgement,
            "action": self.action,
            "detail": self.detail,
        }


@dataclass
class TheoremReport:
    mode: str
    depth: int
    width: int
    root: str
    states_checked: int = 0
    process_moves: int = 0
    diagram_moves: int = 0
    equal_by: dict = field(default_factory=lambda: {"congruent": 0, "simplified": 0, "bisimilar": 0})
    truncated_comparisons: int = 0
    mismatches: list = field(default_factory=list)
    transitions: list = field(default_factory=list)  # (src, action, dst) process edges checked

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def perm_only_failure(self) -> bool:
        """Every mismatch happened at a state containing a permutation."""
        return bool(self.mismatches) and all(m.involves_perm for m in self.mismatches)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "depth": self.depth,
            "root": f"{self.width} |- {self.root}",
            "pass": self.passed,
            "states_checked": self.states_checked,
            "process_moves": self.process_moves,
            "diagram_moves": self.diagram_moves,
            "equal_by": dict(self.equal_by),
            "truncated_comparisons": self.truncated_comparisons,
            "perm_only_failure": self.perm_only_failure,
            "mismatches": [m.to_json() for m in self.mismatches],
        }


def _has_perm(p: Process) -> bool:
    if isinstance(p, Perm):
        return True
    if isinstance(p, Par):
        return _has_perm(p.left) or _has_perm(p.right)
    if isinstance(p, Nu):
        return _has_perm(p.body)
    return False


def milner_window(root: Process) -> int:
    return max(1, parallel_components(root))


def theorem_check(
    tp: TypedProcess,
    ds: Declarations,
    mode: str,
    depth: int = 3,
    window: Optional[int] = None,
    max_states: int = 400,
    max_depth: int = 12,
) -> TheoremReport:
    """Explore ``tp`` breadth-first to ``depth`` and compare, at every state
    ``Q``, the process moves with the moves of the encoding of ``Q`` whose
    label alphabet lies within ``al(Q)``.

    Diagram targets are compared with encodings of process successors by
    canonical key, then by key after the Frobenius (co)unit laws, then by
    bisimilarity (bounded by ``max_states``/``max_depth``).
    """
    from .sos import step as diagram_step

    if window is None:
        window = milner_window(tp.process) if mode == "milner" else 1
    system = ProcessSystem(ds, mode, window)
    sig = process_signature(ds, mode, window)
    n = tp.width
    report = TheoremReport(mode, depth, n, format_process(tp.process))
    fmt = lambda a: format_action(a, mode)
    equal_cache: dict[tuple[str, str], tuple[bool, bool]] = {}

    enc_cache: dict[Process, Term] = {}

    def enc(q: Process) -> Term:
        if q not in enc_cache:
            enc_cache[q] = _enc_syntax(n, q, ds, mode)
        return enc_cache[q]

    def matches(diagrams: list[Term], procs: list[Process]) -> bool:
        """Is some diagram equal to the encoding of some process? Cheap
        tests are tried on every pair before any bisimilarity check."""
        pairs = [(d, q) for d in diagrams for q in procs]
        for d, q in pairs:
            if canonical_key(d) == canonical_key(enc(q)):
                report.equal_by["congruent"] += 1
                return True
        for d, q in pairs:
            if simplified_key(d) == simplified_key(enc(q)):
                report.equal_by["simplified"] += 1
                return True
        for d, q in pairs:
            key = (canonical_key(d), canonical_key(enc(q)))
            if key not in equal_cache:
                res = bisimilar(d, enc(q), sig, max_states=max_states, max_depth=max_depth)
                equal_cache[key] = (res.related, res.complete_inputs)
            related, complete = equal_cache[key]
            if related:
                report.equal_by["bisimilar"] += 1
                if not complete:
                    report.truncated_comparisons += 1
                return True
        return False

    seen = {tp.process}
    frontier = [tp.process]
    for _ in range(depth):
        nxt = []
        for q in frontier:
            report.states_checked += 1
            type_check(n, q, ds)
            al_q = alphabet(q, ds)
            judgement = f"{n} |- {format_process(q)}"
            pmoves = [(a, q2) for a, q2 in system.step(q) if action_support(a) <= al_q]
            dgram = enc(q)
            dmoves = [
                (word_action(tr.inp), tr.target)
                for tr in diagram_step(dgram, sig)
                if action_support(word_action(tr.inp)) <= al_q
            ]
            report.process_moves += len(pmoves)
            report.diagram_moves += len(dmoves)
            by_action: dict[Action, list[Term]] = {}
            for a, d in dmoves:
                by_action.setdefault(a, []).append(d)
            p_by_action: dict[Action, list[Process]] = {}
            for a, q2 in pmoves:
                p_by_action.setdefault(a, []).append(q2)

            for a, q2 in sorted(pmoves, key=lambda m: (m[0], format_process(m[1]))):
                report.transitions.append((format_process(q), fmt(a), format_process(q2)))
                try:
                    type_check(n, q2, ds)
                except TypingError as exc:
                    report.mismatches.append(
                        Mismatch("process->diagram", judgement, fmt(a), f"successor untypeable: {exc}", _has_perm(q))
                    )
                    continue
                if not matches(by_action.get(a, []), [q2]):
                    report.mismatches.append(
                        Mismatch(
                            "process->diagram",
                            judgement,
                            fmt(a),
                            f"no diagram move to the encoding of {format_process(q2)}",
                            _has_perm(q),
                        )
                    )
                if q2 not in seen:
                    seen.add(q2)
                    nxt.append(q2)
            for a, ds_targets in sorted(by_action.items()):
                for d in ds_targets:
                    if not matches([d], p_by_action.get(a, [])):
                        report.mismatches.append(
                            Mismatch(
                                "diagram->process",
                                judgement,
                                fmt(a),
                                f"diagram move to {d} has no matching process move",
                                _has_perm(q),
                            )
                        )
        frontier = nxt
    return report
