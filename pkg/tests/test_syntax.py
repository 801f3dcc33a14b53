import random

import pytest
from hypothesis import given, settings, strategies as st

from diagram_sos.algebra import parse_algebra
from diagram_sos.errors import ParseError, SignatureError, SortMismatch
from diagram_sos.rewrite import TermSampler, signature_atoms
from diagram_sos.syntax import (
    ID0,
    ID1,
    SWAP,
    Seq,
    Sort,
    Tens,
    circ_signature,
    frobenius_signature,
    identity,
    infer_sort,
    parse_term,
    permutation,
    place_term,
    place_term_flat,
    pretty_print,
    symmetry,
    term_to_tree,
)

# Generator sorts of the register calculus, as tabulated in its sorting rules.
GENERATOR_SORTS = {
    "bdel": (1, 0),
    "bcopy": (1, 2),
    "reg": (1, 1),
    "amp": (1, 1),
    "wadd": (2, 1),
    "wzero": (0, 1),
    "bnew": (0, 1),
    "bmerge": (2, 1),
    "coreg": (1, 1),
    "coamp": (1, 1),
    "wcopy": (1, 2),
    "wdel": (1, 0),
}


def test_twelve_generator_sorts(sig_z2):
    assert len(sig_z2.generators) == 12
    for g in sig_z2.generators:
        t = g.term(sig_z2.algebra.carrier[1]) if g.stateful else g.term()
        assert infer_sort(t) == GENERATOR_SORTS[g.symbol], g.symbol


def test_structural_sorts():
    assert ID0.sort == (0, 0)
    assert ID1.sort == (1, 1)
    assert SWAP.sort == (2, 2)




def test_composite_rules(sig_z2):
    c = sig_z2["bcopy"].term()
    m = sig_z2["wadd"].term()
    assert Seq(c, m).sort == (1, 1)
    assert Tens(c, m).sort == (3, 3)
    assert Tens(ID0, c).sort == (1, 2)
    with pytest.raises(SortMismatch):
        Seq(c, c)


def test_place_sorts(sig_nat6):
    for k in range(7):
        assert place_term(sig_nat6, k).sort == (1, 1)
        assert place_term_flat(sig_nat6, k).sort == (1, 1)


def test_derived_structure():
    assert identity(3).sort == (3, 3)
    assert identity(0) == ID0
    assert symmetry(2, 1).sort == (3, 3)
    assert permutation([2, 0, 1]).sort == (3, 3)


@pytest.mark.parametrize(
    "text,sort",
    [
        ("bcopy ; bmerge", (1, 1)),
        ("bcopy ; (id * bdel)", (1, 1)),
        ("bnew ; bdel", (0, 0)),
        ("swap ; swap", (2, 2)),
        ("reg(1) * amp(0)", (2, 2)),
        ("id0", (0, 0)),
        ("(bnew ; bcopy) * id ; id * (wadd ; reg(1) ; wcopy) ; (bmerge ; bdel) * id", (1, 1)),
    ],
)
def test_parse_examples(sig_z2, text, sort):
    assert parse_term(text, sig_z2).sort == sort


def test_tensor_binds_tighter(sig_z2):
    t = parse_term("bcopy ; id * bdel", sig_z2)
    assert isinstance(t, Seq) and isinstance(t.second, Tens)


def test_sort_mismatch_position(sig_z2):
    with pytest.raises(SortMismatch) as ei:
        parse_term("bcopy ; bcopy", sig_z2)
    assert ei.value.pos == 6
    assert ei.value.left == (1, 2) and ei.value.right == (1, 2)


@pytest.mark.parametrize(
    "text,pos",
    [("reg", 0), ("frob", 0), ("reg(9)", 4), ("(id", 3), ("id *", 4), ("id ;; id", 4), ("id $", 3)],
)
def test_parse_errors(sig_z2, text, pos):
    with pytest.raises(ParseError) as ei:
        parse_term(text, sig_z2)
    assert ei.value.pos == pos


def test_tree(sig_z2):
    assert term_to_tree(parse_term("reg(1);amp(0)", sig_z2)) == ["seq", ["gen", "reg", 1], ["gen", "amp", 0]]


def test_print_parse_round_trip_500():
    sig = circ_signature(parse_algebra("nat:3"))
    atoms = signature_atoms(sig)
    for i in range(500):
        rng = random.Random(i)
        t = TermSampler(atoms, rng, 4).term(rng.randint(1, 9))
        assert parse_term(pretty_print(t), sig) == t


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 12))
def test_round_trip_property(seed, size):
    sig = circ_signature(parse_algebra("zmod:3"))
    t = TermSampler(signature_atoms(sig), random.Random(seed), 4).term(size)
    assert parse_term(pretty_print(t), sig) == t


def test_signature_rules():
    with pytest.raises(SignatureError):
        circ_signature(parse_algebra("two"))
    with pytest.raises(SignatureError):
        frobenius_signature("white", parse_algebra("bool"), strict=True)
    frobenius_signature("white", parse_algebra("bool"))  # permissive mode
    frobenius_signature("white", parse_algebra("zmod:2"), strict=True)
