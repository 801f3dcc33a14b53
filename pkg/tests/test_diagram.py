import itertools
import random

import pytest

from diagram_sos.algebra import parse_algebra
from diagram_sos.diagram import (
    canonical_form,
    canonical_key,
    congruent,
    shuffle_graph,
    simplified_key,
    to_dot,
    to_hypergraph,
)
from diagram_sos.rewrite import (
    TermSampler,
    all_rewrites,
    enumerate_terms,
    oracle_congruent,
    random_congruent,
    signature_atoms,
)
from diagram_sos.syntax import (
    ID0,
    ID1,
    SWAP,
    Seq,
    Tens,
    circ_signature,
    identity,
    parse_term,
    place_term,
    place_term_flat,
    symmetry,
)


@pytest.fixture(scope="module")
def sampler_factory(sig_z2):
    atoms = signature_atoms(sig_z2)
    return lambda seed: TermSampler(atoms, random.Random(seed), 3)


def _iso_form(t):
    """Brute-force canonical form: least serialisation over all box orders."""
    g = to_hypergraph(t)
    n = len(g.boxes)
    best = None
    for perm in itertools.permutations(range(n)):
        m = lambda e: (e[0], perm[e[1]], e[2]) if e[0] == "B" else e
        labels = [None] * n
        for b, box in enumerate(g.boxes):
            labels[perm[b]] = repr(box.label)
        s = repr((tuple(g.sort), labels, sorted((m(p), m(c)) for p, c in g.wires.items())))
        if best is None or s < best:
            best = s
    return best


def test_place_renderings_agree(sig_nat6):
    for k in range(7):
        assert canonical_key(place_term(sig_nat6, k)) == canonical_key(place_term_flat(sig_nat6, k))
    assert canonical_key(place_term(sig_nat6, 1)) != canonical_key(place_term(sig_nat6, 2))


@pytest.mark.parametrize(
    "a,b,expected",
    [
        ("swap ; swap", "id * id", True),
        ("id0 * bcopy", "bcopy", True),
        ("bcopy ; id * id", "bcopy", True),
        ("bnew ; bdel", "id0", False),
        ("bdel ; bnew", "bdel * bnew", True),
        ("bcopy", "wcopy", False),
        ("bcopy ; swap", "bcopy", False),
        ("swap ; reg(1) * reg(0)", "reg(0) * reg(1) ; swap", True),
        ("swap ; reg(1) * reg(0)", "reg(1) * reg(0) ; swap", False),
    ],
)
def test_congruence_examples(sig_z2, a, b, expected):
    assert congruent(parse_term(a, sig_z2), parse_term(b, sig_z2)) is expected


def test_sort_guard(sig_z2):
    assert not congruent(ID1, SWAP)
    assert not congruent(ID0, parse_term("bdel", sig_z2))


def test_key_idempotent_and_well_formed(sampler_factory):
    for seed in range(60):
        t = sampler_factory(seed).term(6)
        g = to_hypergraph(t)
        g.check()
        c = canonical_form(g)
        c.graph.check()
        assert canonical_form(c.graph).key == c.key


def test_key_invariant_under_box_renumbering(sampler_factory):
    rng = random.Random(7)
    for seed in range(100):
        t = sampler_factory(seed).term(7)
        g = to_hypergraph(t)
        h = shuffle_graph(g, rng)
        h.check()
        assert canonical_form(h).key == canonical_form(g).key


# One random instantiation of each structural law per call.
def _law_instances(sm, rng):
    def term():
        return sm.term(rng.randint(1, 3))

    def with_left(n):
        return sm.with_left(n, rng.randint(1, 3))

    f, g, h = term(), term(), term()
    yield "tens_assoc", Tens(Tens(f, g), h), Tens(f, Tens(g, h))
    yield "tens_unit_left", Tens(ID0, f), f
    yield "tens_unit_right", Tens(f, ID0), f
    yield "swap_involution", Seq(SWAP, SWAP), identity(2)
    f2, h2 = term(), term()
    g2, i2 = with_left(f2.sort.right), with_left(h2.sort.right)
    yield "interchange", Tens(Seq(f2, g2), Seq(h2, i2)), Seq(Tens(f2, h2), Tens(g2, i2))
    g3 = with_left(f.sort.right)
    h3 = with_left(g3.sort.right)
    yield "seq_assoc", Seq(Seq(f, g3), h3), Seq(f, Seq(g3, h3))
    yield "seq_unit_right", Seq(f, identity(f.sort.right)), f
    yield "seq_unit_left", Seq(identity(f.sort.left), f), f
    n, m = f.sort
    yield "slide_left", Seq(symmetry(1, n), Tens(f, ID1)), Seq(Tens(ID1, f), symmetry(1, m))
    yield "slide_right", Seq(symmetry(n, 1), Tens(ID1, f)), Seq(Tens(f, ID1), symmetry(m, 1))


def test_each_law_50_instances(sampler_factory):
    counts = {}
    rng = random.Random(3)
    for i in range(50):
        for name, lhs, rhs in _law_instances(sampler_factory(1000 + i), rng):
            assert lhs.sort == rhs.sort
            assert congruent(lhs, rhs), (name, lhs, rhs)
            counts[name] = counts.get(name, 0) + 1
    assert len(counts) == 10 and all(c == 50 for c in counts.values())


@pytest.fixture(scope="module")
def small_terms(sig_z2):
    atoms = [sig_z2[s].term() for s in ("bcopy", "bmerge", "bdel", "bnew")]
    atoms += [sig_z2["reg"].term(0), ID1, SWAP, ID0]
    return enumerate_terms(atoms, 3)


def test_exhaustive_against_brute_force_isomorphism(small_terms):
    """Every term with at most three atoms: the key partition equals the
    partition by brute-force hypergraph isomorphism."""
    keys = {t: canonical_key(t) for t in small_terms}
    iso = {t: _iso_form(t) for t in small_terms}
    pairs = {(keys[t], iso[t]) for t in small_terms}
    assert len(pairs) == len(set(keys.values())) == len(set(iso.values()))
    assert len(small_terms) == 1888 and len(pairs) == 619


def test_exhaustive_two_generators_size_five(sig_z2):
    """All 111167 terms of at most five atoms over copy, merge and the
    structural atoms: keys partition them exactly as isomorphism does, so
    every one of the pairs gets the same verdict from both."""
    atoms = [sig_z2["bcopy"].term(), sig_z2["bmerge"].term(), ID1, SWAP, ID0]
    terms = enumerate_terms(atoms, 5)
    assert len(terms) == 111167
    pairs = {(canonical_key(t), _iso_form(t)) for t in terms}
    keys = {k for k, _ in pairs}
    forms = {f for _, f in pairs}
    assert len(pairs) == len(keys) == len(forms) == 5042


def test_exhaustive_laws_preserve_key(small_terms):
    for t in small_terms:
        k = canonical_key(t)
        for name, u in all_rewrites(t):
            assert canonical_key(u) == k, (name, t, u)


def test_rewrite_oracle_on_sampled_pairs(sampler_factory):
    """Two-step rewrites are found by the bounded closure and agree with the
    key; unrelated samples never get a positive oracle verdict with a
    different key."""
    rng = random.Random(11)
    for seed in range(40):
        sm = sampler_factory(2000 + seed)
        a = sm.term(rng.randint(1, 3))
        b = random_congruent(a, rng, steps=2, max_size=a.size + 2)
        assert oracle_congruent(a, b, depth=2, max_size=a.size + 2)
        assert congruent(a, b)
        c = sm.with_sort(a.sort.left, a.sort.right, 3)
        if c is not None and oracle_congruent(a, c, depth=2, max_size=5):
            assert congruent(a, c)


def test_equivalence_relation(sampler_factory):
    rng = random.Random(5)
    for seed in range(30):
        a = sampler_factory(seed).term(5)
        b = random_congruent(a, rng, steps=3)
        c = random_congruent(b, rng, steps=3)
        assert congruent(a, a)
        assert congruent(a, b) and congruent(b, a)
        assert congruent(b, c) and congruent(a, c)


def test_simplified_key_absorbs_units(sig_z2):
    p = parse_term
    assert simplified_key(p("bcopy ; id * bdel", sig_z2)) == simplified_key(ID1)
    assert simplified_key(p("bnew * id ; bmerge", sig_z2)) == simplified_key(ID1)
    assert simplified_key(p("bnew ; bdel", sig_z2)) == simplified_key(ID0)
    # colours do not mix
    assert simplified_key(p("bcopy ; id * wdel", sig_z2)) != simplified_key(ID1)


def test_dot_output(sig_z2):
    dot = to_dot(to_hypergraph(parse_term("bcopy ; bmerge", sig_z2)))
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    assert "bcopy" in dot and "bmerge" in dot and "rank=source" in dot


def test_deep_terms_do_not_overflow():
    sig = circ_signature(parse_algebra("zmod:2"))
    t = ID1
    for _ in range(3000):
        t = Seq(t, sig["reg"].term(1))
    assert canonical_key(t)
