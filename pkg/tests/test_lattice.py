import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlogic import catalog
from qlogic.errors import (
    BlockNotBoolean,
    ClosureOverflow,
    DimensionMismatch,
    IncompatibleTrivials,
    IncompleteSum,
    NotALattice,
    NotOrthogonal,
    TrivialMember,
    UnknownElement,
)
from qlogic.lattice import (
    BOTTOM,
    TOP,
    Lattice,
    check_orthomodular,
    closure_lattice,
    is_boolean,
    make_context,
    meet_defined,
    partial_logic,
    paste_blocks,
)
from qlogic.linalg import Projector, full_subspace, span

D10 = np.diag([1.0, 0.0])
D01 = np.diag([0.0, 1.0])


# -- naive oracles -------------------------------------------------------------

def naive_distributive(lat):
    m, j = lat.meet, lat.join
    n = len(lat)
    return all(m[a, j[b, c]] == j[m[a, b], m[a, c]] for a, b, c in itertools.product(range(n), repeat=3))


def naive_complemented(lat):
    n = len(lat)
    return all(any(lat.meet[a, b] == BOTTOM and lat.join[a, b] == TOP for b in range(n)) for a in range(n))


def naive_orthomodular(lat):
    n = len(lat)
    if (lat.comp < 0).any():
        return False
    c = lat.comp
    return all(lat.join[a, lat.meet[b, c[a]]] == b for a in range(n) for b in range(n) if lat.leq[a, b])


def moore_lattice(seed):
    """Random lattice: a family of subsets of {0..4} closed under intersection, ordered by inclusion."""
    rng = np.random.default_rng(seed)
    full = frozenset(range(5))
    fam = {full}
    for _ in range(int(rng.integers(1, 7))):
        fam.add(frozenset(np.flatnonzero(rng.random(5) < 0.5).tolist()))
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(fam), 2):
            if a & b not in fam:
                fam.add(a & b)
                changed = True
    sets = sorted(fam, key=lambda x: (len(x), sorted(x)))
    labels = ["".join(map(str, sorted(x))) or "e" for x in sets]
    leq = np.array([[x <= y for y in sets] for x in sets])
    return Lattice.from_order(labels, leq)


def hexagon():
    # 0 < a < b < 1 and 0 < b' < a' < 1, complements a<->a', b<->b'
    labels = ["0", "1", "a", "b", "a'", "b'"]
    leq = np.eye(6, dtype=bool)
    for x, y in [(0, 2), (2, 3), (3, 1), (0, 5), (5, 4), (4, 1)]:
        leq[x, y] = True
    comp = {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"}
    return Lattice.from_order(labels, leq, comp=comp, name="O6")


# -- contexts ------------------------------------------------------------------

def test_make_context_examples():
    c = make_context([D10, D01], id="z")
    assert len(c) == 2 and c.id == "z" and c.dim == 2
    with pytest.raises(NotOrthogonal):
        make_context([D10, D10])
    with pytest.raises(IncompleteSum):
        make_context([D10])


def test_make_context_other_errors():
    with pytest.raises(IncompleteSum):
        make_context([])
    with pytest.raises(TrivialMember):
        make_context([np.eye(2)])
    with pytest.raises(TrivialMember):
        make_context([np.zeros((2, 2)), np.eye(2)])
    with pytest.raises(DimensionMismatch):
        make_context([D10, np.diag([0.0, 1.0, 1.0])])


def test_make_context_rank_two_member_in_c3():
    make_context([np.diag([1.0, 1.0, 0.0]), np.diag([0.0, 0.0, 1.0])])


# -- closure -------------------------------------------------------------------

def test_closure_of_six_rays_has_eight_elements():
    lat = closure_lattice([catalog.ray(q, n) for q, n in catalog.atom_labels()])
    assert len(lat) == 8
    assert sorted(lat.subspaces[i].rank for i in range(8)) == [0, 1, 1, 1, 1, 1, 1, 2]


def test_closure_of_basis_lines_is_boolean_square():
    lat = closure_lattice([span((1, 0)), span((0, 1))])
    assert len(lat) == 4 and is_boolean(lat)


def test_empty_closure():
    lat = closure_lattice([], dim=2)
    assert len(lat) == 2
    assert is_boolean(lat)
    with pytest.raises(ValueError):
        closure_lattice([])


def test_closure_in_c3_adds_meets():
    lat = closure_lattice([span((1, 0, 0), (0, 1, 0)), span((0, 1, 0), (0, 0, 1))])
    assert span((0, 1, 0)) in [lat.subspaces[i] for i in range(len(lat))]
    assert len(lat) == 5


def test_closure_overflow():
    rng = np.random.default_rng(3)
    lines = [span(rng.normal(size=3) + 1j * rng.normal(size=3)) for _ in range(4)]
    with pytest.raises(ClosureOverflow):
        closure_lattice(lines, max_new=2)


def test_from_subspaces_requires_closure():
    with pytest.raises(NotALattice):
        Lattice.from_subspaces([span((1, 0, 0)), span((0, 1, 0))])


# -- Boolean / orthomodular ----------------------------------------------------

def test_is_boolean_examples():
    assert is_boolean(catalog.invariant_lattice(3))
    assert not is_boolean(catalog.qubit_sublattice())
    assert is_boolean(closure_lattice([], dim=2))


def test_orthomodular_examples():
    assert check_orthomodular(catalog.qubit_sublattice())
    for q in catalog.AXES:
        assert check_orthomodular(catalog.invariant_lattice(q))
    o6 = hexagon()
    assert len(o6) == 6
    assert naive_orthomodular(o6) is False
    assert check_orthomodular(o6) is False


def test_lattice_without_complements_is_not_orthomodular():
    lat = Lattice.from_subspaces([span((1, 0)), span((1, 1))])
    assert (lat.comp[2:] == -1).all()
    assert not check_orthomodular(lat)


@pytest.mark.parametrize("seed", range(40))
def test_boolean_and_orthomodular_match_naive(seed):
    lat = moore_lattice(seed)
    assert is_boolean(lat) == (naive_distributive(lat) and naive_complemented(lat))
    assert check_orthomodular(lat) == naive_orthomodular(lat)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_boolean_constructor(k):
    lat = Lattice.boolean([f"x{i}" for i in range(k)])
    assert len(lat) == 2 ** k
    assert lat.atoms() == list(range(2, 2 + k)) if k > 1 else lat.atoms() == [TOP]
    assert naive_distributive(lat) and naive_complemented(lat)
    assert is_boolean(lat) and check_orthomodular(lat)


def test_from_order_rejects_non_lattices():
    # two maximal elements and no top
    leq = np.eye(3, dtype=bool)
    leq[0, 1] = leq[0, 2] = True
    with pytest.raises(NotALattice):
        Lattice.from_order(["0", "a", "b"], leq)
    # a, b both below c and d: no least upper bound
    leq = np.eye(6, dtype=bool)
    for x, y in [(0, 2), (0, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 1), (5, 1)]:
        leq[x, y] = True
    with pytest.raises(NotALattice):
        Lattice.from_order(["0", "1", "a", "b", "c", "d"], leq)


# -- structure queries ---------------------------------------------------------

def test_msigma_queries():
    lat = catalog.qubit_sublattice()
    assert lat.atoms() == [2, 3, 4, 5, 6, 7]
    assert sorted(map(sorted, lat.contexts())) == [[2, 3], [4, 5], [6, 7]]
    assert lat.orthogonal(2, 3) and not lat.orthogonal(2, 4)
    assert lat.decomposition(TOP) in ([2, 3], [4, 5], [6, 7])
    assert lat.index("P3_1") == 6
    assert lat.index(span((1, 0))) == 6
    with pytest.raises(UnknownElement):
        lat.index("nope")
    with pytest.raises(UnknownElement):
        lat.check_id(8)


def test_sublattice_must_be_closed():
    a, b = span((1, 0, 0), (0, 1, 0)), span((0, 1, 0), (0, 0, 1))
    lat = closure_lattice([a, b])
    with pytest.raises(NotALattice):
        lat.sublattice([lat.index(a), lat.index(b)])
    # bottom and top are always kept, so any subset of a height-2 lattice is closed
    assert len(catalog.qubit_sublattice().sublattice([2, 4])) == 4


# -- pasting and partial logic -------------------------------------------------

def test_pasting_reproduces_closure():
    pasted = catalog.qubit_msigma()
    closed = catalog.qubit_sublattice()
    assert len(pasted) == 8
    assert pasted.as_lattice().same_elements(closed)
    assert len(pasted.blocks) == 3


def test_paste_single_block_and_duplicates():
    blk = catalog.invariant_lattice(3)
    one = paste_blocks([blk])
    assert len(one) == 4 and one.as_lattice().same_elements(blk)
    two = paste_blocks([blk, catalog.invariant_lattice(3)])
    assert len(two) == 4 and len(two.blocks) == 1


def test_paste_rejects_non_boolean_blocks():
    with pytest.raises(BlockNotBoolean):
        paste_blocks([catalog.qubit_sublattice()])


def test_partial_logic_of_qubit_blocks():
    s = catalog.qubit_partial()
    assert len(s) == 8 and len(s.blocks) == 3
    p31, p32, p11 = s.index("P3_1"), s.index("P3_2"), s.index("P1_1")
    assert meet_defined(s, p31, p32)
    assert s.meet(p31, p32) == BOTTOM and s.join(p31, p32) == TOP
    assert not meet_defined(s, p31, p11)
    assert s.meet(p31, p11) is None and s.join(p31, p11) is None
    for x in range(len(s)):
        assert meet_defined(s, BOTTOM, x) and meet_defined(s, x, TOP)


def test_partial_single_block_behaves_like_lattice():
    blk = catalog.invariant_lattice(1)
    s = partial_logic([blk])
    assert len(s) == len(blk)
    for a in range(len(s)):
        for b in range(len(s)):
            la, lb = blk.index(s.labels[a]), blk.index(s.labels[b])
            assert s.labels[s.meet(a, b)] == blk.labels[blk.meet[la, lb]]
            assert s.labels[s.join(a, b)] == blk.labels[blk.join[la, lb]]


def test_distinct_tops_rejected():
    c2 = catalog.invariant_lattice(3)
    c3 = closure_lattice([span((1, 0, 0)), span((0, 1, 0), (0, 0, 1))])
    with pytest.raises(IncompatibleTrivials):
        partial_logic([c2, c3])
    with pytest.raises(IncompatibleTrivials):
        partial_logic([c2, Lattice.boolean(["a", "b"])])


def test_cross_block_undefined_pairs():
    s = catalog.qubit_partial()
    undefined = [(a, b) for a in range(8) for b in range(8) if not meet_defined(s, a, b)]
    assert len(undefined) == 24
    for a, b in undefined:
        assert s.labels[a][1] != s.labels[b][1]


def test_abstract_pasting_of_shared_atom_blocks():
    b1 = Lattice.boolean(["a", "b", "c"])
    b2 = Lattice.boolean(["c", "d", "e"])
    s = partial_logic([b1, b2])
    assert sorted(s.labels[a] for a in s.atoms()) == ["a", "b", "c", "d", "e"]
    assert len(s.contexts()) == 2
    c, a, d = s.index("c"), s.index("a"), s.index("d")
    assert s.orthogonal(a, c) and s.orthogonal(c, d) and not s.orthogonal(a, d)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_pasted_blocks_are_orthomodular(seed):
    from qlogic.errors import PastingNotClosed
    from qlogic.sampling import random_block_structure

    rng = np.random.default_rng(seed)
    try:
        s = random_block_structure(rng, max_atoms=6, max_blocks=3, max_block_size=3, pasted=True)
    except PastingNotClosed:
        return
    lat = s.as_lattice()
    for blk in s.blocks:
        assert is_boolean(blk)
    assert naive_orthomodular(lat) == check_orthomodular(lat)


def test_projector_contexts_are_unchanged_by_projector_wrapping():
    c = make_context([Projector(D10), D01])
    assert all(isinstance(p, Projector) for p in c)
    assert full_subspace(2).rank == 2
