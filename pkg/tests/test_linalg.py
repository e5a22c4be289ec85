import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlogic import sampling
from qlogic.errors import DimensionMismatch, NotAProjector, ZeroVector
from qlogic.linalg import (
    EPS,
    Ket,
    Projector,
    full_subspace,
    is_invariant,
    join_subspace,
    meet_subspace,
    ortho_complement,
    projector_from_ket,
    span,
    subspace_leq,
    zero_subspace,
)

C2 = full_subspace(2)
ZERO = zero_subspace(2)


def close(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) < EPS


@pytest.mark.parametrize(
    "ket, expected",
    [
        ((1, 0), np.diag([1, 0])),
        ((1, 1), 0.5 * np.array([[1, 1], [1, 1]])),
        ((1, 1j), 0.5 * np.array([[1, -1j], [1j, 1]])),
    ],
)
def test_projector_from_ket(ket, expected):
    p = projector_from_ket(ket)
    assert close(p.matrix, expected)
    assert p.rank == 1


def test_zero_ket_rejected():
    with pytest.raises(ZeroVector):
        projector_from_ket((0, 0))
    with pytest.raises(ZeroVector):
        Ket([1e-12, 0])


def test_projector_validation():
    with pytest.raises(NotAProjector):
        Projector([[1, 1], [0, 0]])  # idempotent, not Hermitian
    with pytest.raises(NotAProjector):
        Projector([[2, 0], [0, 0]])
    assert Projector.zero(3).rank == 0 and Projector.identity(3).rank == 3


def test_meet_examples():
    assert meet_subspace(span((1, 1)), span((1, -1))) == ZERO
    a = span((1, 1j))
    assert meet_subspace(a, a) == a
    assert meet_subspace(C2, span((1, 0))) == span((1, 0))


def test_join_examples():
    assert join_subspace(span((1, 0)), span((0, 1))) == C2
    a = span((1, 2))
    assert join_subspace(a, ZERO) == a
    assert join_subspace(span((1, 1)), span((1, 0))) == C2


def test_orthogonal_join_is_projector_sum():
    a, b = span((1, 1)), span((1, -1))
    assert close(join_subspace(a, b).matrix, a.matrix + b.matrix)


def test_complement_examples():
    assert ortho_complement(ZERO) == C2
    assert ortho_complement(span((1, 0))) == span((0, 1))
    assert ortho_complement(span((1, 1))) == span((1, -1))


def test_leq_examples():
    assert subspace_leq(ZERO, span((3, 1j)))
    assert subspace_leq(span((1, 0)), C2)
    assert not subspace_leq(span((1, 1)), span((1, 0)))


def test_invariance_examples():
    d10 = Projector(np.diag([1, 0]))
    assert is_invariant(span((1, 0)), d10)
    assert not is_invariant(span((1, 1)), d10)
    assert is_invariant(ZERO, d10)
    assert is_invariant(ZERO, projector_from_ket((1, 1j)))


def test_scale_is_absorbed():
    assert span((2, 2)) == span((-0.5, -0.5)) == span((1j, 1j))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        meet_subspace(span((1, 0)), span((1, 0, 0)))
    with pytest.raises(DimensionMismatch):
        join_subspace(span((1, 0)), span((1, 0, 0)))
    with pytest.raises(DimensionMismatch):
        subspace_leq(span((1, 0)), span((1, 0, 0)))
    with pytest.raises(DimensionMismatch):
        is_invariant(span((1, 0)), np.eye(3))


def _stacked_meet(a, b):
    """Null space of [(I - P_a); (I - P_b)] via SVD: independent route to the intersection."""
    d = a.dim
    stacked = np.vstack([np.eye(d) - a.matrix, np.eye(d) - b.matrix])
    _, s, vh = np.linalg.svd(stacked)
    basis = vh[s < 1e-6].conj().T
    return basis @ basis.conj().T


pairs = st.tuples(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))


def _pair(dim, seed):
    rng = np.random.default_rng(seed)
    return sampling.random_subspace(dim, rng), sampling.random_subspace(dim, rng)


@settings(max_examples=150, deadline=None)
@given(pairs)
def test_lattice_laws_on_random_subspaces(p):
    a, b = _pair(*p)
    for x in (a, b, meet_subspace(a, b), join_subspace(a, b), ortho_complement(a)):
        m = x.matrix
        assert np.linalg.norm(m - m.conj().T) < EPS
        assert np.linalg.norm(m @ m - m) < EPS
    assert meet_subspace(a, b) == meet_subspace(b, a)
    assert join_subspace(a, b) == join_subspace(b, a)
    assert meet_subspace(a, a) == a and join_subspace(a, a) == a
    assert meet_subspace(a, join_subspace(a, b)) == a
    assert join_subspace(a, meet_subspace(a, b)) == a
    assert ortho_complement(meet_subspace(a, b)) == join_subspace(ortho_complement(a), ortho_complement(b))
    assert ortho_complement(ortho_complement(a)) == a
    m = meet_subspace(a, b)
    assert subspace_leq(m, a) and subspace_leq(m, b)
    assert subspace_leq(a, join_subspace(a, b))


@settings(max_examples=150, deadline=None)
@given(pairs)
def test_meet_matches_stacked_nullspace(p):
    a, b = _pair(*p)
    assert close(meet_subspace(a, b).matrix, _stacked_meet(a, b))


def test_meet_of_planes_in_c3_is_a_line():
    a = span((1, 0, 0), (0, 1, 0))
    b = span((0, 1, 0), (0, 0, 1))
    assert meet_subspace(a, b) == span((0, 1, 0))
    assert close(_stacked_meet(a, b), span((0, 1, 0)).matrix)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rank_sum_for_distinct_lines_in_c2(seed):
    rng = np.random.default_rng(seed)
    a = sampling.random_subspace(2, rng, rank=1)
    b = sampling.random_subspace(2, rng, rank=1)
    assert meet_subspace(a, b).rank + join_subspace(a, b).rank == a.rank + b.rank == 2
