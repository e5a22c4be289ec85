import itertools

import numpy as np
import pytest

from qlogic import catalog
from qlogic.errors import InvalidLabel
from qlogic.lattice import is_boolean
from qlogic.linalg import EPS, span

# hand-evaluated entries of the 2x2 projector formula for every label
EXPECTED = {
    (0, 1): np.zeros((2, 2)),
    (0, 2): np.eye(2),
    (1, 1): 0.5 * np.array([[1, 1], [1, 1]]),
    (1, 2): 0.5 * np.array([[1, -1], [-1, 1]]),
    (2, 1): 0.5 * np.array([[1, -1j], [1j, 1]]),
    (2, 2): 0.5 * np.array([[1, 1j], [-1j, 1]]),
    (3, 1): np.diag([1, 0]),
    (3, 2): np.diag([0, 1]),
}


@pytest.mark.parametrize("label", sorted(EXPECTED))
def test_axis_projector_entries(label):
    assert np.linalg.norm(catalog.axis_projector(*label).matrix - EXPECTED[label]) < EPS


def test_trivial_labels_are_exact():
    assert np.array_equal(catalog.axis_projector(0, 1).matrix, np.zeros((2, 2)))
    assert np.array_equal(catalog.axis_projector(0, 2).matrix, np.eye(2))


@pytest.mark.parametrize("label", [(4, 1), (1, 0), (1, 3), (-1, 1), (True, 1)])
def test_invalid_labels(label):
    with pytest.raises(InvalidLabel):
        catalog.axis_projector(*label)


def test_contexts():
    ctxs = catalog.axis_contexts()
    assert [c.id for c in ctxs] == ["Sigma1", "Sigma2", "Sigma3"]
    for c in ctxs:
        assert len(c) == 2
        assert np.linalg.norm(sum(p.matrix for p in c) - np.eye(2)) < EPS
        a, b = c.projectors
        assert np.linalg.norm(a.matrix @ b.matrix) < EPS


def test_cross_axis_projectors_do_not_commute():
    # Frobenius norm of [P, P'] for rays on different axes, computed directly: sqrt(2)/2
    for (q, n), (r, m) in itertools.product(catalog.atom_labels(), repeat=2):
        if q == r:
            continue
        a = catalog.axis_projector(q, n).matrix
        b = catalog.axis_projector(r, m).matrix
        norm = np.linalg.norm(a @ b - b @ a)
        assert norm > 0.1
        assert abs(norm - np.sqrt(2) / 2) < 1e-12


def test_sublattice_elements():
    lat = catalog.qubit_sublattice()
    assert len(lat) == 8
    assert lat.labels == ("0", "1", "P1_1", "P1_2", "P2_1", "P2_2", "P3_1", "P3_2")
    for i, (q, n) in enumerate(catalog.atom_labels(), start=2):
        assert lat.subspaces[i] == catalog.ray(q, n)
        assert lat.subspaces[i].rank == 1


def test_invariant_lattice_three():
    lat = catalog.invariant_lattice(3)
    subs = lat.subspaces
    assert len(lat) == 4
    assert subs[0].rank == 0 and subs[1].rank == 2
    assert set(lat.labels) == {"0", "1", "P3_1", "P3_2"}
    assert subs[lat.index("P3_1")] == span((1, 0))
    assert subs[lat.index("P3_2")] == span((0, 1))


@pytest.mark.parametrize("q", catalog.AXES)
def test_invariant_lattices_are_boolean_blocks(q):
    lat = catalog.invariant_lattice(q)
    assert set(lat.labels) == {"0", "1", f"P{q}_1", f"P{q}_2"}
    assert is_boolean(lat)
    assert lat.name == f"L(Sigma{q})"


def test_invariant_lattice_label_errors():
    for q in (0, 4, True):
        with pytest.raises(InvalidLabel):
            catalog.invariant_lattice(q)


def test_kets_span_their_rays():
    for q, n in catalog.atom_labels():
        assert span(catalog.ket_of(q, n)) == catalog.ray(q, n)
    with pytest.raises(InvalidLabel):
        catalog.ket_of(0, 1)


def test_builtins():
    assert len(catalog.qubit_msigma()) == 8
    assert len(catalog.qubit_partial().blocks) == 3
    assert set(catalog.BUILTINS) == {"qubit-msigma", "qubit-blocks"}
