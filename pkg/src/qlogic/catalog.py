"""The qubit objects: projector family, its three contexts and the derived lattices.

Labels are ``(Q, n)`` with ``Q`` in {0, 1, 2, 3} and ``n`` in {1, 2}. ``Q = 0``
gives the trivial projectors (``n = 1`` the zero, ``n = 2`` the identity);
``Q = 1, 2, 3`` follow the x, y and z structure of the matrix entries.
"""

import numpy as np

from .errors import InvalidLabel
from .lattice import closure_lattice, make_context, partial_logic, paste_blocks
from .linalg import Projector, Subspace, is_invariant

AXES = (1, 2, 3)
OUTCOMES = (1, 2)


def _delta(a, b):
    return 1 if a == b else 0


def _check_label(Q, n):
    if Q not in (0, *AXES) or n not in OUTCOMES or isinstance(Q, bool) or isinstance(n, bool):
        raise InvalidLabel(f"invalid projector label (Q={Q!r}, n={n!r})")


def axis_projector(Q, n):
    """The 2x2 projector with axis index ``Q`` and outcome ``n``."""
    _check_label(Q, n)
    s = (-1) ** n
    m = 0.5 * np.array(
        [
            [1 + s * (_delta(Q, 0) - _delta(Q, 3)), s * (-_delta(Q, 1) + 1j * _delta(Q, 2))],
            [s * (-_delta(Q, 1) - 1j * _delta(Q, 2)), 1 + s * (_delta(Q, 0) + _delta(Q, 3))],
        ],
        dtype=np.complex128,
    )
    return Projector(m)


def element_label(Q, n):
    _check_label(Q, n)
    if Q == 0:
        return "0" if n == 1 else "1"
    return f"P{Q}_{n}"


def ray(Q, n):
    return Subspace(axis_projector(Q, n))


def axis_contexts():
    """The contexts Sigma1, Sigma2, Sigma3 in axis order."""
    return [make_context([axis_projector(Q, 1), axis_projector(Q, 2)], id=f"Sigma{Q}") for Q in AXES]


def atom_labels():
    return [(Q, n) for Q in AXES for n in OUTCOMES]


def qubit_sublattice():
    """The 8-element lattice generated by the six rays; ids 2..7 follow ``atom_labels()``."""
    labels = atom_labels()
    return closure_lattice(
        [ray(Q, n) for Q, n in labels], labels=[element_label(Q, n) for Q, n in labels], name="qubit-msigma"
    )


def _invariant_ids(msigma, Q):
    ctx = [axis_projector(Q, n) for n in OUTCOMES]
    return [i for i, h in enumerate(msigma.subspaces) if all(is_invariant(h, p) for p in ctx)]


def invariant_lattice(Q, msigma=None):
    """Elements of the sublattice left invariant by both members of context ``Q``."""
    if Q not in AXES or isinstance(Q, bool):
        raise InvalidLabel(f"invariant lattices exist for Q in {AXES}, got {Q!r}")
    msigma = qubit_sublattice() if msigma is None else msigma
    return msigma.sublattice(_invariant_ids(msigma, Q), name=f"L(Sigma{Q})")


def qubit_blocks():
    msigma = qubit_sublattice()
    return [invariant_lattice(Q, msigma) for Q in AXES]


def qubit_msigma():
    """The full sublattice, as the pasting of the three invariant lattices."""
    return paste_blocks(qubit_blocks(), name="qubit-msigma")


def qubit_partial():
    """The three invariant lattices with cross-block meets left undefined."""
    return partial_logic(qubit_blocks(), name="qubit-blocks")


def ket_of(Q, n):
    """A vector spanning ``ray(Q, n)``: the largest column of its projector."""
    if Q == 0:
        raise InvalidLabel("trivial labels have no ray")
    m = axis_projector(Q, n).matrix
    return m[:, int(np.argmax(np.linalg.norm(m, axis=0)))].copy()


BUILTINS = {
    "qubit-msigma": qubit_msigma,
    "qubit-blocks": qubit_partial,
}

__all__ = [
    "AXES",
    "BUILTINS",
    "OUTCOMES",
    "atom_labels",
    "axis_contexts",
    "axis_projector",
    "element_label",
    "invariant_lattice",
    "ket_of",
    "qubit_blocks",
    "qubit_msigma",
    "qubit_partial",
    "qubit_sublattice",
    "ray",
]
