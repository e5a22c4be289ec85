"""Random objects for property tests and the benchmark."""

import numpy as np

from .lattice import Lattice, make_context, partial_logic, paste_blocks
from .linalg import projector_from_ket, span
from .states import DensityOperator


def _ginibre(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_ket(dim, rng):
    return _ginibre(rng, dim, 1)[:, 0]


def random_density(dim, rng, rank=None):
    """Density operator G G^dagger / Tr, with G a complex Gaussian dim x rank matrix."""
    g = _ginibre(rng, dim, dim if rank is None else rank)
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityOperator(0.5 * (rho + rho.conj().T))


def random_unitary(dim, rng):
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_context(dim, rng, id=""):
    """Rank-1 projectors onto the columns of a Haar-random unitary."""
    u = random_unitary(dim, rng)
    return make_context([projector_from_ket(u[:, i]) for i in range(dim)], id=id)


def random_subspace(dim, rng, rank=None):
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    if rank == 0:
        return span(dim=dim)
    return span(*_ginibre(rng, dim, rank).T)


def random_block_structure(rng, max_atoms=12, max_blocks=4, max_block_size=5, pasted=False):
    """Abstract logic of Boolean blocks over at most ``max_atoms`` shared atoms.

    Each block is a Boolean algebra on 2..``max_block_size`` atoms drawn from a
    common pool, so blocks may overlap in atoms (Greechie-style). The result is
    a PartialLogic unless ``pasted`` is set.
    """
    pool = int(rng.integers(2, max_atoms + 1))
    n_blocks = int(rng.integers(1, max_blocks + 1))
    blocks = []
    for _ in range(n_blocks):
        k = int(rng.integers(2, min(max_block_size, pool) + 1))
        atoms = sorted(rng.choice(pool, size=k, replace=False).tolist())
        blocks.append(Lattice.boolean([f"a{i}" for i in atoms]))
    return paste_blocks(blocks) if pasted else partial_logic(blocks)


__all__ = [
    "random_block_structure",
    "random_context",
    "random_density",
    "random_ket",
    "random_subspace",
    "random_unitary",
]
