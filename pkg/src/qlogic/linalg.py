"""Small-dimension complex linear algebra: kets, projectors and the subspace lattice.

A subspace is represented by its orthogonal projector, which is unique; any
spanning vectors (and their scale) are forgotten at construction. All
equality and rank decisions use the absolute tolerance ``EPS``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotAProjector, ZeroVector

EPS = 1e-9

__all__ = [
    "EPS",
    "Ket",
    "Projector",
    "Subspace",
    "projector_from_ket",
    "meet_subspace",
    "join_subspace",
    "ortho_complement",
    "subspace_leq",
    "is_invariant",
    "span",
    "zero_subspace",
    "full_subspace",
]


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


def _clean(m):
    """Hermitian part with signed zeros removed (keeps serialisation stable)."""
    m = 0.5 * (m + m.conj().T)
    m = m + 0.0
    return m


def _range_projector(vectors):
    if vectors.shape[1] == 0:
        d = vectors.shape[0]
        return np.zeros((d, d), dtype=np.complex128)
    return _clean(vectors @ vectors.conj().T)


@dataclass(frozen=True, eq=False)
class Ket:
    components: np.ndarray

    def __post_init__(self):
        c = _frozen(np.ravel(self.components))
        if c.size == 0:
            raise ValueError("ket needs at least one component")
        if not np.all(np.isfinite(c)):
            raise ValueError("ket components must be finite")
        if np.linalg.norm(c) <= EPS:
            raise ZeroVector("a physical ket must have nonzero norm")
        object.__setattr__(self, "components", c)

    @property
    def dim(self):
        return self.components.size

    def normalized(self):
        return self.components / np.linalg.norm(self.components)


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent matrix, validated within ``EPS`` (Frobenius norm)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise NotAProjector(f"projector must be a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NotAProjector("projector entries must be finite")
        if np.linalg.norm(m - m.conj().T) >= EPS:
            raise NotAProjector("matrix is not Hermitian")
        if np.linalg.norm(m @ m - m) >= EPS:
            raise NotAProjector("matrix is not idempotent")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def rank(self):
        # eigenvalues of a projector cluster at 0 and 1
        return int(np.count_nonzero(np.linalg.eigvalsh(self.matrix) > 0.5))

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros((dim, dim)))

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim))

    def __matmul__(self, other):
        return self.matrix @ (other.matrix if isinstance(other, Projector) else other)

    def __eq__(self, other):
        if not isinstance(other, Projector):
            return NotImplemented
        return self.dim == other.dim and np.linalg.norm(self.matrix - other.matrix) < EPS

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Subspace:
    """Closed subspace of C^dim, canonicalised as its projector."""

    projector: Projector

    @property
    def dim(self):
        return self.projector.dim

    @property
    def rank(self):
        return self.projector.rank

    @property
    def matrix(self):
        return self.projector.matrix

    def basis(self):
        """Orthonormal basis of the range, one column per vector."""
        w, v = np.linalg.eigh(self.matrix)
        return v[:, w > 0.5]

    def contains(self, vector):
        v = np.asarray(vector, dtype=np.complex128)
        return np.linalg.norm(self.matrix @ v - v) < EPS * max(1.0, np.linalg.norm(v))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.projector == other.projector

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={self.rank})"


def _check_dims(*dims):
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"dimensions differ: {dims}")


def projector_from_ket(psi):
    """Rank-1 projector |psi><psi| / <psi|psi>."""
    if not isinstance(psi, Ket):
        psi = Ket(psi)
    v = psi.normalized()[:, None]
    return Projector(_range_projector(v))


def span(*vectors, dim=None):
    """Subspace spanned by the given vectors (zero vectors are allowed and ignored)."""
    if not vectors:
        if dim is None:
            raise ValueError("span() of nothing needs an explicit dim")
        return zero_subspace(dim)
    cols = np.column_stack([np.asarray(v, dtype=np.complex128) for v in vectors])
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    r = int(np.count_nonzero(s > EPS))
    return Subspace(Projector(_range_projector(u[:, :r])))


def zero_subspace(dim):
    return Subspace(Projector.zero(dim))


def full_subspace(dim):
    return Subspace(Projector.identity(dim))


def _as_projector(x):
    if isinstance(x, Subspace):
        return x.projector
    if isinstance(x, Projector):
        return x
    return Projector(x)


def meet_subspace(a, b):
    """Intersection of two subspaces.

    A vector lies in both ranges iff it is a null vector of the positive
    semidefinite operator 2I - P_a - P_b.
    """
    _check_dims(a.dim, b.dim)
    d = a.dim
    w, v = np.linalg.eigh(2.0 * np.eye(d) - a.matrix - b.matrix)
    return Subspace(Projector(_range_projector(v[:, w < EPS])))


def join_subspace(a, b):
    """Closed span of two subspaces: the range of P_a + P_b."""
    _check_dims(a.dim, b.dim)
    w, v = np.linalg.eigh(a.matrix + b.matrix)
    return Subspace(Projector(_range_projector(v[:, w > EPS])))


def ortho_complement(a):
    return Subspace(Projector(_clean(np.eye(a.dim) - a.matrix)))


def subspace_leq(a, b):
    """Containment a <= b, i.e. P_b P_a = P_a."""
    _check_dims(a.dim, b.dim)
    return bool(np.linalg.norm(b.matrix @ a.matrix - a.matrix) < EPS)


def is_invariant(h, p):
    """Whether ``p`` maps the subspace ``h`` into itself: P_h p P_h = p P_h."""
    p = _as_projector(p)
    _check_dims(h.dim, p.dim)
    ph = h.matrix
    return bool(np.linalg.norm(ph @ p.matrix @ ph - p.matrix @ ph) < EPS)
