"""Contexts, finite lattices and logics pasted from Boolean blocks.

Element ids are stable: ``0`` is always the bottom and ``1`` the top, the rest
follow insertion order. A lattice is either concrete (every element carries a
:class:`~qlogic.linalg.Subspace`) or abstract (labels and tables only). Across
blocks, concrete elements are identified by projector equality and abstract
ones by label.
"""

from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from . import kernels
from .errors import (
    BlockNotBoolean,
    ClosureOverflow,
    DimensionMismatch,
    IncompatibleTrivials,
    IncompleteSum,
    NotALattice,
    NotOrthogonal,
    PastingNotClosed,
    TrivialMember,
    UnknownElement,
)
from .linalg import (
    EPS,
    Projector,
    Subspace,
    full_subspace,
    join_subspace,
    meet_subspace,
    ortho_complement,
    subspace_leq,
    zero_subspace,
)

BOTTOM = 0
TOP = 1

__all__ = [
    "BOTTOM",
    "TOP",
    "Context",
    "Lattice",
    "PartialLogic",
    "PastedLogic",
    "make_context",
    "closure_lattice",
    "is_boolean",
    "check_orthomodular",
    "paste_blocks",
    "partial_logic",
    "meet_defined",
]


# -- contexts ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Context:
    projectors: tuple
    id: str = ""

    @property
    def dim(self):
        return self.projectors[0].dim

    def __len__(self):
        return len(self.projectors)

    def __iter__(self):
        return iter(self.projectors)


def make_context(projectors, id=""):
    """Validate a complete set of mutually orthogonal nontrivial projectors."""
    projectors = tuple(p if isinstance(p, Projector) else Projector(p) for p in projectors)
    if not projectors:
        raise IncompleteSum("a context needs at least one projector")
    dims = {p.dim for p in projectors}
    if len(dims) != 1:
        raise DimensionMismatch(f"context members have dimensions {sorted(dims)}")
    d = projectors[0].dim
    for i, p in enumerate(projectors):
        if p.rank in (0, d):
            raise TrivialMember(f"member {i} is the {'zero' if p.rank == 0 else 'identity'} projector")
    for i in range(len(projectors)):
        for j in range(i + 1, len(projectors)):
            a, b = projectors[i].matrix, projectors[j].matrix
            if np.linalg.norm(a @ b) >= EPS or np.linalg.norm(b @ a) >= EPS:
                raise NotOrthogonal(f"members {i} and {j} are not orthogonal")
    total = sum(p.matrix for p in projectors)
    if np.linalg.norm(total - np.eye(d)) >= EPS:
        raise IncompleteSum("members do not sum to the identity")
    return Context(projectors, id)


# -- lattices ----------------------------------------------------------------

class _SubspaceIndex:
    """Tolerance-based lookup of subspaces by projector."""

    def __init__(self, subspaces=()):
        self.items = []
        self._stack = None
        for s in subspaces:
            self.add(s)

    def add(self, s):
        self.items.append(s)
        self._stack = None
        return len(self.items) - 1

    def find(self, s):
        if not self.items:
            return -1
        if self._stack is None:
            self._stack = np.stack([x.matrix for x in self.items])
        if s.dim != self._stack.shape[1]:
            raise DimensionMismatch(f"dimension {s.dim} vs {self._stack.shape[1]}")
        dist = np.linalg.norm(self._stack - s.matrix[None], axis=(1, 2))
        hit = np.flatnonzero(dist < EPS)
        return int(hit[0]) if hit.size else -1

    def __len__(self):
        return len(self.items)


def _readonly(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _orthogonal_projectors(a, b):
    return bool(np.linalg.norm(a.matrix @ b.matrix) < EPS)


def _unique_complements(meet, join):
    n = meet.shape[0]
    comp = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        cands = np.flatnonzero((meet[x] == BOTTOM) & (join[x] == TOP))
        if cands.size == 1:
            comp[x] = cands[0]
    return comp


@dataclass(frozen=True, eq=False)
class Lattice:
    """Finite lattice with total meet/join tables over element ids.

    ``comp`` holds the orthocomplement id of each element, or -1 when it is not
    in the table. ``subspaces`` is ``None`` for abstract lattices.
    """

    labels: tuple
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    comp: np.ndarray
    subspaces: tuple = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "leq", _readonly(self.leq, bool))
        object.__setattr__(self, "meet", _readonly(self.meet, np.int64))
        object.__setattr__(self, "join", _readonly(self.join, np.int64))
        object.__setattr__(self, "comp", _readonly(self.comp, np.int64))
        n = len(self.labels)
        if n < 2:
            raise NotALattice("a lattice needs distinct bottom and top")
        for t in (self.leq, self.meet, self.join):
            if t.shape != (n, n):
                raise NotALattice(f"table shape {t.shape} does not match {n} elements")
        if (self.meet < 0).any() or (self.join < 0).any():
            raise NotALattice("meet/join tables are not total")
        if not (self.leq[BOTTOM].all() and self.leq[:, TOP].all()):
            raise NotALattice("element 0 must be the bottom and element 1 the top")

    # construction

    @classmethod
    def from_subspaces(cls, subspaces, labels=None, name=""):
        """Lattice over a meet/join-closed set of subspaces.

        Bottom and top are prepended when absent; duplicates are dropped.
        """
        subspaces = list(subspaces)
        if not subspaces:
            raise ValueError("need at least one subspace to fix the dimension")
        d = subspaces[0].dim
        index = _SubspaceIndex([zero_subspace(d), full_subspace(d)])
        src_labels = list(labels) if labels is not None else None
        out_labels = {0: "0", 1: "1"}
        for k, s in enumerate(subspaces):
            if s.dim != d:
                raise DimensionMismatch(f"subspace {k} has dimension {s.dim}, expected {d}")
            i = index.find(s)
            if i < 0:
                i = index.add(s)
            if src_labels is not None and i > TOP:
                out_labels.setdefault(i, src_labels[k])
        elems = index.items
        n = len(elems)
        lab = tuple(out_labels.get(i, f"e{i}") for i in range(n))
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        leq = np.empty((n, n), dtype=bool)
        for i in range(n):
            for j in range(i, n):
                m = index.find(meet_subspace(elems[i], elems[j]))
                v = index.find(join_subspace(elems[i], elems[j]))
                if m < 0 or v < 0:
                    raise NotALattice(f"elements {lab[i]!r} and {lab[j]!r} have a meet or join outside the set")
                meet[i, j] = meet[j, i] = m
                join[i, j] = join[j, i] = v
            for j in range(n):
                leq[i, j] = subspace_leq(elems[i], elems[j])
        comp = np.array([index.find(ortho_complement(s)) for s in elems], dtype=np.int64)
        return cls(lab, leq, meet, join, comp, tuple(elems), name)

    @classmethod
    def from_order(cls, labels, leq, comp=None, name=""):
        """Abstract lattice from a partial order (reflexive-transitive closure is taken).

        ``comp`` maps label -> label; by default an element's complement is its
        unique lattice complement when one exists.
        """
        labels = list(labels)
        n = len(labels)
        if len(set(labels)) != n:
            raise NotALattice("labels must be unique")
        rel = np.asarray(leq, dtype=bool)
        if rel.shape != (n, n):
            raise NotALattice(f"order shape {rel.shape} does not match {n} labels")
        rel = kernels.transitive_closure(rel)
        if (rel & rel.T & ~np.eye(n, dtype=bool)).any():
            raise NotALattice("relation is not antisymmetric")
        bottoms = np.flatnonzero(rel.all(axis=1))
        tops = np.flatnonzero(rel.all(axis=0))
        if bottoms.size != 1 or tops.size != 1 or bottoms[0] == tops[0]:
            raise NotALattice("order needs a unique bottom and a distinct unique top")
        b, t = int(bottoms[0]), int(tops[0])
        perm = [b, t] + [i for i in range(n) if i not in (b, t)]
        rel = rel[np.ix_(perm, perm)]
        labels = [labels[i] for i in perm]
        meet, join = kernels.bounds_tables(rel)
        if (meet < 0).any() or (join < 0).any():
            raise NotALattice("order is not a lattice: some pair lacks a meet or join")
        if comp is None:
            comp_ids = _unique_complements(meet, join)
        else:
            pos = {lab: i for i, lab in enumerate(labels)}
            comp_ids = np.full(n, -1, dtype=np.int64)
            for k, v in dict(comp).items():
                comp_ids[pos[k]] = pos[v]
        return cls(tuple(labels), rel, meet, join, comp_ids, None, name)

    @classmethod
    def boolean(cls, atom_labels, name="", bottom="0", top="1"):
        """Abstract Boolean algebra on the given atoms; element labels join atoms with '|'."""
        atoms = list(atom_labels)
        k = len(atoms)
        if k < 1:
            raise ValueError("need at least one atom")
        # atoms first (in the given order), then larger joins
        bits = lambda m: [i for i in range(k) if m >> i & 1]
        masks = [0, (1 << k) - 1] + sorted(range(1, (1 << k) - 1), key=lambda m: (len(bits(m)), bits(m)))

        def lab(m):
            if m == 0:
                return bottom
            if m == (1 << k) - 1:
                return top
            return "|".join(atoms[i] for i in range(k) if m >> i & 1)

        leq = np.array([[(x & y) == x for y in masks] for x in masks])
        return cls.from_order([lab(m) for m in masks], leq, name=name)

    # queries

    def __len__(self):
        return len(self.labels)

    @property
    def is_concrete(self):
        return self.subspaces is not None

    @property
    def dim(self):
        return self.subspaces[0].dim if self.is_concrete else None

    def check_id(self, e):
        if not isinstance(e, (int, np.integer)) or not 0 <= e < len(self):
            raise UnknownElement(e)
        return int(e)

    def index(self, key):
        """Element id of a label or subspace; raises UnknownElement."""
        if isinstance(key, Subspace):
            if self.is_concrete:
                i = _SubspaceIndex(self.subspaces).find(key)
                if i >= 0:
                    return i
        elif key in self.labels:
            return self.labels.index(key)
        raise UnknownElement(key)

    def atoms(self):
        return list(self._atoms)

    @cached_property
    def _atoms(self):
        return tuple(int(x) for x in np.flatnonzero(kernels.cover_relation(self.leq)[BOTTOM]))

    def orthogonal(self, a, b):
        if self.is_concrete:
            return _orthogonal_projectors(self.subspaces[a], self.subspaces[b])
        c = self.comp[b]
        return bool(c >= 0 and self.leq[a, c])

    def contexts(self):
        """Maximal sets of mutually orthogonal atoms whose join is the top."""
        return list(self._contexts)

    @cached_property
    def _contexts(self):
        atoms = self.atoms()
        g = nx.Graph()
        g.add_nodes_from(atoms)
        for i, a in enumerate(atoms):
            for b in atoms[i + 1:]:
                if self.orthogonal(a, b):
                    g.add_edge(a, b)
        out = []
        for clique in nx.find_cliques(g):
            j = BOTTOM
            for a in clique:
                j = self.join[j, a]
            if j == TOP:
                out.append(tuple(sorted(clique)))
        return tuple(sorted(out))

    def additive_triples(self):
        """(a, b, a v b) for every orthogonal pair a < b."""
        n = len(self)
        return [(a, b, int(self.join[a, b])) for a in range(n) for b in range(a + 1, n) if self.orthogonal(a, b)]

    def decomposition(self, x):
        """Atoms of some context whose join is ``x``, or None."""
        for ctx in self.contexts():
            below = [a for a in ctx if self.leq[a, x]]
            j = BOTTOM
            for a in below:
                j = self.join[j, a]
            if j == x:
                return below
        return None

    def sublattice(self, ids, name=""):
        """Restriction to ``ids`` (must be closed and contain bottom and top)."""
        ids = [BOTTOM, TOP] + [int(i) for i in dict.fromkeys(ids) if i not in (BOTTOM, TOP)]
        pos = {g: k for k, g in enumerate(ids)}
        try:
            meet = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.meet[np.ix_(ids, ids)])
            join = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.join[np.ix_(ids, ids)])
        except KeyError as exc:
            raise NotALattice(f"subset is not closed: missing element {exc.args[0]}") from None
        comp = np.array([pos.get(int(self.comp[i]), -1) for i in ids], dtype=np.int64)
        subs = tuple(self.subspaces[i] for i in ids) if self.is_concrete else None
        return Lattice(tuple(self.labels[i] for i in ids), self.leq[np.ix_(ids, ids)], meet, join, comp, subs, name)

    def same_elements(self, other):
        """Whether both lattices hold the same element set (projectors or labels)."""
        if len(self) != len(other) or self.is_concrete != other.is_concrete:
            return False
        if self.is_concrete:
            index = _SubspaceIndex(other.subspaces)
            return all(index.find(s) >= 0 for s in self.subspaces)
        return set(self.labels) == set(other.labels)


def closure_lattice(generators, labels=None, max_new=10_000, name="", dim=None):
    """Smallest meet/join-closed family containing the generators, bottom and top.

    ``dim`` is only needed when ``generators`` is empty. Raises ClosureOverflow
    once more than ``max_new`` elements beyond the generators have been created.
    """
    generators = list(generators)
    if not generators and dim is None:
        raise ValueError("an empty generator list needs an explicit dim")
    d = generators[0].dim if generators else dim
    for k, g in enumerate(generators):
        if g.dim != d:
            raise DimensionMismatch(f"generator {k} has dimension {g.dim}, expected {d}")
    index = _SubspaceIndex([zero_subspace(d), full_subspace(d)])
    for g in generators:
        if index.find(g) < 0:
            index.add(g)
    base = len(index)
    k = 0
    while k < len(index):
        for j in range(k + 1):
            a, b = index.items[j], index.items[k]
            for r in (meet_subspace(a, b), join_subspace(a, b)):
                if index.find(r) < 0:
                    index.add(r)
                    if len(index) - base > max_new:
                        raise ClosureOverflow(f"closure exceeded {max_new} new elements")
        k += 1
    return Lattice.from_subspaces(index.items, labels=_closure_labels(generators, labels, index), name=name)


def _closure_labels(generators, labels, index):
    if labels is None:
        return None
    out = ["0", "1"] + [f"e{i}" for i in range(2, len(index))]
    for g, lab in zip(generators, labels):
        out[index.find(g)] = lab
    return out



def is_boolean(lat):
    """Distributive and complemented, by exhaustive check of all triples."""
    lat = _as_lattice(lat)
    if kernels.distributive_violation(lat.meet, lat.join)[0] >= 0:
        return False
    has_comp = ((lat.meet == BOTTOM) & (lat.join == TOP)).any(axis=1)
    return bool(has_comp.all())


def check_orthomodular(lat):
    """a <= b implies b = a v (b ^ a') for all pairs; False if some complement is missing."""
    lat = _as_lattice(lat)
    if (lat.comp < 0).any():
        return False
    return kernels.orthomodular_violation(lat.leq, lat.meet, lat.join, lat.comp)[0] < 0


def _as_lattice(x):
    if isinstance(x, PastedLogic):
        return x.as_lattice()
    if not isinstance(x, Lattice):
        raise TypeError(f"expected a Lattice, got {type(x).__name__}")
    return x


# -- block logics ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _BlockLogic:
    labels: tuple
    subspaces: tuple
    blocks: tuple
    members: tuple  # members[k][local id] -> global id
    leq: np.ndarray
    name: str = ""

    def __len__(self):
        return len(self.labels)

    @property
    def is_concrete(self):
        return self.subspaces is not None

    @property
    def dim(self):
        return self.subspaces[0].dim if self.is_concrete else None

    @cached_property
    def _local(self):
        # _local[k] : global id -> local id in block k
        return tuple({g: i for i, g in enumerate(m)} for m in self.members)

    @cached_property
    def membership(self):
        out = [set() for _ in self.labels]
        for k, m in enumerate(self.members):
            for g in m:
                out[g].add(k)
        return tuple(frozenset(s) for s in out)

    def check_id(self, e):
        if not isinstance(e, (int, np.integer)) or not 0 <= e < len(self):
            raise UnknownElement(e)
        return int(e)

    def index(self, key):
        if isinstance(key, Subspace):
            if self.is_concrete:
                i = _SubspaceIndex(self.subspaces).find(key)
                if i >= 0:
                    return i
        elif key in self.labels:
            return self.labels.index(key)
        raise UnknownElement(key)

    def common_blocks(self, a, b):
        a, b = self.check_id(a), self.check_id(b)
        return sorted(self.membership[a] & self.membership[b])

    def _in_block(self, k, table, a, b):
        loc = self._local[k]
        return self.members[k][table[loc[a], loc[b]]]

    def block_meet(self, a, b):
        """Meet computed inside a shared block, or None when no block holds both."""
        ks = self.common_blocks(a, b)
        return None if not ks else int(self._in_block(ks[0], self.blocks[ks[0]].meet, a, b))

    def block_join(self, a, b):
        ks = self.common_blocks(a, b)
        return None if not ks else int(self._in_block(ks[0], self.blocks[ks[0]].join, a, b))

    def block_atoms(self, k):
        return [self.members[k][i] for i in self.blocks[k].atoms()]

    def atoms(self):
        seen = {}
        for k in range(len(self.blocks)):
            for a in self.block_atoms(k):
                seen.setdefault(a, None)
        return sorted(seen)

    def contexts(self):
        """The atom set of each block."""
        return [tuple(sorted(self.block_atoms(k))) for k in range(len(self.blocks))]

    def orthogonal(self, a, b):
        if self.is_concrete:
            return _orthogonal_projectors(self.subspaces[a], self.subspaces[b])
        for k in self.common_blocks(a, b):
            loc = self._local[k]
            if self.blocks[k].orthogonal(loc[a], loc[b]):
                return True
        return False

    def decomposition(self, x):
        """Atoms of the first block containing ``x`` that lie below ``x``."""
        ks = sorted(self.membership[x])
        if not ks:
            return None
        k = ks[0]
        loc = self._local[k]
        blk = self.blocks[k]
        return [self.members[k][i] for i in blk.atoms() if blk.leq[i, loc[x]]]


@dataclass(frozen=True, eq=False)
class PartialLogic(_BlockLogic):
    """Boolean blocks sharing bottom and top; meet/join exist only inside a block."""

    def meet(self, a, b):
        return self.block_meet(a, b)

    def join(self, a, b):
        return self.block_join(a, b)

    def additive_triples(self):
        out = []
        for k, blk in enumerate(self.blocks):
            m = self.members[k]
            for i in range(len(blk)):
                for j in range(i + 1, len(blk)):
                    if blk.orthogonal(i, j):
                        a, b = sorted((m[i], m[j]))
                        out.append((a, b, m[blk.join[i, j]]))
        return sorted(set(out))


@dataclass(frozen=True, eq=False)
class PastedLogic(_BlockLogic):
    """Boolean blocks pasted at bottom and top, with total meet and join."""

    meet_table: np.ndarray = None
    join_table: np.ndarray = None
    comp: np.ndarray = None

    def meet(self, a, b):
        return int(self.meet_table[self.check_id(a), self.check_id(b)])

    def join(self, a, b):
        return int(self.join_table[self.check_id(a), self.check_id(b)])

    @cached_property
    def _lattice(self):
        return Lattice(self.labels, self.leq, self.meet_table, self.join_table, self.comp, self.subspaces, self.name)

    def as_lattice(self):
        return self._lattice

    def orthogonal(self, a, b):
        if self.is_concrete:
            return _orthogonal_projectors(self.subspaces[a], self.subspaces[b])
        return self._lattice.orthogonal(a, b)

    def additive_triples(self):
        return self._lattice.additive_triples()


def _merge_blocks(blocks):
    blocks = list(blocks)
    if not blocks:
        raise ValueError("need at least one block")
    for k, b in enumerate(blocks):
        if not isinstance(b, Lattice):
            raise TypeError(f"block {k} is not a Lattice")
        if not is_boolean(b):
            raise BlockNotBoolean(f"block {k} ({b.name or 'unnamed'}) is not a Boolean algebra")
    concrete = {b.is_concrete for b in blocks}
    if len(concrete) != 1:
        raise IncompatibleTrivials("cannot mix concrete and abstract blocks")
    concrete = concrete.pop()
    if concrete:
        dims = {b.dim for b in blocks}
        if len(dims) != 1:
            raise IncompatibleTrivials(f"blocks live in different dimensions {sorted(dims)}: tops differ")
        d = dims.pop()
        index = _SubspaceIndex([zero_subspace(d), full_subspace(d)])
    else:
        trivials = {(b.labels[BOTTOM], b.labels[TOP]) for b in blocks}
        if len(trivials) != 1:
            raise IncompatibleTrivials(f"blocks disagree on bottom/top labels: {sorted(trivials)}")
        bot, top = trivials.pop()
        pos = {bot: 0, top: 1}
    labels = [blocks[0].labels[BOTTOM], blocks[0].labels[TOP]]
    members, kept = [], []
    for b in blocks:
        m = []
        for i in range(len(b)):
            if concrete:
                g = index.find(b.subspaces[i])
                if g < 0:
                    g = index.add(b.subspaces[i])
            else:
                g = pos.setdefault(b.labels[i], len(pos))
            if g == len(labels):
                labels.append(b.labels[i])
            m.append(g)
        if sorted(m) in [sorted(x) for x in members]:
            continue
        members.append(tuple(m))
        kept.append(b)
    subspaces = tuple(index.items) if concrete else None
    return labels, subspaces, kept, members


def _union_order(n, blocks, members):
    rel = np.zeros((n, n), dtype=bool)
    for b, m in zip(blocks, members):
        idx = np.asarray(m)
        rel[np.ix_(idx, idx)] |= b.leq
    rel[BOTTOM, :] = True
    rel[:, TOP] = True
    return kernels.transitive_closure(rel)


def partial_logic(blocks, name=""):
    """Collect Boolean blocks without synthesising any cross-block meet or join."""
    labels, subspaces, blocks, members = _merge_blocks(blocks)
    leq = _readonly(_union_order(len(labels), blocks, members), bool)
    return PartialLogic(tuple(labels), subspaces, tuple(blocks), tuple(members), leq, name)


def paste_blocks(blocks, name=""):
    """Paste Boolean blocks at their shared bottom and top.

    Concrete blocks get cross-block meets and joins from subspace arithmetic;
    abstract blocks from bounds in the union order. Either way the result must
    stay inside the union of the blocks' elements.
    """
    labels, subspaces, blocks, members = _merge_blocks(blocks)
    n = len(labels)
    if subspaces is not None:
        index = _SubspaceIndex(subspaces)
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        leq = np.empty((n, n), dtype=bool)
        for i in range(n):
            for j in range(n):
                meet[i, j] = index.find(meet_subspace(subspaces[i], subspaces[j]))
                join[i, j] = index.find(join_subspace(subspaces[i], subspaces[j]))
                leq[i, j] = subspace_leq(subspaces[i], subspaces[j])
        comp = np.array([index.find(ortho_complement(s)) for s in subspaces], dtype=np.int64)
    else:
        leq = _union_order(n, blocks, members)
        meet, join = kernels.bounds_tables(leq)
        comp = np.full(n, -1, dtype=np.int64)
        for b, m in zip(blocks, members):
            for i in range(len(b)):
                if b.comp[i] >= 0 and comp[m[i]] < 0:
                    comp[m[i]] = m[b.comp[i]]
    bad = np.argwhere((meet < 0) | (join < 0))
    if len(bad):
        i, j = bad[0]
        raise PastingNotClosed(f"meet or join of {labels[i]!r} and {labels[j]!r} lies outside the pasted elements")
    return PastedLogic(
        tuple(labels), subspaces, tuple(blocks), tuple(members), _readonly(leq, bool), name,
        _readonly(meet, np.int64), _readonly(join, np.int64), _readonly(comp, np.int64),
    )


def meet_defined(s, a, b):
    """Whether ``a`` and ``b`` share a block (bottom and top belong to all)."""
    if isinstance(s, (Lattice, PastedLogic)):
        s.check_id(a)
        s.check_id(b)
        return True
    return bool(s.common_blocks(a, b))
