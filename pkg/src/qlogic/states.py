"""Probability states on logic structures.

A state assigns every element id a value in [0, 1]. It must give 0 to the
bottom and 1 to the top, sum to 1 over the atoms of every context, and be
additive on orthogonal pairs whose join is defined. Values built here are
``fractions.Fraction``. User-supplied float values are checked with tolerance
``TOL``.

The structure argument ``s`` can be a :class:`~qlogic.lattice.Lattice`, a
:class:`~qlogic.lattice.PastedLogic` or a :class:`~qlogic.lattice.PartialLogic`.
"""

import enum
import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    IndifferenceConflict,
    MissingElement,
    NotADensityOperator,
    PreparationNotAtom,
)
from .lattice import BOTTOM, TOP, Lattice, PartialLogic, meet_defined
from .linalg import EPS, Ket, Projector, Subspace, projector_from_ket

TOL = 1e-9

__all__ = [
    "TOL",
    "ProbabilityState",
    "SearchResult",
    "DensityOperator",
    "EventClass",
    "validate_state",
    "state_violations",
    "enumerate_dispersion_free",
    "dispersion_free_search",
    "brute_force_dispersion_free",
    "born_trace",
    "born_overlap",
    "classify_event",
    "classify_event_pair",
    "indifference_state",
    "classification_consistent_states",
    "gleason_additivity_check",
    "as_rational",
]


@dataclass(frozen=True)
class ProbabilityState:
    structure: str
    values: tuple
    metadata: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, e):
        return self.values[e]

    def __len__(self):
        return len(self.values)

    @property
    def exact(self):
        return all(isinstance(v, (int, Fraction)) for v in self.values)


@dataclass(frozen=True)
class SearchResult:
    states: list
    atom_count: int
    nodes: int
    structure: str = ""
    backend: str = kernels.BACKEND


class EventClass(enum.Enum):
    CERTAIN = "Certain"
    IMPOSSIBLE = "Impossible"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


# -- validation --------------------------------------------------------------

def _values_list(s, values):
    n = len(s)
    if isinstance(values, ProbabilityState):
        values = values.values
    if isinstance(values, Mapping):
        missing = [i for i in range(n) if i not in values]
        if missing:
            raise MissingElement(f"no value for element ids {missing}")
        return [values[i] for i in range(n)]
    values = list(values)
    if len(values) != n:
        raise MissingElement(f"expected {n} values, got {len(values)}")
    return values


def state_violations(s, values, tol=TOL):
    """Human-readable list of every state axiom ``values`` breaks on ``s``."""
    v = _values_list(s, values)
    out = []
    for i, x in enumerate(v):
        if not (-tol <= x <= 1 + tol):
            out.append(f"value of {s.labels[i]} = {x} outside [0, 1]")
    if abs(v[BOTTOM]) > tol:
        out.append(f"bottom has value {v[BOTTOM]}")
    if abs(v[TOP] - 1) > tol:
        out.append(f"top has value {v[TOP]}")
    for ctx in s.contexts():
        total = sum(v[a] for a in ctx)
        if abs(total - 1) > tol:
            out.append(f"context {[s.labels[a] for a in ctx]} sums to {total}")
    for a, b, j in s.additive_triples():
        if abs(v[j] - v[a] - v[b]) > tol:
            out.append(f"{s.labels[j]} = {s.labels[a]} v {s.labels[b]} but {v[j]} != {v[a]} + {v[b]}")
    return out


def validate_state(s, values, tol=TOL):
    """Whether ``values`` (sequence or id -> value mapping) is a probability state on ``s``."""
    return not state_violations(s, values, tol)


# -- dispersion-free enumeration ---------------------------------------------

def _extensions(s, atoms, atom_values):
    """Complete atom values to all elements; undetermined elements branch over {0, 1}."""
    n = len(s)
    v = [None] * n
    v[BOTTOM] = Fraction(0)
    for a, x in zip(atoms, atom_values):
        v[a] = Fraction(int(x))
    free = []
    for x in range(n):
        if v[x] is not None:
            continue
        dec = s.decomposition(x)
        if dec is None:
            free.append(x)
        else:
            v[x] = sum((v[a] for a in dec), Fraction(0))
    if not free:
        return [v]
    out = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        w = list(v)
        for x, b in zip(free, bits):
            w[x] = Fraction(b)
        out.append(w)
    return out


def _complete(s, v):
    """Fill unset entries of ``v`` from atom decompositions, in place."""
    for x in range(len(s)):
        if v[x] is None:
            dec = s.decomposition(x)
            if dec is None:
                raise ValueError(f"{s.labels[x]} is not a join of orthogonal atoms; its value is not determined")
            v[x] = sum((v[a] for a in dec), Fraction(0))
    return v


def _context_matrix(s, atoms):
    pos = {a: i for i, a in enumerate(atoms)}
    ctxs = s.contexts()
    m = np.zeros((len(ctxs), len(atoms)), dtype=np.uint8)
    for r, ctx in enumerate(ctxs):
        for a in ctx:
            m[r, pos[a]] = 1
    return m


def dispersion_free_search(s):
    """All {0, 1}-valued states, with search statistics.

    Atoms are the only free variables: a backtracking search picks exactly one
    true atom per context, then every other element takes the sum of the atoms
    in its decomposition. States come back sorted by their value tuple.
    """
    atoms = s.atoms()
    rows, nodes = kernels.exact_one_solutions(_context_matrix(s, atoms))
    found = []
    for row in rows:
        for v in _extensions(s, atoms, row):
            if validate_state(s, v, tol=0):
                found.append(tuple(v))
    found.sort()
    name = getattr(s, "name", "")
    states = [ProbabilityState(name, v, {"rule": "dispersion-free"}) for v in found]
    return SearchResult(states, len(atoms), nodes, name)


def enumerate_dispersion_free(s):
    return dispersion_free_search(s).states


def brute_force_dispersion_free(s, vectorized=True):
    """Reference enumeration: every {0, 1} atom assignment, filtered by the state axioms.

    The vectorised form evaluates the axioms as array comparisons over all
    ``2**n_atoms`` rows at once; ``vectorized=False`` calls ``validate_state``
    per assignment instead.
    """
    atoms = s.atoms()
    n = len(s)
    decs = {x: s.decomposition(x) for x in range(n) if x not in atoms}
    if not vectorized or any(d is None for d in decs.values()):
        found = []
        for bits in itertools.product((0, 1), repeat=len(atoms)):
            for v in _extensions(s, atoms, bits):
                if validate_state(s, v, tol=0):
                    found.append(tuple(v))
        found.sort()
        return [ProbabilityState(getattr(s, "name", ""), v, {"rule": "dispersion-free"}) for v in found]

    n_atoms = len(atoms)
    if n_atoms > 22:
        raise ValueError("brute force limited to 22 atoms")
    pos = {a: i for i, a in enumerate(atoms)}
    spread = np.zeros((n_atoms, n), dtype=np.int64)
    for a in atoms:
        spread[pos[a], a] = 1
    for x, dec in decs.items():
        for a in dec:
            spread[pos[a], x] = 1
    masks = np.arange(1 << n_atoms, dtype=np.int64)
    rows = (masks[:, None] >> np.arange(n_atoms - 1, -1, -1)[None, :]) & 1
    v = rows @ spread
    ok = ((v >= 0) & (v <= 1)).all(axis=1) & (v[:, BOTTOM] == 0) & (v[:, TOP] == 1)
    for ctx in s.contexts():
        ok &= v[:, list(ctx)].sum(axis=1) == 1
    for a, b, j in s.additive_triples():
        ok &= v[:, j] == v[:, a] + v[:, b]
    found = sorted(tuple(Fraction(int(x)) for x in row) for row in v[ok])
    return [ProbabilityState(getattr(s, "name", ""), t, {"rule": "dispersion-free"}) for t in found]


# -- Born rule ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise NotADensityOperator(f"density operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NotADensityOperator("entries must be finite")
        if np.linalg.norm(m - m.conj().T) >= EPS:
            raise NotADensityOperator("matrix is not Hermitian")
        if np.linalg.eigvalsh(m).min() < -EPS:
            raise NotADensityOperator("matrix has a negative eigenvalue")
        if abs(np.trace(m) - 1) >= EPS:
            raise NotADensityOperator(f"trace is {np.trace(m).real}, not 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi):
        return cls(projector_from_ket(psi).matrix)

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)


def as_rational(x, max_denominator=1000, tol=1e-12):
    """``x`` as a Fraction when it lies within ``tol`` of one with a small denominator."""
    f = Fraction(float(x)).limit_denominator(max_denominator)
    if abs(float(f) - float(x)) > tol:
        raise ValueError(f"{x!r} is not within {tol} of a rational with denominator <= {max_denominator}")
    return f


def born_trace(rho, p, exact=False):
    """Tr(rho P). With ``exact`` the result is snapped to a small-denominator Fraction."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    if isinstance(p, Subspace):
        p = p.projector
    elif not isinstance(p, Projector):
        p = Projector(p)
    if rho.dim != p.dim:
        raise DimensionMismatch(f"density operator has dimension {rho.dim}, projector {p.dim}")
    val = float(np.trace(rho.matrix @ p.matrix).real)
    return as_rational(val) if exact else val


def born_overlap(phi, psi, exact=False):
    """|<phi|psi>|^2 for the normalised vectors."""
    phi = phi if isinstance(phi, Ket) else Ket(phi)
    psi = psi if isinstance(psi, Ket) else Ket(psi)
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"kets have dimensions {phi.dim} and {psi.dim}")
    val = float(abs(np.vdot(phi.normalized(), psi.normalized())) ** 2)
    return as_rational(val) if exact else val


def gleason_additivity_check(rho, c, tol=TOL):
    """Whether Tr(rho P) lies in [0, 1] for each P in context ``c`` and the terms sum to 1."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    if rho.dim != c.dim:
        raise DimensionMismatch(f"density operator has dimension {rho.dim}, context {c.dim}")
    terms = [born_trace(rho, p) for p in c]
    return all(-tol <= t <= 1 + tol for t in terms) and abs(sum(terms) - 1) <= tol


# -- events under the weakened structure -------------------------------------

def _meet(s, a, b):
    if isinstance(s, Lattice):
        return int(s.meet[a, b])
    return s.meet(a, b)


def _check_preparation(s, preparation):
    preparation = s.check_id(preparation)
    if preparation not in s.atoms():
        raise PreparationNotAtom(f"{s.labels[preparation]} is not an atom")
    return preparation


def classify_event(s, preparation, target):
    """Certain, Impossible or Indeterminate for ``target`` given a state prepared in the atom ``preparation``."""
    preparation = _check_preparation(s, preparation)
    target = s.check_id(target)
    if not meet_defined(s, preparation, target):
        return EventClass.INDETERMINATE
    m = _meet(s, preparation, target)
    if m == preparation:
        return EventClass.CERTAIN
    if m == BOTTOM:
        return EventClass.IMPOSSIBLE
    raise PreparationNotAtom(f"{s.labels[preparation]} meets {s.labels[target]} strictly between bottom and itself")


def classify_event_pair(s, preparation, a, b, kind="intersection"):
    """Class of the intersection or union of the events for ``a`` and ``b``.

    The compound is formed inside a block holding both ``a`` and ``b``, so it
    can be determinate while each event alone is not.
    """
    if kind not in ("intersection", "union"):
        raise ValueError(f"kind must be 'intersection' or 'union', got {kind!r}")
    preparation = _check_preparation(s, preparation)
    a, b = s.check_id(a), s.check_id(b)
    if not meet_defined(s, a, b):
        return EventClass.INDETERMINATE
    if isinstance(s, Lattice):
        c = int(s.meet[a, b] if kind == "intersection" else s.join[a, b])
    else:
        c = s.meet(a, b) if kind == "intersection" else s.join(a, b)
    return classify_event(s, preparation, c)


def _classes(s, preparation):
    return [classify_event(s, preparation, x) for x in range(len(s))]


def indifference_state(s, preparation):
    """Equal weights over each foreign context, with determined events fixed at 0 or 1.

    Inside a block that does not contain the preparation, the atoms whose event
    is indeterminate split what the determined atoms leave of the unit mass
    equally. Non-atom indeterminate elements take the sum over their atoms.
    """
    if not isinstance(s, PartialLogic):
        raise TypeError("indifference_state needs a PartialLogic")
    preparation = _check_preparation(s, preparation)
    classes = _classes(s, preparation)
    n = len(s)
    v = [None] * n
    for x, c in enumerate(classes):
        if c is EventClass.CERTAIN:
            v[x] = Fraction(1)
        elif c is EventClass.IMPOSSIBLE:
            v[x] = Fraction(0)
    sizes = set()
    for k in range(len(s.blocks)):
        atoms = s.block_atoms(k)
        open_atoms = [a for a in atoms if classes[a] is EventClass.INDETERMINATE]
        if not open_atoms:
            continue
        rest = 1 - sum((v[a] for a in atoms if v[a] is not None), Fraction(0))
        share = rest / len(open_atoms)
        sizes.add(len(open_atoms))
        for a in open_atoms:
            if v[a] is not None and v[a] != share:
                raise IndifferenceConflict(f"{s.labels[a]} gets {v[a]} and {share} from different blocks")
            v[a] = share
    _complete(s, v)
    bad = state_violations(s, v, tol=0)
    if bad:
        raise IndifferenceConflict("; ".join(bad))
    meta = {
        "rule": "indifference",
        "preparation": preparation,
        "extrapolated": s.dim != 2 or sizes - {2} != set(),
    }
    return ProbabilityState(s.name, tuple(v), meta)


def classification_consistent_states(s, preparation, grid=(0, 1), symmetric=True):
    """States agreeing with ``classify_event`` whose indeterminate atoms take values in ``grid``.

    With ``symmetric`` the indeterminate atoms of one block must share a value,
    since nothing distinguishes them. For the qubit this family is empty on
    ``grid=(0, 1)`` and is the single all-halves state on any grid holding 1/2.
    """
    preparation = _check_preparation(s, preparation)
    classes = _classes(s, preparation)
    grid = [Fraction(g) for g in grid]
    atoms = s.atoms()
    fixed = {a: Fraction(1 if classes[a] is EventClass.CERTAIN else 0)
             for a in atoms if classes[a] is not EventClass.INDETERMINATE}
    open_atoms = [a for a in atoms if a not in fixed]
    # group[a] = representative whose value a copies
    group = {a: a for a in open_atoms}
    if symmetric:
        def find(a):
            while group[a] != a:
                a = group[a]
            return a
        for ctx in s.contexts():
            members = [a for a in ctx if a in group]
            for a in members[1:]:
                group[find(a)] = find(members[0])
        group = {a: find(a) for a in open_atoms}
    reps = sorted(set(group.values()))
    out = []
    for choice in itertools.product(grid, repeat=len(reps)):
        pick = dict(zip(reps, choice))
        atom_vals = [fixed[a] if a in fixed else pick[group[a]] for a in atoms]
        v = [None] * len(s)
        v[BOTTOM] = Fraction(0)
        for a, x in zip(atoms, atom_vals):
            v[a] = x
        _complete(s, v)
        agrees = all(
            (c is not EventClass.CERTAIN or v[x] == 1) and (c is not EventClass.IMPOSSIBLE or v[x] == 0)
            for x, c in enumerate(classes)
        )
        if agrees and validate_state(s, v, tol=0):
            out.append(ProbabilityState(s.name, tuple(v), {"rule": "classification", "preparation": preparation}))
    return out
