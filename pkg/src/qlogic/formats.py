"""JSON structure documents, state serialisation and DOT Hasse diagrams.

Structure document (``schema_version`` "1.0")::

    {
      "schema_version": "1.0",
      "name": "qubit-blocks",
      "mode": "pasted" | "partial",
      "dimension": 2,
      "elements": [{"id": 0, "label": "0", "rank": 0, "matrix": [[[re, im], ...], ...]}, ...],
      "blocks": [[0, 1, 2, 3], ...],
      "block_names": ["L(Sigma1)", ...],
      "leq": [[0 | 1, ...], ...],
      "meet": [[id | null, ...], ...],
      "join": [[id | null, ...], ...]
    }

Ids 0 and 1 are the bottom and the top. Matrices are row-major ``[re, im]``
pairs written with shortest round-trip float repr, so numbers survive a
write/read cycle bit for bit. A pasted document may have no blocks, in which
case its elements must already be closed under meet and join. ``null`` in the
tables marks a meet or join that a partial logic leaves undefined.
"""

import json
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import NotADensityOperator, NotALattice, NotAProjector, QLogicError, SchemaError, ValidationError
from .lattice import BOTTOM, TOP, Lattice, PartialLogic, PastedLogic, make_context, partial_logic, paste_blocks
from .linalg import Projector, Subspace
from .states import DensityOperator

SCHEMA_VERSION = "1.0"
MODES = ("pasted", "partial")


# -- numbers -----------------------------------------------------------------

def _num(x):
    x = float(x)
    return 0.0 if x == 0 else x


def matrix_to_json(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[[_num(z.real), _num(z.imag)] for z in row] for row in m]


def matrix_from_json(data, what="matrix"):
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{what} must be a nested list of [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise SchemaError(f"{what} must be a non-empty square grid of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def value_to_json(x):
    """Fractions as ``"p/q"`` strings, floats as numbers."""
    if isinstance(x, (Fraction, int)):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    return float(x)


def value_from_json(x):
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise SchemaError(f"bad rational value {x!r}") from None
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    raise SchemaError(f"bad state value {x!r}")


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# -- structures --------------------------------------------------------------

def mode_of(s):
    return "partial" if isinstance(s, PartialLogic) else "pasted"


def _tables(s):
    n = len(s)
    if isinstance(s, PartialLogic):
        meet = [[s.meet(a, b) for b in range(n)] for a in range(n)]
        join = [[s.join(a, b) for b in range(n)] for a in range(n)]
    else:
        lat = s.as_lattice() if isinstance(s, PastedLogic) else s
        meet, join = lat.meet.tolist(), lat.join.tolist()
    return meet, join


def structure_document(s):
    """Canonical JSON-ready dict for a concrete Lattice, PastedLogic or PartialLogic."""
    if not s.is_concrete:
        raise SchemaError("only structures built from subspaces can be serialised")
    meet, join = _tables(s)
    blocks = [] if isinstance(s, Lattice) else [list(map(int, m)) for m in s.members]
    return {
        "schema_version": SCHEMA_VERSION,
        "name": s.name,
        "mode": mode_of(s),
        "dimension": int(s.dim),
        "elements": [
            {"id": i, "label": s.labels[i], "rank": int(sub.rank), "matrix": matrix_to_json(sub.matrix)}
            for i, sub in enumerate(s.subspaces)
        ],
        "blocks": blocks,
        "block_names": [] if isinstance(s, Lattice) else [b.name for b in s.blocks],
        "leq": np.asarray(s.leq, dtype=int).tolist(),
        "meet": meet,
        "join": join,
    }


def _require(doc, key, types):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    if not isinstance(doc[key], types) or isinstance(doc[key], bool):
        raise SchemaError(f"field {key!r} has the wrong type")
    return doc[key]


def parse_structure(doc, mode=None):
    """Rebuild a structure from a document; ``mode`` overrides the document's mode.

    Raises SchemaError for malformed documents and ValidationError when the
    content breaks a projector, lattice or context requirement.
    """
    if not isinstance(doc, dict):
        raise SchemaError("structure document must be a JSON object")
    version = _require(doc, "schema_version", str)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}")
    mode = mode or _require(doc, "mode", str)
    if mode not in MODES:
        raise SchemaError(f"mode must be one of {MODES}, got {mode!r}")
    dim = _require(doc, "dimension", int)
    elements = _require(doc, "elements", list)
    blocks = doc.get("blocks", [])
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise SchemaError("blocks must be a list of id lists")
    name = doc.get("name", "")
    block_names = doc.get("block_names") or [f"block{k}" for k in range(len(blocks))]
    if len(block_names) != len(blocks):
        raise SchemaError("block_names must have one entry per block")

    subs, labels = [], []
    for k, el in enumerate(elements):
        if not isinstance(el, dict):
            raise SchemaError(f"element {k} must be an object")
        if _require(el, "id", int) != k:
            raise SchemaError(f"element ids must be 0..n-1 in order; position {k} has id {el['id']}")
        m = matrix_from_json(_require(el, "matrix", list), f"element {k} matrix")
        if m.shape[0] != dim:
            raise SchemaError(f"element {k} matrix is {m.shape[0]}x{m.shape[0]}, dimension is {dim}")
        try:
            sub = Subspace(Projector(m))
        except NotAProjector as exc:
            raise ValidationError(f"element {k}: {exc}") from None
        rank = _require(el, "rank", int)
        if rank != sub.rank:
            raise ValidationError(f"element {k}: stated rank {rank} but projector has rank {sub.rank}")
        subs.append(sub)
        labels.append(str(el.get("label", k)))
    if len(subs) < 2 or subs[BOTTOM].rank != 0 or subs[TOP].rank != dim:
        raise ValidationError("element 0 must be the zero subspace and element 1 the full space")

    n = len(subs)
    for k, b in enumerate(blocks):
        bad = [i for i in b if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < n]
        if bad:
            raise ValidationError(f"block {k} references unknown ids {bad}")
        if BOTTOM not in b or TOP not in b:
            raise ValidationError(f"block {k} must contain the bottom (0) and the top (1)")
    if blocks:
        covered = {i for b in blocks for i in b}
        if covered != set(range(n)):
            raise ValidationError(f"elements {sorted(set(range(n)) - covered)} belong to no block")

    try:
        if not blocks:
            if mode == "partial":
                raise ValidationError("a partial logic needs blocks")
            s = Lattice.from_subspaces(subs, labels=labels, name=name)
        else:
            lats = []
            for k, b in enumerate(blocks):
                lat = Lattice.from_subspaces(
                    [subs[i] for i in b], labels=[labels[i] for i in b], name=str(block_names[k])
                )
                try:
                    make_context([lat.subspaces[a].projector for a in lat.atoms()], id=lat.name)
                except QLogicError as exc:
                    atoms = [lat.labels[i] for i in lat.atoms()]
                    raise ValidationError(f"block {k} atoms {atoms} do not form a context: {exc}") from None
                lats.append(lat)
            s = (paste_blocks if mode == "pasted" else partial_logic)(lats, name=name)
    except ValidationError:
        raise
    except (NotALattice, QLogicError) as exc:
        raise ValidationError(str(exc)) from None

    _check_tables(doc, s)
    return s


def _check_tables(doc, s):
    """Stated tables, when present and aligned with the rebuilt order, must match."""
    if [el.get("label") for el in doc["elements"]] != list(s.labels) or len(doc["elements"]) != len(s):
        return
    meet, join = _tables(s)
    want = {"leq": np.asarray(s.leq, dtype=int).tolist(), "meet": meet, "join": join}
    for key, table in want.items():
        if key in doc and doc[key] != table:
            raise ValidationError(f"stated {key} table does not match the subspace arithmetic")


def load_structure(path, mode=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    return parse_structure(doc, mode=mode)


def structure_summary(s):
    out = {
        "name": s.name,
        "mode": mode_of(s),
        "dimension": s.dim,
        "elements": len(s),
        "labels": list(s.labels),
        "atoms": s.atoms(),
        "contexts": [list(c) for c in s.contexts()],
    }
    if not isinstance(s, Lattice):
        out["blocks"] = [list(map(int, m)) for m in s.members]
    return out


# -- states ------------------------------------------------------------------

def state_to_json(state):
    return {
        "structure": state.structure,
        "values": {str(i): value_to_json(v) for i, v in enumerate(state.values)},
        "metadata": {k: v for k, v in state.metadata.items()},
    }


def state_values_from_json(doc):
    values = doc["values"] if isinstance(doc, dict) and "values" in doc else doc
    if not isinstance(values, dict):
        raise SchemaError("state values must be an object mapping element id to value")
    try:
        return {int(k): value_from_json(v) for k, v in values.items()}
    except ValueError:
        raise SchemaError("state keys must be integer element ids") from None


def load_density(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    data = doc.get("matrix") if isinstance(doc, dict) else doc
    if data is None:
        raise SchemaError(f"{path}: expected a matrix or an object with a 'matrix' field")
    try:
        return DensityOperator(matrix_from_json(data, "density matrix"))
    except NotADensityOperator as exc:
        raise ValidationError(f"{path}: {exc}") from None


# -- DOT ---------------------------------------------------------------------

def _quote(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_edges(s):
    cover = kernels.cover_relation(np.asarray(s.leq, dtype=bool))
    return [(int(a), int(b)) for a, b in np.argwhere(cover)]


def dot_document(s):
    """Hasse diagram, bottom at the bottom; partial logics draw each block as a cluster."""
    lines = [f"digraph {_quote(s.name or 'hasse')} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, lab in enumerate(s.labels):
        lines.append(f"  n{i} [label={_quote(lab)}];")
    if isinstance(s, PartialLogic):
        for k, m in enumerate(s.members):
            inner = [g for g in m if g not in (BOTTOM, TOP)]
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f"    label={_quote(s.blocks[k].name or f'block{k}')};")
            for g in inner:
                lines.append(f"    n{g};")
            lines.append("  }")
    for a, b in hasse_edges(s):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
