"""Finite-dimensional quantum logic: subspace lattices, Boolean-block pasting and probability states."""

from .catalog import axis_contexts, axis_projector, invariant_lattice, qubit_msigma, qubit_partial, qubit_sublattice
from .errors import *  # noqa: F401,F403
from .lattice import (
    BOTTOM,
    TOP,
    Context,
    Lattice,
    PartialLogic,
    PastedLogic,
    check_orthomodular,
    closure_lattice,
    is_boolean,
    make_context,
    meet_defined,
    partial_logic,
    paste_blocks,
)
from .linalg import (
    EPS,
    Ket,
    Projector,
    Subspace,
    is_invariant,
    join_subspace,
    meet_subspace,
    ortho_complement,
    projector_from_ket,
    span,
    subspace_leq,
)
from .states import (
    DensityOperator,
    EventClass,
    ProbabilityState,
    born_overlap,
    born_trace,
    classification_consistent_states,
    classify_event,
    classify_event_pair,
    enumerate_dispersion_free,
    gleason_additivity_check,
    indifference_state,
    validate_state,
)

__version__ = "0.1.0"
