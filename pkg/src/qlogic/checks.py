"""Invariant battery behind ``qlogic verify``.

Each check is a dict ``{"name", "invariant", "passed", "detail"}``. Checks
with ``"kind": "finding"`` report a fact about the structure (such as the
existence of dispersion-free states) and never fail.
"""

import numpy as np

from .errors import QLogicError
from .lattice import (
    BOTTOM,
    TOP,
    Lattice,
    PartialLogic,
    check_orthomodular,
    closure_lattice,
    is_boolean,
    make_context,
    meet_defined,
)
from .linalg import EPS
from .states import (
    DensityOperator,
    EventClass,
    born_overlap,
    born_trace,
    classification_consistent_states,
    classify_event,
    dispersion_free_search,
    gleason_additivity_check,
    indifference_state,
    state_violations,
)


def _check(name, invariant, passed, detail=""):
    return {"name": name, "invariant": invariant, "passed": bool(passed), "detail": detail}


def _finding(name, invariant, detail):
    return {"name": name, "invariant": invariant, "passed": True, "kind": "finding", "detail": detail}


def lattice_law_failures(lat):
    """Names of the lattice laws the tables of ``lat`` break."""
    n = len(lat)
    m, j, leq = lat.meet, lat.join, lat.leq
    bad = []
    if not (np.array_equal(m, m.T) and np.array_equal(j, j.T)):
        bad.append("commutativity")
    ids = np.arange(n)
    if not (np.array_equal(m[ids, ids], ids) and np.array_equal(j[ids, ids], ids)):
        bad.append("idempotence")
    if not (np.array_equal(m[ids[:, None], j], np.broadcast_to(ids[:, None], (n, n)))
            and np.array_equal(j[ids[:, None], m], np.broadcast_to(ids[:, None], (n, n)))):
        bad.append("absorption")
    if not np.array_equal(leq, m == ids[:, None]):
        bad.append("order-consistency")
    return bad


def _projector_checks(s):
    worst_h = max(np.linalg.norm(x.matrix - x.matrix.conj().T) for x in s.subspaces)
    worst_i = max(np.linalg.norm(x.matrix @ x.matrix - x.matrix) for x in s.subspaces)
    ranks_ok = s.subspaces[BOTTOM].rank == 0 and s.subspaces[TOP].rank == s.dim
    return [
        _check("projector-laws", "every element projector is Hermitian and idempotent",
               worst_h < EPS and worst_i < EPS, f"max |P-P^+| = {worst_h:.2e}, max |P^2-P| = {worst_i:.2e}"),
        _check("trivial-elements", "element 0 is the zero subspace and element 1 the full space", ranks_ok),
    ]


def _lattice_checks(lat, tag):
    out = []
    bad = lattice_law_failures(lat)
    out.append(_check(f"lattice-laws[{tag}]", "meet/join commutative, idempotent, absorptive, consistent with order",
                      not bad, ", ".join(bad)))
    if lat.is_concrete and (lat.comp >= 0).all():
        comp = lat.comp
        n = len(lat)
        dm = all(comp[lat.meet[a, b]] == lat.join[comp[a], comp[b]] for a in range(n) for b in range(n))
        out.append(_check(f"de-morgan[{tag}]", "(a ^ b)' = a' v b'", dm))
    out.append(_check(f"orthomodular[{tag}]", "a <= b implies b = a v (b ^ a')", check_orthomodular(lat)))
    return out


def _block_checks(s):
    out = []
    for k, blk in enumerate(s.blocks):
        tag = blk.name or f"block{k}"
        out.append(_check(f"boolean-block[{tag}]", "each block is a Boolean algebra", is_boolean(blk)))
        out.extend(_lattice_checks(blk, tag))
        try:
            make_context([blk.subspaces[a].projector for a in blk.atoms()], id=tag)
            out.append(_check(f"context[{tag}]", "block atoms are orthogonal and sum to the identity", True))
        except QLogicError as exc:
            out.append(_check(f"context[{tag}]", "block atoms are orthogonal and sum to the identity", False, str(exc)))
    return out


def _prep_rho(s, prep):
    p = s.subspaces[prep]
    return DensityOperator(p.matrix / p.rank)


def _born_agreement(s, preps):
    """Indifference values against Tr(rho P) and |<phi|psi>|^2 for every atom."""
    rows, mismatches, extrapolated = [], [], False
    for prep in preps:
        state = indifference_state(s, prep)
        extrapolated |= state.metadata["extrapolated"]
        rho = _prep_rho(s, prep)
        for e in s.atoms():
            trace = born_trace(rho, s.subspaces[e])
            overlap = None
            if s.subspaces[prep].rank == 1 and s.subspaces[e].rank == 1:
                phi = s.subspaces[prep].basis()[:, 0]
                psi = s.subspaces[e].basis()[:, 0]
                overlap = born_overlap(phi, psi)
            val = state[e]
            ok = abs(float(val) - trace) < 1e-9 and (overlap is None or abs(overlap - trace) < 1e-9)
            rows.append({"preparation": prep, "atom": e, "indifference": str(val), "born_trace": trace,
                         "born_overlap": overlap})
            if not ok:
                mismatches.append((s.labels[prep], s.labels[e]))
    return rows, mismatches, extrapolated


def run_checks(s, rho=None):
    """Full invariant battery for a concrete structure; returns (checks, extras)."""
    checks = []
    extras = {}
    checks.extend(_projector_checks(s))

    if isinstance(s, Lattice):
        checks.extend(_lattice_checks(s, "structure"))
    else:
        checks.extend(_block_checks(s))
        if not isinstance(s, PartialLogic):
            checks.extend(_lattice_checks(s.as_lattice(), "pasted"))

    atoms = s.atoms()
    if not isinstance(s, PartialLogic):
        lat = s if isinstance(s, Lattice) else s.as_lattice()
        gens = [lat.subspaces[a] for a in atoms]
        closed = closure_lattice(gens) if gens else None
        checks.append(_check("closure", "the structure equals the meet/join closure of its atoms",
                             closed is not None and closed.same_elements(lat)))
        res = dispersion_free_search(s)
        bad = [st for st in res.states if state_violations(s, st, tol=0)]
        checks.append(_check("state-additivity", "every enumerated state satisfies the state axioms", not bad))
        checks.append(_finding("dispersion-free", "count of {0,1}-valued states",
                               f"dispersion-free states exist: {len(res.states)}"))
        extras["dispersion_free"] = res
    else:
        undefined = [(a, b) for a in range(len(s)) for b in range(len(s)) if not meet_defined(s, a, b)]
        cross = [(a, b) for a in range(len(s)) for b in range(len(s))
                 if a not in (BOTTOM, TOP) and b not in (BOTTOM, TOP) and not (s.membership[a] & s.membership[b])]
        checks.append(_check("meet-undefined-cross-block", "meet is undefined exactly for nontrivial cross-block pairs",
                             undefined == cross, f"{len(undefined)} undefined ordered pairs"))
        consistent = True
        for prep in atoms:
            for t in range(len(s)):
                if (classify_event(s, prep, t) is EventClass.INDETERMINATE) != (not meet_defined(s, prep, t)):
                    consistent = False
        checks.append(_check("indeterminate-iff-undefined", "an event is indeterminate iff its meet is undefined",
                             consistent))
        states, empty = [], True
        for prep in atoms:
            st = indifference_state(s, prep)
            states.append(st)
            has_foreign = any(classify_event(s, prep, a) is EventClass.INDETERMINATE for a in atoms)
            if has_foreign and classification_consistent_states(s, prep, grid=(0, 1)):
                empty = False
        bad = [st for st in states if state_violations(s, st, tol=0)]
        checks.append(_check("state-additivity", "every indifference state satisfies the state axioms", not bad))
        checks.append(_check("no-dispersion-free", "no classification-consistent {0,1} state exists for a preparation with indeterminate events",
                             empty))
        rows, mismatches, extrapolated = _born_agreement(s, atoms)
        detail = "all atoms agree" if not mismatches else f"mismatch at {mismatches[:5]}"
        if extrapolated:
            checks.append(_finding("indifference-equals-born", "indifference value equals Born probability", detail))
        else:
            checks.append(_check("indifference-equals-born", "indifference value equals Born probability",
                                 not mismatches, detail))
        extras["born_agreement"] = rows
        extras["indifference"] = states

    if rho is not None:
        rho = rho if isinstance(rho, DensityOperator) else DensityOperator(rho)
        column = [born_trace(rho, s.subspaces[a]) for a in atoms]
        extras["born_column"] = dict(zip(atoms, column))
        ok = True
        for ctx in s.contexts():
            c = make_context([s.subspaces[a].projector for a in ctx])
            ok &= gleason_additivity_check(rho, c)
        checks.append(_check("gleason-additivity", "Tr(rho P) sums to 1 over every context", ok))
    return checks, extras


__all__ = ["lattice_law_failures", "run_checks"]
