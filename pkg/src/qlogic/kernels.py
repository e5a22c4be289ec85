"""Integer-table kernels behind the lattice checks and the 0/1 state search.

Every lattice is handed over as dense integer tables indexed by element id:
``leq`` (bool, n x n), ``meet`` and ``join`` (int64, n x n, -1 = undefined) and
``comp`` (int64, n, -1 = no complement in the table).

Each kernel exists twice: a loop form compiled with numba and a numpy form.
The module-level dispatchers use ``BACKEND``; both forms stay importable
(``*_loop`` / ``*_numpy``) so tests and the benchmark can compare them.
"""

import numpy as np

from ._jit import USE_NUMBA, jit_pair

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = [
    "BACKEND",
    "distributive_violation",
    "orthomodular_violation",
    "cover_relation",
    "transitive_closure",
    "bounds_tables",
    "exact_one_solutions",
    "exact_one_bruteforce",
    "warmup",
]


# -- distributivity ----------------------------------------------------------

def _distributive_violation(meet, join):
    n = meet.shape[0]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if meet[a, join[b, c]] != join[meet[a, b], meet[a, c]]:
                    return a, b, c
    return -1, -1, -1


def distributive_violation_numpy(meet, join):
    # lhs[a, b, c] = a ^ (b v c);  rhs[a, b, c] = (a ^ b) v (a ^ c)
    lhs = meet[:, join] if meet.shape[0] else np.zeros((0, 0, 0), dtype=np.int64)
    rhs = join[meet[:, :, None], meet[:, None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return -1, -1, -1
    a, b, c = bad[0]
    return int(a), int(b), int(c)


# -- orthomodularity ---------------------------------------------------------

def _orthomodular_violation(leq, meet, join, comp):
    n = meet.shape[0]
    for a in range(n):
        for b in range(n):
            if leq[a, b] and join[a, meet[b, comp[a]]] != b:
                return a, b
    return -1, -1


def orthomodular_violation_numpy(leq, meet, join, comp):
    n = meet.shape[0]
    ids = np.arange(n)
    # m[b, a] = b ^ a'
    m = meet[:, comp]
    lhs = join[ids[:, None], m.T]
    bad = np.argwhere(leq & (lhs != ids[None, :]))
    if len(bad) == 0:
        return -1, -1
    a, b = bad[0]
    return int(a), int(b)


# -- order helpers -----------------------------------------------------------

def _cover_relation(leq):
    n = leq.shape[0]
    out = np.zeros((n, n), dtype=np.bool_)
    for a in range(n):
        for b in range(n):
            if a == b or not leq[a, b]:
                continue
            covered = True
            for c in range(n):
                if c != a and c != b and leq[a, c] and leq[c, b]:
                    covered = False
                    break
            out[a, b] = covered
    return out


def cover_relation_numpy(leq):
    n = leq.shape[0]
    lt = leq & ~np.eye(n, dtype=bool)
    li = lt.astype(np.int64)
    return lt & ((li @ li) == 0)


def _transitive_closure(rel):
    n = rel.shape[0]
    out = rel.copy()
    for i in range(n):
        out[i, i] = True
    for k in range(n):
        for i in range(n):
            if out[i, k]:
                for j in range(n):
                    if out[k, j]:
                        out[i, j] = True
    return out


def transitive_closure_numpy(rel):
    out = rel | np.eye(rel.shape[0], dtype=bool)
    while True:
        nxt = (out.astype(np.int64) @ out.astype(np.int64)) > 0
        if np.array_equal(nxt, out):
            return out
        out = nxt


def _bounds_tables(leq):
    n = leq.shape[0]
    meet = np.full((n, n), -1, dtype=np.int64)
    join = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for g in range(n):
                if leq[g, a] and leq[g, b]:
                    ok = True
                    for c in range(n):
                        if leq[c, a] and leq[c, b] and not leq[c, g]:
                            ok = False
                            break
                    if ok:
                        meet[a, b] = g
                        break
            for g in range(n):
                if leq[a, g] and leq[b, g]:
                    ok = True
                    for c in range(n):
                        if leq[a, c] and leq[b, c] and not leq[g, c]:
                            ok = False
                            break
                    if ok:
                        join[a, b] = g
                        break
    return meet, join


def bounds_tables_numpy(leq):
    n = leq.shape[0]
    meet = np.full((n, n), -1, dtype=np.int64)
    join = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        # lower[b, c]: c is a common lower bound of a and b
        lower = leq[:, a][None, :] & leq.T
        upper = leq[a, :][None, :] & leq
        # glb[b, g]: g is a lower bound dominating every other lower bound
        glb = lower & ~(lower.astype(np.int64) @ (~leq).astype(np.int64)).astype(bool)
        lub = upper & ~(upper.astype(np.int64) @ (~leq.T).astype(np.int64)).astype(bool)
        has = glb.any(axis=1)
        meet[a, has] = glb[has].argmax(axis=1)
        has = lub.any(axis=1)
        join[a, has] = lub[has].argmax(axis=1)
    return meet, join


# -- exactly-one search ------------------------------------------------------

def _exact_one_backtrack(ctx):
    """All 0/1 rows x with ``ctx @ x == 1``, in lexicographic order.

    Atoms are assigned in id order, 0 before 1; a branch is cut as soon as a
    context holds two true atoms or has no atom left that could be true.
    Returns the solution rows and the number of search nodes visited.
    """
    n_ctx, n_atoms = ctx.shape
    vals = np.full(n_atoms, -1, dtype=np.int64)
    n_true = np.zeros(n_ctx, dtype=np.int64)
    n_free = np.zeros(n_ctx, dtype=np.int64)
    for c in range(n_ctx):
        for i in range(n_atoms):
            if ctx[c, i]:
                n_free[c] += 1
    nxt = np.zeros(n_atoms + 1, dtype=np.int64)
    cap = 16
    sols = np.zeros((cap, n_atoms), dtype=np.uint8)
    count = 0
    nodes = 0
    pos = 0
    for c in range(n_ctx):
        if n_free[c] == 0:
            # a context with no atoms can never hold exactly one true atom
            return sols[:0], nodes
    while True:
        if pos == n_atoms:
            if count == cap:
                cap *= 2
                grown = np.zeros((cap, n_atoms), dtype=np.uint8)
                grown[:count] = sols[:count]
                sols = grown
            for i in range(n_atoms):
                sols[count, i] = vals[i]
            count += 1
            pos -= 1
            if pos < 0:
                break
            for c in range(n_ctx):
                if ctx[c, pos]:
                    n_free[c] += 1
                    if vals[pos] == 1:
                        n_true[c] -= 1
            vals[pos] = -1
            continue
        v = nxt[pos]
        if v > 1:
            nxt[pos] = 0
            pos -= 1
            if pos < 0:
                break
            for c in range(n_ctx):
                if ctx[c, pos]:
                    n_free[c] += 1
                    if vals[pos] == 1:
                        n_true[c] -= 1
            vals[pos] = -1
            continue
        nxt[pos] = v + 1
        nodes += 1
        feasible = True
        for c in range(n_ctx):
            if ctx[c, pos]:
                if v == 1 and n_true[c] > 0:
                    feasible = False
                    break
                if v == 0 and n_free[c] == 1 and n_true[c] == 0:
                    feasible = False
                    break
        if not feasible:
            continue
        vals[pos] = v
        for c in range(n_ctx):
            if ctx[c, pos]:
                n_free[c] -= 1
                if v == 1:
                    n_true[c] += 1
        pos += 1
    return sols[:count], nodes


def exact_one_bruteforce(ctx, chunk=1 << 16):
    """Vectorised filter over all ``2**n_atoms`` rows; same output order."""
    ctx = np.asarray(ctx, dtype=np.int64)
    n_atoms = ctx.shape[1]
    if n_atoms > 30:
        raise ValueError("brute force limited to 30 atoms")
    shifts = np.arange(n_atoms - 1, -1, -1, dtype=np.int64)
    found = []
    total = 1 << n_atoms
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        rows = ((masks[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
        ok = np.all(rows.astype(np.int64) @ ctx.T == 1, axis=1)
        found.append(rows[ok])
    return np.concatenate(found) if found else np.zeros((0, n_atoms), dtype=np.uint8)


(distributive_violation_loop, _dist_plain) = jit_pair(_distributive_violation)
(orthomodular_violation_loop, _om_plain) = jit_pair(_orthomodular_violation)
(cover_relation_loop, _cover_plain) = jit_pair(_cover_relation)
(transitive_closure_loop, _tc_plain) = jit_pair(_transitive_closure)
(bounds_tables_loop, _bounds_plain) = jit_pair(_bounds_tables)
(exact_one_backtrack_loop, exact_one_backtrack_python) = jit_pair(_exact_one_backtrack)


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _b(a):
    return np.ascontiguousarray(a, dtype=np.bool_)


def distributive_violation(meet, join):
    """First triple (a, b, c) with a^(b v c) != (a^b) v (a^c), else (-1, -1, -1)."""
    meet, join = _i64(meet), _i64(join)
    if USE_NUMBA:
        a, b, c = distributive_violation_loop(meet, join)
        return int(a), int(b), int(c)
    return distributive_violation_numpy(meet, join)


def orthomodular_violation(leq, meet, join, comp):
    """First pair a <= b with a v (b ^ a') != b, else (-1, -1). ``comp`` must be total."""
    args = _b(leq), _i64(meet), _i64(join), _i64(comp)
    if USE_NUMBA:
        a, b = orthomodular_violation_loop(*args)
        return int(a), int(b)
    return orthomodular_violation_numpy(*args)


def cover_relation(leq):
    if USE_NUMBA:
        return cover_relation_loop(_b(leq))
    return cover_relation_numpy(_b(leq))


def transitive_closure(rel):
    """Reflexive-transitive closure of a boolean relation."""
    if USE_NUMBA:
        return transitive_closure_loop(_b(rel))
    return transitive_closure_numpy(_b(rel))


def bounds_tables(leq):
    """Greatest-lower-bound and least-upper-bound tables of a partial order (-1 = none)."""
    if USE_NUMBA:
        return bounds_tables_loop(_b(leq))
    return bounds_tables_numpy(_b(leq))


def exact_one_solutions(ctx):
    """Backtracking search for 0/1 atom rows with exactly one true atom per context row."""
    ctx = np.ascontiguousarray(ctx, dtype=np.uint8)
    if USE_NUMBA:
        sols, nodes = exact_one_backtrack_loop(ctx)
    else:
        sols, nodes = exact_one_backtrack_python(ctx)
    return sols, int(nodes)


def warmup():
    """Trigger compilation (or cache load) of every numba kernel."""
    if not USE_NUMBA:
        return
    leq = np.eye(2, dtype=np.bool_)
    leq[0, 1] = True
    meet = np.array([[0, 0], [0, 1]], dtype=np.int64)
    join = np.array([[0, 1], [1, 1]], dtype=np.int64)
    comp = np.array([1, 0], dtype=np.int64)
    distributive_violation(meet, join)
    orthomodular_violation(leq, meet, join, comp)
    cover_relation(leq)
    transitive_closure(leq)
    bounds_tables(leq)
    exact_one_solutions(np.ones((1, 2), dtype=np.uint8))
