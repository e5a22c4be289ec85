"""Time the numba kernels against their numpy (or plain Python) counterparts.

    python benchmarks/bench_kernels.py [--repeat N]

Compilation happens before timing. Each row reports the best of N runs.
"""

import argparse
import timeit

import numpy as np

from qlogic import _jit, kernels
from qlogic.lattice import Lattice


def ring_contexts(n_blocks, size):
    """Context matrix of ``n_blocks`` blocks of ``size`` atoms, each sharing one atom with the next."""
    step = size - 1
    n_atoms = n_blocks * step
    ctx = np.zeros((n_blocks, n_atoms), dtype=np.uint8)
    for k in range(n_blocks):
        for j in range(size):
            ctx[k, (k * step + j) % n_atoms] = 1
    return ctx


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _jit.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    kernels.warmup()

    rows = []
    for k in (4, 5, 6):
        lat = Lattice.boolean([f"x{i}" for i in range(k)])
        n = len(lat)
        leq = np.ascontiguousarray(lat.leq, dtype=np.bool_)
        meet = np.ascontiguousarray(lat.meet, dtype=np.int64)
        join = np.ascontiguousarray(lat.join, dtype=np.int64)
        comp = np.ascontiguousarray(lat.comp, dtype=np.int64)
        rows.append((f"distributive n={n}",
                     best(lambda: kernels.distributive_violation_loop(meet, join), args.repeat),
                     best(lambda: kernels.distributive_violation_numpy(meet, join), args.repeat)))
        rows.append((f"orthomodular n={n}",
                     best(lambda: kernels.orthomodular_violation_loop(leq, meet, join, comp), args.repeat),
                     best(lambda: kernels.orthomodular_violation_numpy(leq, meet, join, comp), args.repeat)))
        rows.append((f"bounds tables n={n}",
                     best(lambda: kernels.bounds_tables_loop(leq), args.repeat),
                     best(lambda: kernels.bounds_tables_numpy(leq), args.repeat)))
        rows.append((f"cover relation n={n}",
                     best(lambda: kernels.cover_relation_loop(leq), args.repeat),
                     best(lambda: kernels.cover_relation_numpy(leq), args.repeat)))
        rows.append((f"transitive closure n={n}",
                     best(lambda: kernels.transitive_closure_loop(leq), args.repeat),
                     best(lambda: kernels.transitive_closure_numpy(leq), args.repeat)))

    for blocks, size in ((3, 2), (4, 4), (6, 4), (8, 4)):
        ctx = ring_contexts(blocks, size)
        label = f"exact-one search {ctx.shape[1]} atoms"
        rows.append((label,
                     best(lambda: kernels.exact_one_backtrack_loop(ctx), args.repeat),
                     best(lambda: kernels.exact_one_backtrack_python(ctx), args.repeat)))
        if ctx.shape[1] <= 20:
            rows.append((label + " (brute force)", None,
                         best(lambda: kernels.exact_one_bruteforce(ctx), args.repeat)))

    print(f"{'kernel':<42}{'numba [ms]':>12}{'fallback [ms]':>15}{'speedup':>10}")
    for name, fast, slow in rows:
        fast_s = f"{fast * 1e3:12.3f}" if fast is not None else f"{'-':>12}"
        ratio = f"{slow / fast:9.1f}x" if fast else f"{'-':>10}"
        print(f"{name:<42}{fast_s}{slow * 1e3:15.3f}{ratio}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
