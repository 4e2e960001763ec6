"""Compare the numba kernels with the numpy/scipy fallback.

Runs every kernel on the same random inputs through both paths, checks the
outputs agree, and prints one timing line per kernel. The numba column
excludes compilation (one warm-up call first).

    python benchmarks/bench_kernels.py [--n 3000] [--deg 8] [--repeat 3]

NETGAME_THREADS caps the threads used by the parallel numba kernels.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from netgame import _hyper, _kernels
from netgame.constructions import HypergraphSpec, sample_regular_hypergraph


def random_graph(n: int, deg: int, seed: int) -> list:
    rng = random.Random(seed)
    edges = set()
    while len(edges) < n * deg // 2:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return sorted(edges)


def timed(fn, repeat: int) -> tuple:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3000)
    ap.add_argument("--deg", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    n = args.n
    indptr, indices, eu, ev = _kernels.to_csr(n, random_graph(n, args.deg, args.seed))
    chunks = _kernels.apply_thread_cap()
    hyper = np.asarray(sample_regular_hypergraph(HypergraphSpec(n=n, k=4, d=3, seed=args.seed)), dtype=np.int64)
    hptr, hinc = _hyper.incidence(n, hyper)
    # girth fallback is a Python-level BFS per source, so keep it smaller
    gn = min(n, 600)
    gptr, gind, _, _ = _kernels.to_csr(gn, random_graph(gn, 3, args.seed))

    cases = [
        ("common-neighbours",
         lambda: _kernels._common_nb(indptr, indices, eu, ev),
         lambda: _kernels._common_np(indptr, indices, eu, ev)),
        ("components",
         lambda: _kernels._components_nb(n, eu, ev),
         lambda: _kernels._components_np(n, eu, ev)),
        (f"girth (n={gn})",
         lambda: _kernels._girth_nb(gn, gptr, gind, max(1, min(chunks, gn))),
         lambda: _kernels._girth_np(gn, gptr, gind)),
        ("hypergraph-flags",
         lambda: _hyper._flags_nb(n, hyper, hptr, hinc, _hyper.MAX_STEPS, max(1, min(chunks, len(hyper)))),
         lambda: _hyper._flags_py(n, hyper, hptr, hinc, _hyper.MAX_STEPS)),
    ]

    print(f"n={n} edges={len(eu)} hyperedges={len(hyper)} threads={chunks}")
    print(f"{'kernel':<22}{'numba s':>10}{'fallback s':>12}{'speedup':>9}  agree")
    for name, fast, slow in cases:
        fast()  # compile
        tf, a = timed(fast, args.repeat)
        ts, b = timed(slow, args.repeat)
        if name.startswith("girth"):
            a, b = int(a), int(b)
            agree = a == b
        else:
            agree = same(a, b)
        print(f"{name:<22}{tf:>10.4f}{ts:>12.4f}{ts / max(tf, 1e-9):>8.1f}x  {'yes' if agree else 'NO'}")


if __name__ == "__main__":
    main()
