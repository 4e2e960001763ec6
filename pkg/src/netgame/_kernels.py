"""Integer graph kernels: numba-compiled by default, numpy/scipy fallback.

Set ``NETGAME_NO_NUMBA=1`` to force the fallback path (also used automatically
when numba is missing).  Both paths take a CSR adjacency with sorted neighbour
lists and return identical integer arrays.  ``NETGAME_THREADS`` caps the
number of threads the parallel numba kernels may use.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

if numba is not None and "NUMBA_THREADING_LAYER" not in os.environ:
    # the portable layer; avoids probing for a TBB that may be too old
    numba.config.THREADING_LAYER = "workqueue"

USE_NUMBA = numba is not None and os.environ.get("NETGAME_NO_NUMBA", "") not in ("1", "true", "yes")


def thread_count() -> int:
    """Thread budget: ``NETGAME_THREADS`` if set to a positive integer, else all cores."""
    raw = os.environ.get("NETGAME_THREADS", "").strip()
    cores = os.cpu_count() or 1
    if raw.isdigit() and int(raw) > 0:
        return min(int(raw), cores)
    return cores


def apply_thread_cap() -> int:
    """Push the thread budget into numba; returns the number of chunks to use."""
    t = thread_count()
    if USE_NUMBA:
        t = min(t, numba.config.NUMBA_NUM_THREADS)
        numba.set_num_threads(t)
    return t

INF_GIRTH = -1


def to_csr(n: int, edges) -> tuple:
    """``(indptr, indices, eu, ev)`` with ``eu < ev`` and sorted neighbour lists."""
    e = np.asarray(sorted(edges), dtype=np.int64).reshape(-1, 2)
    eu, ev = e[:, 0].copy(), e[:, 1].copy()
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst.astype(np.int64), eu, ev


# numba path

if numba is not None:

    @numba.njit(cache=True)
    def _common_nb(indptr, indices, eu, ev):
        out = np.zeros(eu.shape[0], dtype=np.int64)
        for k in range(eu.shape[0]):
            a0, a1 = indptr[eu[k]], indptr[eu[k] + 1]
            b0, b1 = indptr[ev[k]], indptr[ev[k] + 1]
            c = 0
            while a0 < a1 and b0 < b1:
                x, y = indices[a0], indices[b0]
                if x == y:
                    c += 1
                    a0 += 1
                    b0 += 1
                elif x < y:
                    a0 += 1
                else:
                    b0 += 1
            out[k] = c
        return out

    @numba.njit(cache=True)
    def _components_nb(n, eu, ev):
        parent = np.arange(n)
        for k in range(eu.shape[0]):
            a, b = eu[k], ev[k]
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
        labels = np.empty(n, dtype=np.int64)
        for v in range(n):
            r = v
            while parent[r] != r:
                r = parent[r]
            labels[v] = r
        # relabel to 0..k-1 in order of first appearance
        remap = -np.ones(n, dtype=np.int64)
        nxt = 0
        for v in range(n):
            r = labels[v]
            if remap[r] < 0:
                remap[r] = nxt
                nxt += 1
            labels[v] = remap[r]
        return nxt, labels

    @numba.njit(cache=True)
    def _girth_from(n, indptr, indices, start, step, best):
        dist = -np.ones(n, dtype=np.int64)
        parent = -np.ones(n, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for s in range(start, n, step):
            for i in range(n):
                dist[i] = -1
                parent[i] = -1
            dist[s] = 0
            head, tail = 0, 1
            queue[0] = s
            while head < tail:
                x = queue[head]
                head += 1
                if 2 * dist[x] + 1 >= best:
                    break
                for p in range(indptr[x], indptr[x + 1]):
                    y = indices[p]
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        queue[tail] = y
                        tail += 1
                    elif parent[x] != y:
                        c = dist[x] + dist[y] + 1
                        if c < best:
                            best = c
        return best

    @numba.njit(cache=True, parallel=True)
    def _girth_nb(n, indptr, indices, chunks):
        found = np.full(chunks, n + 1, dtype=np.int64)
        for c in numba.prange(chunks):
            found[c] = _girth_from(n, indptr, indices, c, chunks, n + 1)
        best = found.min()
        return best if best <= n else -1


# fallback path

def _common_np(indptr, indices, eu, ev):
    n = indptr.shape[0] - 1
    if eu.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    data = np.ones(indices.shape[0], dtype=np.int64)
    a = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    rows_u = a[eu]
    rows_v = a[ev]
    return np.asarray(rows_u.multiply(rows_v).sum(axis=1), dtype=np.int64).ravel()


def _components_np(n, eu, ev):
    a = sp.coo_matrix((np.ones(eu.shape[0]), (eu, ev)), shape=(n, n)).tocsr()
    k, labels = _cc(a, directed=False)
    # canonical labels: order of first appearance
    _, first = np.unique(labels, return_index=True)
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(k)
    return k, rank[labels].astype(np.int64)


def _girth_np(n, indptr, indices):
    best = n + 1
    for s in range(n):
        dist = np.full(n, -1, dtype=np.int64)
        parent = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        frontier = np.array([s], dtype=np.int64)
        depth = 0
        while frontier.size and 2 * depth + 1 < best:
            starts, ends = indptr[frontier], indptr[frontier + 1]
            counts = ends - starts
            src = np.repeat(frontier, counts)
            dst = indices[np.concatenate([np.arange(a, b) for a, b in zip(starts, ends)])] if src.size else src
            back = parent[src] == dst
            src, dst = src[~back], dst[~back]
            seen = dist[dst] >= 0
            if seen.any():
                c = int((dist[src[seen]] + dist[dst[seen]] + 1).min())
                best = min(best, c)
            new_src, new_dst = src[~seen], dst[~seen]
            # a vertex reached twice in the same layer closes an even cycle
            uniq, idx, cnt = np.unique(new_dst, return_index=True, return_counts=True)
            if (cnt > 1).any():
                best = min(best, 2 * (depth + 1))
            dist[uniq] = depth + 1
            parent[uniq] = new_src[idx]
            frontier = uniq
            depth += 1
    return best if best <= n else -1


def edge_common_neighbors(indptr, indices, eu, ev):
    if USE_NUMBA and eu.shape[0]:
        return _common_nb(indptr, indices, eu, ev)
    return _common_np(indptr, indices, eu, ev)


def components(n, eu, ev):
    if USE_NUMBA:
        return _components_nb(n, eu, ev)
    return _components_np(n, eu, ev)


def girth(n, indptr, indices):
    if USE_NUMBA:
        if n == 0:
            return -1
        return int(_girth_nb(n, indptr, indices, max(1, min(apply_thread_cap(), n))))
    return int(_girth_np(n, indptr, indices))


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
