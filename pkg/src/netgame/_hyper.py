"""Short-cycle detection in uniform hypergraphs (numba kernel + Python fallback).

A hyperedge is flagged when it meets another hyperedge in two or more vertices
or lies on a Berge cycle of length at most 4.  Both cases reduce to: starting
from one vertex of the hyperedge and never using the hyperedge itself, some
other vertex of it is reachable within three hyperedge steps.
"""

from __future__ import annotations

import numpy as np

from . import _kernels

MAX_STEPS = 3


def incidence(n: int, edges: np.ndarray) -> tuple:
    m, k = edges.shape
    flat = edges.ravel()
    owner = np.repeat(np.arange(m, dtype=np.int64), k)
    order = np.argsort(flat, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, flat + 1, 1)
    np.cumsum(ptr, out=ptr)
    return ptr, owner[order]


if _kernels.numba is not None:
    import numba

    @numba.njit(cache=True)
    def _flags_chunk(n, edges, ptr, inc, max_steps, flags, start, step):
        m, k = edges.shape
        stamp = np.zeros(n, dtype=np.int64)
        target = np.zeros(n, dtype=np.int64)
        front = np.empty(n, dtype=np.int64)
        nxt = np.empty(n, dtype=np.int64)
        tick = 0
        for i in range(start, m, step):
            for a in range(k):
                tick += 1
                for b in range(k):
                    target[edges[i, b]] = tick
                u = edges[i, a]
                stamp[u] = tick
                front[0] = u
                fl = 1
                found = False
                for _ in range(max_steps):
                    nl = 0
                    for f in range(fl):
                        x = front[f]
                        for p in range(ptr[x], ptr[x + 1]):
                            j = inc[p]
                            if j == i:
                                continue
                            for c in range(k):
                                y = edges[j, c]
                                if stamp[y] != tick:
                                    stamp[y] = tick
                                    if target[y] == tick:
                                        found = True
                                    nxt[nl] = y
                                    nl += 1
                    if found or nl == 0:
                        break
                    for f in range(nl):
                        front[f] = nxt[f]
                    fl = nl
                if found:
                    flags[i] = True
                    break

    @numba.njit(cache=True, parallel=True)
    def _flags_nb(n, edges, ptr, inc, max_steps, chunks):
        flags = np.zeros(edges.shape[0], dtype=np.bool_)
        for c in numba.prange(chunks):
            _flags_chunk(n, edges, ptr, inc, max_steps, flags, c, chunks)
        return flags


def _flags_py(n, edges, ptr, inc, max_steps):
    m, k = edges.shape
    rows = edges.tolist()
    ptr = ptr.tolist()
    inc = inc.tolist()
    flags = np.zeros(m, dtype=bool)
    for i, e in enumerate(rows):
        others = set(e)
        for u in e:
            seen = {u}
            front = [u]
            found = False
            for _ in range(max_steps):
                new = []
                for x in front:
                    for j in inc[ptr[x]:ptr[x + 1]]:
                        if j == i:
                            continue
                        for y in rows[j]:
                            if y not in seen:
                                seen.add(y)
                                if y in others:
                                    found = True
                                new.append(y)
                if found or not new:
                    break
                front = new
            if found:
                flags[i] = True
                break
    return flags


def short_cycle_flags(n: int, edges: np.ndarray, max_steps: int = MAX_STEPS) -> np.ndarray:
    edges = np.ascontiguousarray(edges, dtype=np.int64)
    ptr, inc = incidence(n, edges)
    if _kernels.USE_NUMBA:
        chunks = max(1, min(_kernels.apply_thread_cap(), edges.shape[0]))
        return _flags_nb(n, edges, ptr, inc, max_steps, chunks)
    return _flags_py(n, edges, ptr, inc, max_steps)
