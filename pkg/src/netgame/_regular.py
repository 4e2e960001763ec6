"""Random k-regular graphs without cycles of length 3 or 4.

Stubs are paired uniformly at random and the result is repaired by edge
swaps: a swap ``(a, b), (c, d) -> (a, c), (b, d)`` is kept when it does not
increase the number of defective edges (loops, parallel edges, edges on a
triangle or a 4-cycle) in the neighbourhood it touches.
"""

from __future__ import annotations

import random
from collections import Counter


def _defective(adj, a, b) -> bool:
    if a == b or adj[a][b] > 1:
        return True
    nb = {y for y in adj[b] if y != a and y != b}
    for x in adj[a]:
        if x == b or x == a:
            continue
        if x in nb:
            return True
        for y in adj[x]:
            if y != x and y in nb:
                return True
    return False


def _ball1(adj, seeds) -> set:
    out = set(seeds)
    for x in seeds:
        out.update(adj[x])
    return out


def _connected(adj, m) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == m


def _attempt(k, m, rng, max_swaps):
    stubs = [v for v in range(m) for _ in range(k)]
    rng.shuffle(stubs)
    edges = [[stubs[2 * i], stubs[2 * i + 1]] for i in range(len(stubs) // 2)]
    adj = [Counter() for _ in range(m)]
    inc = [set() for _ in range(m)]
    for i, (a, b) in enumerate(edges):
        adj[a][b] += 1
        adj[b][a] += 1
        inc[a].add(i)
        inc[b].add(i)
    bad = {i for i, (a, b) in enumerate(edges) if _defective(adj, a, b)}
    swaps = 0

    def move(i, a, b, x, y):
        # replace edge i = (a, b) by (x, y)
        for p, q in ((a, b), (b, a)):
            adj[p][q] -= 1
            if not adj[p][q]:
                del adj[p][q]
        inc[a].discard(i)
        inc[b].discard(i)
        edges[i] = [x, y]
        adj[x][y] += 1
        adj[y][x] += 1
        inc[x].add(i)
        inc[y].add(i)

    def local_edges(vs):
        out = set()
        for v in vs:
            out |= inc[v]
        return out

    while bad and swaps < max_swaps:
        swaps += 1
        i = rng.choice(sorted(bad))
        j = rng.randrange(len(edges))
        if j == i:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        if a == c or b == d:
            continue
        # a short cycle through a changed edge only uses edges touching N[a, b, c, d]
        region = _ball1(adj, (a, b, c, d))
        move(i, a, b, a, c)
        move(j, c, d, b, d)
        region |= _ball1(adj, (a, b, c, d))
        touched = local_edges(region)
        old_bad = len(touched & bad)
        flags = {e: _defective(adj, *edges[e]) for e in touched}
        new_bad = sum(flags.values())
        if new_bad <= old_bad:
            for e, f in flags.items():
                if f:
                    bad.add(e)
                else:
                    bad.discard(e)
        else:
            move(j, b, d, c, d)
            move(i, a, c, a, b)
    if bad or not _connected(adj, m):
        return None, swaps
    return sorted((min(a, b), max(a, b)) for a, b in edges), swaps


def random_regular_girth5(k: int, m: int, seed: int, max_restarts: int = 40):
    """Edges of a connected k-regular girth->=5 graph, or ``(None, log)``."""
    rng = random.Random(seed)
    if k == 2:
        order = list(range(m))
        rng.shuffle(order)
        return sorted((min(order[i], order[i - 1]), max(order[i], order[i - 1])) for i in range(m)), []
    log = []
    max_swaps = 20 * m * k + 2000
    for attempt in range(max_restarts):
        edges, swaps = _attempt(k, m, rng, max_swaps)
        log.append(swaps)
        if edges is not None:
            return edges, log
    return None, log
