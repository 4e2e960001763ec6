from collections import deque
from fractions import Fraction as F
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgame import ConnectionGraph, InvalidInputError, PreconditionError, connection_graph
from netgame.constructions import build_clique, build_dense_k_supportable
from netgame.metrics import (
    average_degree,
    clustering_coefficient,
    connected_components,
    girth,
    graph_stats,
    is_connected,
    local_bridges,
    strong_subgraph_check,
    triangle_counts,
    verify_clustering_bound,
    verify_k_supportable_degree_bound,
)

from conftest import params


def G(n, edges):
    return ConnectionGraph.from_edges(n, edges)


def complete(vs):
    return list(combinations(vs, 2))


@st.composite
def graphs(draw, n_max=50):
    n = draw(st.integers(1, n_max))
    pairs = list(combinations(range(n), 2))
    if not pairs:
        return G(n, [])
    p = draw(st.floats(0.02, 0.6))
    seed = draw(st.integers(0, 2**31))
    import random

    rng = random.Random(seed)
    return G(n, [e for e in pairs if rng.random() < p])


def brute_triangles(g):
    adj = g.adjacency
    tri = [0] * g.n
    for a, b, c in combinations(range(g.n), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            tri[a] += 1
            tri[b] += 1
            tri[c] += 1
    return tri


def brute_clustering(g):
    tri = brute_triangles(g)
    vals = [F(t, comb(d, 2)) for t, d in zip(tri, g.degrees()) if d >= 2]
    return sum(vals, F(0)) / len(vals) if vals else F(0)


def brute_girth(g):
    best = None
    for s in range(g.n):
        dist, parent = {s: 0}, {s: -1}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in g.adjacency[x]:
                if y not in dist:
                    dist[y], parent[y] = dist[x] + 1, x
                    q.append(y)
                elif parent[x] != y:
                    c = dist[x] + dist[y] + 1
                    best = c if best is None else min(best, c)
    return best


def brute_components(g):
    seen, count = set(), 0
    for s in range(g.n):
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


class TestClustering:
    def test_triangle(self):
        assert clustering_coefficient(G(3, complete(range(3)))) == 1

    def test_path(self):
        assert clustering_coefficient(G(3, [(0, 1), (1, 2)])) == 0

    def test_no_qualifying_vertex(self):
        assert clustering_coefficient(G(2, [(0, 1)])) == 0

    @pytest.mark.parametrize("k,d", [(3, 2), (4, 3), (5, 2)])
    def test_windmill(self, k, d):
        # d copies of K_{k-1} glued at vertex 0
        edges, nxt = [], 1
        for _ in range(d):
            block = [0] + list(range(nxt, nxt + k - 2))
            edges += complete(block)
            nxt += k - 2
        g = G(nxt, edges)
        assert clustering_coefficient(g) == brute_clustering(g)
        centre = triangle_counts(g)[0]
        assert centre == d * comb(k - 2, 2)

    @settings(max_examples=80, deadline=None)
    @given(graphs())
    def test_matches_brute_force(self, g):
        assert triangle_counts(g) == brute_triangles(g)
        assert clustering_coefficient(g) == brute_clustering(g)
        assert 0 <= clustering_coefficient(g) <= 1


class TestLocalBridges:
    def test_single_edge(self):
        assert local_bridges(G(2, [(0, 1)])) == [(0, 1)]

    def test_triangle(self):
        assert local_bridges(G(3, complete(range(3)))) == []

    def test_two_cliques_and_a_link(self):
        g = G(8, complete(range(4)) + complete(range(4, 8)) + [(3, 4)])
        assert local_bridges(g) == [(3, 4)]


class TestStrongSubgraph:
    def test_component_clique(self):
        g = G(7, complete(range(4)) + [(4, 5), (5, 6)])
        assert strong_subgraph_check(g, range(4))

    def test_one_side_of_bowtie(self):
        g = G(5, complete([0, 1, 2]) + complete([2, 3, 4]))
        assert strong_subgraph_check(g, [0, 1, 2])

    def test_triangle_in_k5(self):
        assert not strong_subgraph_check(G(5, complete(range(5))), [0, 1, 2])

    def test_unknown_vertex(self):
        with pytest.raises(InvalidInputError):
            strong_subgraph_check(G(3, []), [0, 5])


class TestGirthAndComponents:
    def test_petersen(self):
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        assert girth(G(10, outer + inner + spokes)) == 5

    def test_forest(self):
        assert girth(G(4, [(0, 1), (1, 2)])) is None
        assert girth(G(0, [])) is None

    def test_even_cycle(self):
        assert girth(G(6, [(i, (i + 1) % 6) for i in range(6)])) == 6

    @settings(max_examples=80, deadline=None)
    @given(graphs(n_max=60))
    def test_girth_matches_bfs(self, g):
        assert girth(g) == brute_girth(g)

    @settings(max_examples=80, deadline=None)
    @given(graphs())
    def test_components_match(self, g):
        k, labels = connected_components(g)
        assert k == brute_components(g)
        for u, v in g.edges:
            assert labels[u] == labels[v]
        # labels are numbered in order of first appearance
        firsts = [labels.index(c) for c in range(k)]
        assert firsts == sorted(firsts)


class TestBounds:
    @pytest.mark.parametrize("ell", [2, 3, 6])
    def test_clique_holds(self, ell):
        g = connection_graph(build_clique(params(F(1, ell) + F(1, 50), ell), ell))
        r = verify_clustering_bound(g)
        assert r.holds
        if ell == 2:
            assert r.degenerate
        else:
            assert r.lhs == 1 and r.rhs == F(1, 2 * (ell - 1))
            assert r.sharper_holds

    def test_disconnected_rejected(self):
        with pytest.raises(PreconditionError):
            verify_clustering_bound(G(4, [(0, 1), (2, 3)]))

    def test_k_support_triangle(self):
        cfg = build_clique(params("2/5", 3), 3)
        r = verify_k_supportable_degree_bound(cfg, 2)
        assert r.holds and r.average_degree == 2 and r.bound == F(12, 5)

    def test_k_support_empty(self):
        from netgame import EventConfiguration

        r = verify_k_supportable_degree_bound(EventConfiguration(params("2/5", 3)), 1)
        assert r.holds and r.average_degree == 0

    def test_k_support_precondition(self):
        with pytest.raises(PreconditionError, match="agent 0"):
            verify_k_supportable_degree_bound(build_clique(params("2/5", 3), 3), 1)

    def test_dense_holds(self):
        net = build_dense_k_supportable(params("2/5", 600), 600, 6, seed=2)
        assert verify_k_supportable_degree_bound(net.config, 6).holds


def test_graph_stats_fields():
    g = G(5, complete([0, 1, 2]) + [(2, 3)])
    s = graph_stats(g)
    assert s.edge_count == 4 and s.average_degree == F(8, 5) == average_degree(g)
    assert s.average_degree_over_w == F(7, 3)
    assert s.local_bridges == [(2, 3)]
    assert s.girth == 3 and not s.connected and not is_connected(g)
    d = s.to_json()
    assert d["clustering"] == "7/9" and d["girth"] == 3
    assert graph_stats(G(3, [(0, 1)])).to_json()["girth"] == "inf"
