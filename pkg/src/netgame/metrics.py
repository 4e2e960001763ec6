"""Structural measurements on connection graphs, in exact arithmetic.

Heavy lifting (common-neighbour counts, components, girth) is delegated to
:mod:`netgame._kernels`; everything reported is an integer or a Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .errors import InvalidInputError, PreconditionError
from .model import ConnectionGraph, EventConfiguration, connection_graph


@dataclass
class _Arrays:
    indptr: np.ndarray
    indices: np.ndarray
    eu: np.ndarray
    ev: np.ndarray


def _arrays(G: ConnectionGraph) -> _Arrays:
    indptr, indices, eu, ev = _kernels.to_csr(G.n, G.edges)
    return _Arrays(indptr, indices, eu, ev)


def edge_common_counts(G: ConnectionGraph) -> dict:
    """``(u, v) -> |N_u ∩ N_v|`` for every edge."""
    arr = _arrays(G)
    counts = _kernels.edge_common_neighbors(arr.indptr, arr.indices, arr.eu, arr.ev)
    return {(int(u), int(v)): int(c) for u, v, c in zip(arr.eu, arr.ev, counts)}


def triangle_counts(G: ConnectionGraph) -> list:
    """Number of triangles through each vertex."""
    arr = _arrays(G)
    counts = _kernels.edge_common_neighbors(arr.indptr, arr.indices, arr.eu, arr.ev)
    tri = np.zeros(G.n, dtype=np.int64)
    np.add.at(tri, arr.eu, counts)
    np.add.at(tri, arr.ev, counts)
    return [int(t) // 2 for t in tri]


def _clustering_from(degrees, tri) -> Fraction:
    terms = [Fraction(t, comb(d, 2)) for d, t in zip(degrees, tri) if d >= 2]
    if not terms:
        return Fraction(0)
    return sum(terms, Fraction(0)) / len(terms)


def clustering_coefficient(G: ConnectionGraph) -> Fraction:
    """Mean of ``triangles(v) / C(deg v, 2)`` over vertices of degree >= 2.

    Returns 0 when no vertex has degree 2 or more.
    """
    return _clustering_from(G.degrees(), triangle_counts(G))


def local_bridges(G: ConnectionGraph) -> list:
    """Edges whose endpoints have no common neighbour, sorted."""
    return sorted(e for e, c in edge_common_counts(G).items() if c == 0)


def strong_subgraph_check(G: ConnectionGraph, vertices: Iterable[int]) -> bool:
    """True iff every common neighbour of two members is itself a member."""
    H = set(vertices)
    for v in H:
        if not 0 <= v < G.n:
            raise InvalidInputError(f"unknown vertex {v}")
    members = sorted(H)
    for i, u in enumerate(members):
        nu = G.neighbors(u)
        for v in members[i + 1:]:
            if not (nu & G.neighbors(v)) <= H:
                return False
    return True


def connected_components(G: ConnectionGraph) -> tuple:
    arr = _arrays(G)
    k, labels = _kernels.components(G.n, arr.eu, arr.ev)
    return int(k), [int(x) for x in labels]


def is_connected(G: ConnectionGraph) -> bool:
    return G.n <= 1 or connected_components(G)[0] == 1


def girth(G: ConnectionGraph) -> Optional[int]:
    """Length of the shortest cycle, or ``None`` for a forest."""
    arr = _arrays(G)
    g = _kernels.girth(G.n, arr.indptr, arr.indices)
    return None if g < 0 else g


def average_degree(G: ConnectionGraph) -> Fraction:
    return Fraction(2 * len(G.edges), G.n) if G.n else Fraction(0)


def average_degree_over_w(G: ConnectionGraph) -> Fraction:
    ds = [d for d in G.degrees() if d >= 2]
    return Fraction(sum(ds), len(ds)) if ds else Fraction(0)


@dataclass
class GraphStats:
    n: int
    edge_count: int
    degree_sequence: list
    average_degree: Fraction
    average_degree_over_w: Fraction
    clustering: Fraction
    triangle_counts: list
    local_bridges: list
    girth: Optional[int]
    connected: bool

    def to_json(self) -> dict:
        def q(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        return {
            "n": self.n,
            "edge_count": self.edge_count,
            "degree_sequence": self.degree_sequence,
            "average_degree": q(self.average_degree),
            "average_degree_over_W": q(self.average_degree_over_w),
            "clustering": q(self.clustering),
            "triangle_counts": self.triangle_counts,
            "local_bridges": [list(e) for e in self.local_bridges],
            "girth": self.girth if self.girth is not None else "inf",
            "connected": self.connected,
        }


def graph_stats(G: ConnectionGraph) -> GraphStats:
    common = edge_common_counts(G)
    degrees = G.degrees()
    tri = [0] * G.n
    for (u, v), c in common.items():
        tri[u] += c
        tri[v] += c
    tri = [t // 2 for t in tri]
    return GraphStats(
        n=G.n,
        edge_count=len(G.edges),
        degree_sequence=degrees,
        average_degree=average_degree(G),
        average_degree_over_w=average_degree_over_w(G),
        clustering=_clustering_from(degrees, tri),
        triangle_counts=tri,
        local_bridges=sorted(e for e, c in common.items() if c == 0),
        girth=girth(G),
        connected=is_connected(G),
    )


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    lhs: Fraction
    rhs: Fraction
    sharper_holds: Optional[bool] = None
    sharper_rhs: Optional[Fraction] = None
    degenerate: bool = False


def verify_clustering_bound(G: ConnectionGraph) -> BoundCheck:
    """Check ``clustering >= 1 / (2 * average degree)`` exactly.

    When the minimum degree is at least 2 the sharper ``>= 1 / average degree``
    is also evaluated.  A graph with no degree->=2 vertex is reported as
    degenerate (the clustering average is empty).
    """
    if not is_connected(G):
        raise PreconditionError("clustering bound requires a connected graph")
    lhs = clustering_coefficient(G)
    dbar = average_degree(G)
    if dbar == 0 or not any(d >= 2 for d in G.degrees()):
        return BoundCheck(holds=True, lhs=lhs, rhs=Fraction(0), degenerate=True)
    rhs = 1 / (2 * dbar)
    sharper_holds = sharper_rhs = None
    if min(G.degrees()) >= 2:
        sharper_rhs = 1 / dbar
        sharper_holds = lhs >= sharper_rhs
    return BoundCheck(lhs >= rhs, lhs, rhs, sharper_holds, sharper_rhs)


@dataclass(frozen=True)
class DegreeBoundCheck:
    holds: bool
    average_degree: Fraction
    bound: Fraction


def max_invitees(config: EventConfiguration) -> int:
    return max((len(r) for r in config.own_rates.values()), default=0)


def verify_k_supportable_degree_bound(config: EventConfiguration, K: int) -> DegreeBoundCheck:
    """Check ``average degree <= gamma * K * (K + 1)`` for a configuration inviting at most K each."""
    for v, rates in config.own_rates.items():
        if len(rates) > K:
            raise PreconditionError(f"agent {v} invites {len(rates)} > K = {K} agents")
    G = connection_graph(config)
    dbar = average_degree(G)
    bound = config.params.gamma * K * (K + 1)
    return DegreeBoundCheck(dbar <= bound, dbar, bound)
