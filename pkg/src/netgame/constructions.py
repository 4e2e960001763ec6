"""Builders for explicit stable event configurations.

Every builder works the same way: decide, for each host, the rate at which it
must meet each of its invitees, then realise those targets with the nested
(cost-optimal) event chain.  Outputs are exact and deterministic given their
arguments (and seed, for the random families).
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Mapping, Optional

import numpy as np

from . import _hyper
from .errors import ConstructionError, InvalidInputError, RegimeError
from .model import B_EPS, EventConfiguration, Parameters
from .stability import check_stability_deviation, realize_nested

HALF = Fraction(1, 2)


def from_targets(params: Parameters, targets: Mapping[int, Mapping[int, Fraction]]) -> EventConfiguration:
    """Configuration in which each host realises its invitation targets by nesting."""
    strategies = {}
    for v, t in targets.items():
        if t:
            strategies[v] = realize_nested(t, v)
    return EventConfiguration(params, strategies)


def _raise_if_unstable(config: EventConfiguration, what: str) -> None:
    report = check_stability_deviation(config)
    if not report.stable:
        first = report.violations[0]
        raise RegimeError(
            f"{what} is not stable at gamma={config.params.gamma}: agent {first.agent}: {first.detail}"
        )


# complete graph, cliques, joined cliques

def build_complete_single_host(params: Parameters, n: Optional[int] = None) -> EventConfiguration:
    """Agent 0 hosts everyone at rate 1; requires gamma > 1 and b < c(gamma - 1)."""
    n = params.n if n is None else n
    if n < 2:
        raise InvalidInputError("need at least two agents")
    params = params.with_n(n)
    if params.gamma <= 1:
        raise RegimeError(f"complete graph needs gamma > 1, got {params.gamma}")
    if params.b is not B_EPS and not params.b < params.c * (params.gamma - 1):
        raise RegimeError(f"need b < c(gamma - 1) = {params.c * (params.gamma - 1)}, got b = {params.b}")
    return from_targets(params, {0: {u: Fraction(1) for u in range(1, n)}})


def build_clique(params: Parameters, size: int) -> EventConfiguration:
    """Every member of a ``size``-clique hosts the others at rate ``1/size``."""
    if size < 2:
        raise InvalidInputError("clique size must be at least 2")
    if params.gamma <= Fraction(1, size):
        raise RegimeError(f"a {size}-clique needs gamma > 1/{size}, got {params.gamma}")
    params = params.with_n(size)
    r = Fraction(1, size)
    return from_targets(params, {v: {u: r for u in range(size) if u != v} for v in range(size)})


def hkp_layout(k: int, p: int) -> tuple:
    """Vertex ids ``(A, C, B)`` of two ``k``-cliques sharing the ``p`` vertices of ``C``."""
    A = list(range(k - p))
    C = list(range(k - p, k))
    B = list(range(k, 2 * k - p))
    return A, C, B


def build_hkp(params: Parameters, k: int, p: int) -> EventConfiguration:
    """Two ``k``-cliques sharing ``p`` vertices.

    ``p = 1``: below ``gamma = 1 - 1/k`` everyone invites all neighbours at
    ``1/k``; from there up the shared vertex stays idle and the rest host at
    ``1/(k-1)``.  ``p > 1``: the ``p`` shared vertices stay idle and each side
    hosts its clique at ``1/(k-p)``.
    """
    g = params.gamma
    if p < 1 or k <= p:
        raise InvalidInputError(f"need k > p >= 1, got k={k}, p={p}")
    if p == 1:
        if k <= 2:
            raise RegimeError("H_{k,1} needs k > 2")
        if g <= Fraction(1, k):
            raise RegimeError(f"H_{{{k},1}} needs gamma > 1/{k}, got {g}")
    else:
        if k <= p + 1:
            raise RegimeError(f"H_{{{k},{p}}} needs k > p + 1")
        if g <= Fraction(1, k - p):
            raise RegimeError(f"H_{{{k},{p}}} needs gamma > 1/{k - p}, got {g}")
    if g > 1:
        raise RegimeError(f"joined cliques are not stable for gamma > 1 (complete graph dominates), got {g}")
    A, C, B = hkp_layout(k, p)
    params = params.with_n(2 * k - p)
    side_a, side_b = A + C, B + C
    targets: dict = {}
    if p == 1 and g < 1 - Fraction(1, k):
        r = Fraction(1, k)
        for side in (side_a, side_b):
            for v in side:
                targets.setdefault(v, {}).update({u: r for u in side if u != v})
    else:
        hosts_r = Fraction(1, k - p)
        for side, own in ((side_a, A), (side_b, B)):
            for v in own:
                targets[v] = {u: hosts_r for u in side if u != v}
    return from_targets(params, targets)


# Rates of the four-agent configuration supporting two triangles sharing an
# edge.  Agents: x=0 and w=1 share the middle edge, u=2 and v=3 are the tips.
# Derived by scripts/derive_h32.py; valid for 1/2 < gamma < 1.
H32_X, H32_W, H32_U, H32_V = 0, 1, 2, 3


def h32_rates(gamma: Fraction) -> dict:
    g = Fraction(gamma)
    q = (3 - 2 * g) / 8
    return {
        H32_X: {H32_W: q, H32_U: Fraction(1, 4) + g / 2, H32_V: (1 - g) / 2},
        H32_W: {H32_X: q, H32_U: (1 - g) / 2, H32_V: HALF},
        H32_U: {H32_X: Fraction(1, 4), H32_W: (1 + 6 * g) / 8},
        H32_V: {H32_X: (1 + 6 * g) / 8, H32_W: g / 2},
    }


def build_h32(params: Parameters) -> EventConfiguration:
    g = params.gamma
    if g <= HALF:
        raise RegimeError(f"H_{{3,2}} is supportable only for gamma > 1/2, got {g}")
    if g >= 1:
        raise RegimeError(f"the derived H_{{3,2}} rates need gamma < 1, got {g}")
    return from_targets(params.with_n(4), h32_rates(g))


# community graphs

BRIDGE = "bridge"
SHARED = "shared-vertex"
OVERLAP = "overlap"


@dataclass(frozen=True)
class Join:
    mode: str
    size: int = 1

    def __post_init__(self):
        if self.mode not in (BRIDGE, SHARED, OVERLAP):
            raise InvalidInputError(f"unknown join mode {self.mode!r}")
        if self.mode == SHARED and self.size != 1:
            object.__setattr__(self, "size", 1)
        if self.mode == OVERLAP and self.size < 2:
            raise InvalidInputError("overlap joins share at least 2 vertices; use shared-vertex for 1")

    @property
    def shares(self) -> int:
        return 0 if self.mode == BRIDGE else self.size


@dataclass(frozen=True)
class CommunitySkeleton:
    """Skeleton graph whose nodes become cliques and whose edges become joins."""

    clique_sizes: tuple
    joins: Mapping[tuple, Join] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "clique_sizes", tuple(self.clique_sizes))
        clean = {}
        for (i, j), jn in self.joins.items():
            if i == j:
                raise InvalidInputError("skeleton self-loop")
            if not (0 <= i < len(self.clique_sizes) and 0 <= j < len(self.clique_sizes)):
                raise InvalidInputError(f"join ({i}, {j}) references unknown skeleton node")
            if isinstance(jn, str):
                jn = Join(jn)
            clean[(min(i, j), max(i, j))] = jn
        object.__setattr__(self, "joins", dict(sorted(clean.items())))

    def degree(self, i: int) -> int:
        return sum(1 for e in self.joins if i in e)


@dataclass
class CommunityLayout:
    members: list  # per clique, agent ids
    bridges: list  # (agent, agent) pairs
    overlap_vertices: set
    n: int


def expand_skeleton(skeleton: CommunitySkeleton) -> CommunityLayout:
    """Assign agent ids to cliques, shared vertices and bridge endpoints."""
    sizes = skeleton.clique_sizes
    members: list = [[] for _ in sizes]
    shared_any: set = set()
    overlap_vertices: set = set()
    nxt = 0
    for i, s in enumerate(sizes):
        if s < 1:
            raise InvalidInputError(f"clique {i} has size {s}")
        for (h, j), jn in skeleton.joins.items():
            if j != i or jn.shares == 0:
                continue
            avail = [x for x in members[h] if x not in shared_any]
            if len(avail) < jn.shares:
                raise ConstructionError(f"clique {h} has too few private vertices to share {jn.shares} with clique {i}")
            take = avail[: jn.shares]
            members[i].extend(take)
            shared_any.update(take)
            if jn.mode == OVERLAP:
                overlap_vertices.update(take)
        if len(members[i]) > s:
            raise ConstructionError(f"clique {i} of size {s} cannot host {len(members[i])} shared vertices")
        while len(members[i]) < s:
            members[i].append(nxt)
            nxt += 1
    bridged: set = set()
    bridges = []
    for (i, j), jn in skeleton.joins.items():
        if jn.mode != BRIDGE:
            continue
        ends = []
        for c in (i, j):
            if len(members[c]) == 2:
                raise ConstructionError(
                    f"clique {c} is a single edge at rate 1/2 already; a bridge ({i}, {j}) would give "
                    "one of its vertices a second local bridge"
                )
            free = [x for x in members[c] if x not in shared_any and x not in bridged]
            if not free:
                raise ConstructionError(
                    f"clique {c} has no vertex left for bridge ({i}, {j}); "
                    "each node may carry at most one local bridge"
                )
            ends.append(free[0])
            bridged.add(free[0])
        bridges.append(tuple(ends))
    return CommunityLayout(members, bridges, overlap_vertices, nxt)


def _idle_members(layout: CommunityLayout, g: Fraction) -> set:
    """Vertices that must not host their cliques.

    A host realises all its targets with one nested chain, so two agents from
    different groups (cliques or a bridge) of the same host meet through it at
    the smaller of the two group rates.  If gamma exceeds one minus the
    second-largest group rate, such pairs would rather connect; the vertex
    then stays idle in its cliques and lets the other members carry them (as
    the joint of H_{k,1} does at high gamma).  Idling raises the rates of the
    affected cliques, so this is iterated to a fixed point.
    """
    groups = defaultdict(list)
    for i, mem in enumerate(layout.members):
        if len(mem) >= 2:
            for x in mem:
                groups[x].append(i)
    bridged = {x for e in layout.bridges for x in e}
    idle = set(layout.overlap_vertices)
    while True:
        rate = {}
        for i, mem in enumerate(layout.members):
            hosts = sum(1 for x in mem if x not in idle)
            rate[i] = Fraction(1, hosts) if hosts else Fraction(0)
        changed = False
        for x, cl in groups.items():
            if x in idle:
                continue
            rates = sorted([rate[i] for i in cl] + ([HALF] if x in bridged else []), reverse=True)
            if len(rates) > 1 and g > 1 - rates[1]:
                idle.add(x)
                changed = True
        if not changed:
            return idle


def build_community_graph(params: Parameters, skeleton: CommunitySkeleton) -> EventConfiguration:
    """Cliques joined by shared vertices, overlaps or mutual-1/2 bridges."""
    layout = expand_skeleton(skeleton)
    g = params.gamma
    idle = _idle_members(layout, g)
    hosts_of = []
    for i, mem in enumerate(layout.members):
        hosts = [x for x in mem if x not in idle]
        if len(mem) >= 2:
            if not hosts:
                raise ConstructionError(f"clique {i} has no hosting member left")
            if g <= Fraction(1, len(hosts)):
                raise RegimeError(f"clique {i} has {len(hosts)} hosts and needs gamma > 1/{len(hosts)}, got {g}")
        hosts_of.append(hosts)
    if layout.bridges and g <= HALF:
        raise RegimeError(f"bridges need gamma > 1/2, got {g}")
    targets: dict = defaultdict(dict)
    for mem, hosts in zip(layout.members, hosts_of):
        if len(mem) < 2:
            continue
        r = Fraction(1, len(hosts))
        for v in hosts:
            t = targets[v]
            for u in mem:
                if u != v:
                    t[u] = max(t.get(u, Fraction(0)), r)
    for a, b in layout.bridges:
        targets[a][b] = HALF
        targets[b][a] = HALF
    config = from_targets(params.with_n(layout.n), targets)
    _raise_if_unstable(config, "community graph")
    return config


# random hypergraph construction

@dataclass(frozen=True)
class HypergraphSpec:
    n: int
    k: int
    d: int
    seed: int

    def __post_init__(self):
        if self.k < 2 or self.d < 1 or self.n < self.k:
            raise InvalidInputError("need n >= k >= 2 and d >= 1")
        if (self.d * self.n) % self.k:
            raise InvalidInputError(f"d*n = {self.d * self.n} is not divisible by k = {self.k}")

    @property
    def m(self) -> int:
        return self.d * self.n // self.k


@dataclass
class HypergraphNetwork:
    config: EventConfiguration
    hyperedges: list
    bad: list  # indices into hyperedges
    spec: HypergraphSpec

    @property
    def bad_count(self) -> int:
        return len(self.bad)

    @property
    def kept(self) -> list:
        bad = set(self.bad)
        return [e for i, e in enumerate(self.hyperedges) if i not in bad]


def sample_regular_hypergraph(spec: HypergraphSpec) -> list:
    """Uniform-ish ``d``-regular ``k``-uniform hypergraph by stub shuffling.

    Each node contributes ``d`` stubs; shuffled stubs are cut into groups of
    ``k`` and groups with a repeated node are rejected and reshuffled.  When a
    round makes no progress one accepted hyperedge is dissolved back into stubs.
    """
    rng = random.Random(spec.seed)
    k = spec.k
    stubs = [v for v in range(spec.n) for _ in range(spec.d)]
    edges: list = []
    stalls = 0
    while stubs:
        rng.shuffle(stubs)
        left = []
        for i in range(0, len(stubs), k):
            chunk = stubs[i:i + k]
            if len(set(chunk)) == k:
                edges.append(tuple(sorted(chunk)))
            else:
                left.extend(chunk)
        if len(left) == len(stubs):
            stalls += 1
            if stalls > 100 * spec.m:
                raise ConstructionError("hypergraph sampler failed to place all stubs")
            left.extend(edges.pop(rng.randrange(len(edges))))
        stubs = left
    edges.sort()
    return edges


def bad_hyperedges(n: int, edges: list) -> list:
    """Hyperedges meeting another in >= 2 vertices or lying on a cycle of length <= 4."""
    if not edges:
        return []
    k = len(edges[0])
    e_arr = np.asarray(edges, dtype=np.int64).reshape(-1, k)
    flags = _hyper.short_cycle_flags(n, e_arr)
    return [int(i) for i in np.flatnonzero(flags)]


def build_hypergraph_network(params: Parameters, spec: HypergraphSpec) -> HypergraphNetwork:
    """Random regular hypergraph, bad hyperedges removed, survivors become ``1/k`` cliques."""
    g, k = params.gamma, spec.k
    if not Fraction(1, k) < g < 1 - Fraction(1, k):
        raise RegimeError(f"need 1/{k} < gamma < 1 - 1/{k}, got {g}")
    edges = sample_regular_hypergraph(spec)
    bad = bad_hyperedges(spec.n, edges)
    bad_set = set(bad)
    r = Fraction(1, k)
    targets: dict = defaultdict(dict)
    for i, e in enumerate(edges):
        if i in bad_set:
            continue
        for v in e:
            t = targets[v]
            for u in e:
                if u != v:
                    t[u] = r
    config = from_targets(params.with_n(spec.n), targets)
    return HypergraphNetwork(config, edges, bad, spec)


# dense K-supportable construction

@dataclass
class DenseNetwork:
    config: EventConfiguration
    groups: list
    extras: list  # Z_i per group
    K: int
    group_size: int


def dense_group_size(gamma: Fraction) -> int:
    return floor(1 / gamma) + 1


def build_dense_k_supportable(params: Parameters, n: int, K: int, seed: int) -> DenseNetwork:
    """Groups of ``k* = floor(1/gamma) + 1`` hosts, each inviting its group plus a random extra set.

    Hosts invite at rate ``1/k*`` so every meeting rate is 0 or 1.  Extras are
    filtered greedily so that no pair of agents is joined by two groups.
    """
    g = params.gamma
    if not 0 < g < 1:
        raise RegimeError(f"dense construction needs 0 < gamma < 1, got {g}")
    ks = dense_group_size(g)
    if K <= ks:
        raise RegimeError(f"need K > floor(1/gamma) + 1 = {ks}, got K = {K}")
    if n % ks:
        raise InvalidInputError(f"n = {n} must be divisible by k* = {ks}")
    extra_size = K + 1 - ks  # keeps |I_v| <= K even when 1/gamma is an integer
    rng = random.Random(seed)
    m = n // ks
    groups = [list(range(i * ks, (i + 1) * ks)) for i in range(m)]
    used: set = set()
    for grp in groups:
        for i, a in enumerate(grp):
            for b in grp[i + 1:]:
                used.add((a, b))
    xs = [rng.sample(range(n), extra_size) for _ in range(m)]
    extras = []
    for grp, X in zip(groups, xs):
        members = list(grp)
        z = []
        for x in X:
            if x in members:
                continue
            if any((min(x, y), max(x, y)) in used for y in members):
                continue
            members.append(x)
            z.append(x)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                used.add((min(a, b), max(a, b)))
        extras.append(z)
    r = Fraction(1, ks)
    targets = {}
    for grp, z in zip(groups, extras):
        clique = grp + z
        for v in grp:
            targets[v] = {u: r for u in clique if u != v}
    config = from_targets(params.with_n(n), targets)
    return DenseNetwork(config, groups, extras, K, ks)
