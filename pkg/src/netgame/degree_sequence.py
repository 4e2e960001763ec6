"""Realising a prescribed degree sequence as a connected stable network.

The pipeline runs for ``1/2 < gamma < 2/3`` with an infinitesimal fixed cost.
It works on a ledger of *residual* degrees and builds per-host target rates:

* ``step1``: pairs of degree-2 vertices form triangles with the current
  maximum-degree vertex.
* ``step2``: residual counts are rounded, then every vertex of residual degree
  at least ``K + 3`` absorbs cliques of low-degree hosts.
* ``step3``: each residual class ``k`` becomes either a chain of
  ``(k+1)``-cliques joined by mutual 1/2 bridges, or the clique expansion of a
  girth-5 ``k``-regular graph.
* ``step4``: the class structures are chained by mutual 1/2 bridges.
* ``degree1``: degree-1 vertices hang off bridge-free vertices at mutual 1/2.

Every deliberate change to a vertex's planned degree is recorded in the step
log, so ``achieved[v] == degrees[v] + sum of logged deltas for v`` holds on
every output.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._regular import random_regular_girth5
from .constructions import from_targets
from .errors import (
    AssumptionError,
    ConstructionError,
    FeasibilityError,
    InvalidInputError,
    PreconditionError,
    RegimeError,
)
from .model import B_EPS, ConnectionGraph, EventConfiguration, Parameters, connection_graph

HALF = Fraction(1, 2)
GAMMA_LO = Fraction(1, 2)
GAMMA_HI = Fraction(2, 3)


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple

    def __init__(self, degrees: Sequence[int]):
        ds = tuple(degrees)
        n = len(ds)
        if n < 2:
            raise InvalidInputError("a degree sequence needs at least two vertices")
        for i, d in enumerate(ds):
            if not isinstance(d, int) or isinstance(d, bool):
                raise InvalidInputError(f"degree {i} is not an integer: {d!r}")
            if not 1 <= d <= n - 1:
                raise InvalidInputError(f"degree {i} = {d} outside [1, {n - 1}]")
        object.__setattr__(self, "degrees", ds)

    @property
    def n(self) -> int:
        return len(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    def histogram(self) -> dict:
        h = defaultdict(int)
        for d in self.degrees:
            h[d] += 1
        return dict(sorted(h.items()))


def _as_sequence(D) -> DegreeSequence:
    return D if isinstance(D, DegreeSequence) else DegreeSequence(D)


def _check_gamma(gamma: Fraction) -> None:
    if not GAMMA_LO < gamma < GAMMA_HI:
        raise RegimeError(f"degree-sequence realisation needs 1/2 < gamma < 2/3, got {gamma}")


# assumptions

def assumption1_sides(degrees, K: int) -> tuple:
    lhs = sum(1 for d in degrees if 2 <= d <= K)
    rhs = sum(d for d in degrees if d > K)
    return lhs, rhs


def assumption2_sides(degrees) -> tuple:
    return sum(1 for d in degrees if d == 2), sum(d - 3 for d in degrees if d >= 6)


def assumption3_sides(degrees) -> tuple:
    # compared as 3 * lhs <= rhs to stay in integers
    return sum(1 for d in degrees if d == 1), sum(1 for d in degrees if d >= 4)


def smallest_K(degrees) -> int:
    """Smallest K with ``|{2 <= d <= K}| >= sum of degrees above K``."""
    for K in range(1, max(degrees) + 1):
        lhs, rhs = assumption1_sides(degrees, K)
        if lhs >= rhs:
            return K
    return max(degrees)  # pragma: no cover - K = max d always satisfies it


@dataclass(frozen=True)
class Validation:
    K: int
    diagnostics: dict


def validate_sequence(D, gamma) -> Validation:
    """Find the smallest admissible K and check the degree-2 and degree-1 budgets.

    Raises :class:`AssumptionError` carrying the failing assumption number.
    """
    D = _as_sequence(D)
    gamma = Fraction(gamma)
    _check_gamma(gamma)
    ds = D.degrees
    K = smallest_K(ds)
    l1, r1 = assumption1_sides(ds, K)
    l2, r2 = assumption2_sides(ds)
    l3, r3 = assumption3_sides(ds)
    diag = {
        "K": K,
        "assumption1": {"lhs": l1, "rhs": r1, "holds": l1 >= r1},
        "assumption2": {"lhs": l2, "rhs": r2, "holds": l2 <= r2},
        "assumption3": {"lhs": l3, "rhs": f"{r3}/3", "holds": 3 * l3 <= r3},
    }
    if l2 > r2:
        raise AssumptionError(2, f"{l2} degree-2 vertices but only {r2} spare degree above 3")
    if 3 * l3 > r3:
        raise AssumptionError(3, f"{l3} degree-1 vertices exceed a third of the {r3} vertices of degree >= 4")
    return Validation(K, diag)


# power-law sequences

def _powerlaw_counts(c: float, n: int, alpha: float) -> dict:
    counts = {}
    for k in range(3, n):
        x = math.floor(c * n * k ** (-alpha))
        if x <= 0:
            break
        counts[k] = x
    spare = sum((k - 3) * x for k, x in counts.items() if k >= 6)
    high = sum(x for k, x in counts.items() if k >= 4)
    counts[2] = min(math.floor(c * n * 2 ** (-alpha)), spare)
    counts[1] = min(math.floor(c * n), high // 3)
    return counts


def powerlaw_sequence(alpha, n: int) -> DegreeSequence:
    """Degree sequence with ``floor(c n k^-alpha)`` vertices of each degree ``k >= 3``.

    The degree-2 and degree-1 counts follow the same law but are capped so that
    the degree-2 and degree-1 assumptions hold.  ``c`` is the largest constant
    (to double precision) keeping the total at most ``n``; any remaining
    vertices receive degree 3.  Degrees are listed in non-increasing order.
    """
    alpha = float(Fraction(alpha))
    if alpha <= 2:
        raise InvalidInputError("power-law exponent must exceed 2")
    if n < 20:
        raise InvalidInputError("power-law sequences need n >= 20")

    def total(c):
        return sum(_powerlaw_counts(c, n, alpha).values())

    lo, hi = 0.0, 1.0
    while total(hi) <= n:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if total(mid) <= n:
            lo = mid
        else:
            hi = mid
    counts = _powerlaw_counts(lo, n, alpha)
    counts[3] = counts.get(3, 0) + n - sum(counts.values())
    degrees = []
    for k in sorted(counts, reverse=True):
        degrees += [k] * counts[k]
    return DegreeSequence(degrees)


# girth-5 regular graphs

def min_girth5_size(k: int) -> int:
    """Vertex count from which the generator reliably finds girth-5 k-regular graphs."""
    if k == 2:
        return 5
    if k <= 5:
        return 2 * (k * k + 1)
    return k * k * k // 2


@dataclass(frozen=True)
class RegularGirthGraph:
    k: int
    m: int
    edges: tuple

    def graph(self) -> ConnectionGraph:
        return ConnectionGraph.from_edges(self.m, self.edges)


def gen_regular_girth5(k: int, m: int, seed: int, max_restarts: int = 40) -> RegularGirthGraph:
    """Connected k-regular simple graph on m vertices with no cycle shorter than 5."""
    if k < 2:
        raise InvalidInputError("k must be at least 2")
    if (k * m) % 2:
        raise InvalidInputError(f"k * m must be even, got k={k}, m={m}")
    if m < k * k + 1:
        raise FeasibilityError(f"no girth-5 {k}-regular graph has fewer than {k * k + 1} vertices (m={m})")
    edges, log = random_regular_girth5(k, m, seed, max_restarts)
    if edges is None:
        raise FeasibilityError(
            f"no girth-5 {k}-regular graph on {m} vertices after {len(log)} restarts "
            f"({sum(log)} swap repairs attempted)"
        )
    return RegularGirthGraph(k, m, tuple(edges))


# realisation

@dataclass
class StepEntry:
    step: str
    vertex: Optional[int]
    delta: int
    detail: str

    def to_json(self) -> dict:
        return {"step": self.step, "vertex": self.vertex, "delta": self.delta, "detail": self.detail}


@dataclass
class RealizationReport:
    config: EventConfiguration
    target: DegreeSequence
    achieved: tuple
    l1_shift: int
    K_used: int
    n_k: dict
    step_log: list
    budget: dict
    cases: dict = field(default_factory=dict)

    def shifts_by_step(self) -> dict:
        out = defaultdict(int)
        for e in self.step_log:
            if e.vertex is not None:
                out[e.step] += abs(e.delta)
        return dict(out)

    def logged_shift(self) -> int:
        return sum(self.shifts_by_step().values())

    def planned(self) -> list:
        """Target degrees adjusted by every logged delta."""
        out = list(self.target.degrees)
        for e in self.step_log:
            if e.vertex is not None:
                out[e.vertex] += e.delta
        return out

    def shifted_vertices(self) -> list:
        return sorted({e.vertex for e in self.step_log if e.vertex is not None and e.delta})

    def within_budget(self) -> bool:
        used = self.shifts_by_step()
        return self.l1_shift <= self.logged_shift() and all(used.get(s, 0) <= b for s, b in self.budget.items())

    def to_json(self) -> dict:
        return {
            "n": self.target.n,
            "K": self.K_used,
            "n_k": {str(k): v for k, v in sorted(self.n_k.items())},
            "target": list(self.target.degrees),
            "achieved": list(self.achieved),
            "l1_shift": self.l1_shift,
            "logged_shift": self.logged_shift(),
            "shift_by_step": dict(sorted(self.shifts_by_step().items())),
            "budget": dict(sorted(self.budget.items())),
            "cases": {str(k): v for k, v in sorted(self.cases.items())},
            "step_log": [e.to_json() for e in self.step_log],
        }


@dataclass
class _ClassPlan:
    k: int
    case: int
    groups: list  # (members, rate) cliques, every member hosts its group
    bridges: list  # mutual-1/2 pairs inside the structure
    breakable: list  # Case 2: bridges whose removal keeps the structure connected
    free: list  # vertices with no bridge, eligible for ports or pendants
    ports: Optional[tuple] = None


class _Builder:
    def __init__(self, D: DegreeSequence, params: Parameters, K: int, seed: int):
        self.D = D
        self.params = params
        self.n = D.n
        self.K = K
        self.rng = random.Random(seed)
        rank = list(range(self.n))
        self.rng.shuffle(rank)
        self.rank = {v: i for i, v in enumerate(rank)}
        self.res = list(D.degrees)
        self.log: list = []
        self.targets: dict = defaultdict(dict)
        self.mutual = [0] * self.n
        self.budget: dict = defaultdict(int)
        self.cases: dict = {}

    # bookkeeping

    def shift(self, step: str, v: int, delta: int, detail: str) -> None:
        self.res[v] += delta
        self.log.append(StepEntry(step, v, delta, detail))

    def info(self, step: str, detail: str) -> None:
        self.log.append(StepEntry(step, None, 0, detail))

    def fail(self, detail: str):
        err = ConstructionError(detail)
        err.step_log = [e.to_json() for e in self.log]
        raise err

    def host(self, h: int, guests, rate: Fraction) -> None:
        t = self.targets[h]
        for g in guests:
            if g == h or g in t:
                self.fail(f"vertex {h} would invite {g} twice")
            t[g] = rate

    def clique(self, members, rate: Fraction) -> None:
        for h in members:
            self.host(h, [g for g in members if g != h], rate)

    def bridge(self, u: int, v: int, step: str) -> None:
        if self.mutual[u] or self.mutual[v]:
            self.fail(f"{step}: bridge ({u}, {v}) would give a vertex a second mutual 1/2 partner")
        self.mutual[u] += 1
        self.mutual[v] += 1
        self.host(u, [v], HALF)
        self.host(v, [u], HALF)

    def ordered(self, vs):
        return sorted(vs, key=self.rank.__getitem__)

    def assumption1(self, step: str, pool) -> None:
        lhs = sum(1 for v in pool if 2 <= self.res[v] <= self.K)
        rhs = sum(self.res[v] for v in pool if self.res[v] > self.K)
        self.info(step, f"assumption (1) re-verified: lhs={lhs} rhs={rhs} holds={lhs >= rhs}")

    # step 1

    def step1(self) -> tuple:
        deg2 = self.ordered(v for v in range(self.n) if self.D[v] == 2)
        heap = [(-self.res[v], v) for v in range(self.n) if self.D[v] >= 3]
        heapq.heapify(heap)
        tips = set()
        i = 0
        while len(deg2) - i >= 2:
            while heap and -heap[0][0] != self.res[heap[0][1]]:
                heapq.heappop(heap)
            if not heap or self.res[heap[0][1]] < 5:
                break
            w = heap[0][1]
            u, v = deg2[i], deg2[i + 1]
            i += 2
            self.host(u, [v, w], HALF)
            self.host(v, [u, w], HALF)
            self.mutual[u] += 1
            self.mutual[v] += 1
            tips.update((u, v))
            self.res[w] -= 2
            heapq.heappush(heap, (-self.res[w], w))
        for v in deg2[i:]:
            self.shift("step1", v, 1, "unpaired degree-2 vertex promoted to degree 3")
        self.budget["step1"] = 1
        pendants = self.ordered(v for v in range(self.n) if self.D[v] == 1)
        pool = [v for v in range(self.n) if v not in tips and self.D[v] >= 2]
        return pool, pendants

    # step 2

    def step2(self, pool, pendants) -> list:
        K = self.K
        self.assumption1("step2", pool)
        classes = {k: [] for k in range(3, K + 1)}
        for v in self.ordered(pool):
            if 3 <= self.res[v] <= K:
                classes[self.res[v]].append(v)
        rounded = 0
        for k in range(K, 3, -1):
            surplus = len(classes[k]) % k
            for _ in range(surplus):
                v = classes[k].pop()
                self.shift("step2", v, -1, f"rounding: class {k} count to a multiple of {k}")
                classes[k - 1].append(v)
                rounded += 1
        self.info("step2", f"rounding moved {rounded} vertices; class 3 keeps remainder {len(classes[3]) % 3}")
        self.assumption1("step2", pool)

        used = set()
        capped = 0
        high = [(-self.res[v], v) for v in pool if self.res[v] >= K + 3]
        heapq.heapify(high)
        while high:
            _, v = heapq.heappop(high)
            choice = None
            for k in range(K, 2, -1):
                if k >= 4 and len(pendants) >= k - 1 and len(classes[k]) >= k - 1:
                    choice = (k, True)
                    break
                if len(classes[k]) >= k:
                    choice = (k, False)
                    break
            if choice is None:
                delta = K + 2 - self.res[v]
                self.shift("step2", v, delta, "no low-degree class left to absorb this vertex; capped at K+2")
                capped += -delta
                continue
            k, variant = choice
            size = k - 1 if variant else k
            hosts = [classes[k].pop() for _ in range(size)]
            rate = Fraction(1, size)
            for h in hosts:
                self.host(h, [g for g in hosts if g != h] + [v], rate)
            used.update(hosts)
            if variant:
                for h in hosts:
                    p = pendants.pop(0)
                    self.bridge(h, p, "step2")
                    used.add(p)
            self.res[v] -= size
            if self.res[v] >= K + 3:
                heapq.heappush(high, (-self.res[v], v))
        self.budget["step2"] = K * K + capped
        rest = [v for v in pool if v not in used]
        if any(self.res[v] > K + 2 for v in rest):  # pragma: no cover - loop invariant
            self.fail("step2 left a residual degree above K+2")
        return rest

    # step 3

    def normalize(self, classes: dict) -> None:
        """Merge classes too small to form a block of three."""
        top = self.K + 2
        for _ in range(3):
            changed = False
            for k in range(top, 3, -1):
                members = classes.get(k, [])
                if 0 < len(members) < 3:
                    for v in members:
                        self.shift("normalize", v, -1, f"class {k} too small for a block; moved to class {k - 1}")
                    classes.setdefault(k - 1, []).extend(members)
                    classes[k] = []
                    changed = True
            small = classes.get(3, [])
            if 0 < len(small) < 3:
                up = [k for k in sorted(classes) if k > 3 and len(classes[k]) >= 3]
                if not up:
                    self.fail("fewer than three vertices remain for the low-degree structures")
                j = up[0]
                for v in small:
                    self.shift("normalize", v, j - 3, f"class 3 too small for a block; moved to class {j}")
                classes[j].extend(small)
                classes[3] = []
                changed = True
            if not changed:
                return

    def block_sizes(self, k: int, m: int) -> list:
        """Partition m vertices into chained blocks, minimising the degree shift.

        A block of size s gives its members degree s - 1 and each chain bridge
        adds one to two endpoints.  Sizes stay within [3, K+3] so that a member
        with one bridge invites at most K+3 agents.
        """
        hi = min(k + 3, self.K + 3)
        best = [None] * (m + 1)
        best[0] = (0, ())
        for total in range(3, m + 1):
            for s in range(3, min(hi, total) + 1):
                prev = best[total - s]
                if prev is None:
                    continue
                cost = prev[0] + s * abs(s - 1 - k) + (2 if prev[1] else 0)
                if best[total] is None or cost < best[total][0]:
                    best[total] = (cost, prev[1] + (s,))
        return sorted(best[m][1], reverse=True)

    def plan_case1(self, k: int, members: list) -> _ClassPlan:
        blocks, pos = [], 0
        for size in self.block_sizes(k, len(members)):
            blocks.append(members[pos:pos + size])
            pos += size
        for b in blocks:
            if len(b) != k + 1:
                for v in b:
                    self.shift("step3", v, len(b) - 1 - k, f"class {k}: remainder block of size {len(b)}")
        bridges = []
        for j in range(len(blocks) - 1):
            u, w = blocks[j][-1], blocks[j + 1][0]
            bridges.append((u, w))
            self.shift("step3", u, 1, f"class {k}: chain bridge endpoint")
            self.shift("step3", w, 1, f"class {k}: chain bridge endpoint")
        ends = {blocks[0][0], blocks[-1][-1]}
        busy = {x for e in bridges for x in e}
        free = [v for b in blocks for v in b if v not in busy and v not in ends]
        groups = [(b, Fraction(1, len(b))) for b in blocks]
        plan = _ClassPlan(k, 1, groups, bridges, [], free)
        plan.ports = (blocks[0][0], blocks[-1][-1])
        self.budget["step3"] += 2 * min_girth5_size(k) + 2 * (k + 2)
        return plan

    def plan_case2(self, k: int, members: list, h: int) -> _ClassPlan:
        H = gen_regular_girth5(k, h, self.rng.randrange(2 ** 32))
        extra = len(members) - h * k
        cliques, pos = [], 0
        for a in range(h):
            size = k + (1 if a < extra else 0)
            cliques.append(members[pos:pos + size])
            pos += size
        incident = defaultdict(list)
        for a, b in H.edges:
            incident[a].append((a, b))
            incident[b].append((a, b))
        slot = {}
        for a in range(h):
            for j, e in enumerate(sorted(incident[a])):
                slot[(a, e)] = cliques[a][j]
        bridges = [(slot[(a, (a, b))], slot[(b, (a, b))]) for a, b in H.edges]
        free = [c[-1] for c in cliques if len(c) == k + 1]
        for c in cliques:
            if len(c) == k + 1:
                for v in c[:-1]:
                    self.shift("step3", v, 1, f"class {k}: enlarged clique absorbs a remainder vertex")
        # bridges off a BFS spanning tree of H can be removed without disconnecting it
        adj = defaultdict(list)
        for a, b in H.edges:
            adj[a].append(b)
            adj[b].append(a)
        tree, seen, queue = set(), {0}, [0]
        for x in queue:
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    tree.add((min(x, y), max(x, y)))
                    queue.append(y)
        breakable = [bridges[i] for i, e in enumerate(H.edges) if e not in tree]
        groups = [(c, Fraction(1, len(c))) for c in cliques]
        self.budget["step3"] += 2 * min_girth5_size(k) + 2 * (k + 2)
        return _ClassPlan(k, 2, groups, bridges, breakable, free)

    def step3(self, rest) -> list:
        classes = defaultdict(list)
        for v in self.ordered(rest):
            classes[self.res[v]].append(v)
        # each pass moves at most two vertices per class by at most K
        self.budget["normalize"] = 3 * 2 * self.K * (self.K + 2)
        self.normalize(classes)
        plans = []
        for k in sorted(classes):
            members = classes[k]
            if not members:
                continue
            nk = min_girth5_size(k)
            h = len(members) // k
            if h * k % 2:
                h -= 1
            if len(members) >= k * nk and h >= nk:
                plan = self.plan_case2(k, members, h)
            else:
                plan = self.plan_case1(k, members)
            self.cases[k] = plan.case
            plans.append(plan)
        return plans

    # step 4 and pendants

    def step4(self, plans) -> None:
        self.budget["step4"] = 2 * len(plans)
        if len(plans) == 1:
            return
        last = len(plans) - 1
        for i, plan in enumerate(plans):
            if plan.case == 2:
                if not plan.breakable:  # pragma: no cover - H always has a cycle
                    self.fail(f"class {plan.k}: no bridge can be broken")
                edge = plan.breakable.pop(0)
                plan.bridges.remove(edge)
                plan.ports = edge
            for port, used in ((plan.ports[0], i > 0), (plan.ports[1], i < last)):
                # Case 1 ports start bridge-free; Case 2 ports lost a bridge
                delta = (1 if used else 0) - (plan.case == 2)
                if delta:
                    self.shift("step4", port, delta, f"class {plan.k}: connector port ({'used' if used else 'unused'})")
        for prev, nxt in zip(plans, plans[1:]):
            self.bridge(prev.ports[1], nxt.ports[0], "step4")

    def attach_pendants(self, plans, pendants) -> list:
        pairs = []
        order = [p for p in plans if p.k >= 4 and p.case == 2] + [p for p in plans if p.k >= 4 and p.case == 1]
        order += [p for p in plans if p.k == 3]
        self.budget["degree1"] = 0
        for plan in order:
            if not pendants:
                break
            if plan.k == 3:
                self.info("degree1", "pendants attached to class 3 after higher classes filled up")
            if plan.case == 2:
                while pendants and plan.breakable:
                    a, b = plan.breakable.pop(0)
                    plan.bridges.remove((a, b))
                    for x in (a, b):
                        if pendants:
                            pairs.append((x, pendants.pop(0)))
                        else:
                            self.shift("degree1", x, -1, f"class {plan.k}: broken bridge endpoint with no pendant left")
                            self.budget["degree1"] += 1
            while pendants and plan.free:
                x = plan.free.pop(0)
                pairs.append((x, pendants.pop(0)))
                if plan.case == 1:
                    self.shift("degree1", x, 1, f"class {plan.k}: pendant host")
                    self.budget["degree1"] += 1
                else:
                    # the unbridged vertex of an enlarged clique has degree k; a pendant adds one
                    self.shift("degree1", x, 1, f"class {plan.k}: pendant on an enlarged clique")
                    self.budget["degree1"] += 1
        if pendants:
            raise FeasibilityError(f"{len(pendants)} degree-1 vertices could not be attached")
        return pairs

    def emit(self, plans, pairs) -> EventConfiguration:
        for plan in plans:
            for members, rate in plan.groups:
                self.clique(members, rate)
            for u, w in plan.bridges:
                self.bridge(u, w, "step3")
        for x, p in pairs:
            self.bridge(x, p, "degree1")
        return from_targets(self.params, self.targets)


def realize(D, params: Parameters, seed: int) -> RealizationReport:
    """Build a connected, (K+3)-supportable stable configuration close to ``D``."""
    D = _as_sequence(D)
    if params.n != D.n:
        raise InvalidInputError(f"parameters are for n={params.n} agents but the sequence has {D.n}")
    if params.b is not B_EPS:
        raise PreconditionError("degree-sequence realisation requires an infinitesimal fixed cost")
    K = validate_sequence(D, params.gamma).K
    b = _Builder(D, params, K, seed)
    pool, pendants = b.step1()
    rest = b.step2(pool, pendants)
    plans = b.step3(rest)
    b.step4(plans)
    pairs = b.attach_pendants(plans, pendants)
    config = b.emit(plans, pairs)
    G = connection_graph(config)
    achieved = tuple(G.degrees())
    report = RealizationReport(
        config=config,
        target=D,
        achieved=achieved,
        l1_shift=sum(abs(x - y) for x, y in zip(D.degrees, achieved)),
        K_used=K,
        n_k={k: min_girth5_size(k) for k in range(3, K + 3)},
        step_log=b.log,
        budget=dict(b.budget),
        cases=b.cases,
    )
    planned = report.planned()
    bad = [v for v in range(D.n) if planned[v] != achieved[v]]
    if bad:
        b.fail(f"achieved degree differs from the logged plan at vertices {bad[:10]}")
    return report
