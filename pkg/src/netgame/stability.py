"""Deficits, optimal responses and Nash-stability verdicts.

For an agent ``v`` the *deficit* toward ``u`` is the extra rate ``v`` must
supply itself for the pair to reach meeting rate 1, given everybody else's
events.  Everything an agent can achieve by deviating is a function of these
deficits, which is what makes exact best responses cheap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .errors import InvalidInputError, UnsupportedRegimeError
from .model import (
    B_EPS,
    ONE,
    ZERO,
    Event,
    EventConfiguration,
    InfinitesimalUtility,
    Parameters,
    Strategy,
    cost,
    utility,
)

SUBSET = "subset"
RATE_MATCH = "rate-match"
ORDERING = "ordering"
PROFITABLE_DEVIATION = "profitable-deviation"


@dataclass(frozen=True)
class Violation:
    agent: int
    condition: str
    witness: tuple
    detail: str

    def to_json(self) -> dict:
        return {
            "agent": self.agent,
            "condition": self.condition,
            "witness": list(self.witness),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class StabilityReport:
    violations: tuple = ()

    @property
    def stable(self) -> bool:
        return not self.violations

    def conditions(self) -> set:
        return {x.condition for x in self.violations}

    def agents(self) -> list:
        return sorted({x.agent for x in self.violations})

    def to_json(self) -> dict:
        return {"stable": self.stable, "violations": [x.to_json() for x in self.violations]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class ResponseSets:
    targets: frozenset  # T_v
    invitees: frozenset  # I_v
    free: frozenset


@dataclass(frozen=True)
class BestResponse:
    target_rates: Mapping[int, Fraction]
    strategy: Strategy
    utility: InfinitesimalUtility
    free: int = 0
    chosen: tuple = field(default=())


class Deficits(dict):
    """``u -> E_{v,u}`` for every ``u != v``.

    Stored sparsely: agents that never co-attend a foreign event with ``v``
    have deficit exactly 1 and are not materialised.
    """

    def __init__(self, v: int, n: int, sparse: dict):
        super().__init__(sparse)
        self.v = v
        self.n = n

    def __missing__(self, u: int) -> Fraction:
        if u == self.v or not 0 <= u < self.n:
            raise KeyError(u)
        return ONE

    def __contains__(self, u) -> bool:
        return isinstance(u, int) and u != self.v and 0 <= u < self.n

    def full(self) -> dict:
        """Dense map over all ``u != v`` (O(n))."""
        return {u: self[u] for u in range(self.n) if u != self.v}

    def default_agents(self):
        """Agents with the implicit deficit 1, in id order."""
        for u in range(self.n):
            if u != self.v and not dict.__contains__(self, u):
                yield u


def deficits(config: EventConfiguration, v: int) -> Deficits:
    own = config.own_rates.get(v, {})
    sparse = {}
    for u, m in config.partners(v).items():
        foreign = m - own.get(u, ZERO)
        if foreign:
            sparse[u] = ONE - foreign
    return Deficits(v, config.n, sparse)


def response_sets(config: EventConfiguration, v: int) -> ResponseSets:
    gamma = config.params.gamma
    e = deficits(config, v)
    targets = {u for u, x in e.items() if ZERO < x < gamma}
    if gamma > ONE:
        targets.update(e.default_agents())
    free = {u for u, x in e.items() if x <= ZERO}
    own = config.own_rates.get(v, {})
    invitees = {u for u, r in own.items() if r > ZERO}
    return ResponseSets(frozenset(targets), frozenset(invitees), frozenset(free))


def realize_nested(target_rates: Mapping[int, Fraction], v: int) -> Strategy:
    """Cheapest strategy for host ``v`` meeting each ``u`` at exactly ``target_rates[u]``.

    Invitees are sorted by decreasing target; event ``i`` invites the ``i``
    largest and runs at the gap to the next target.
    """
    for u, m in target_rates.items():
        if m < 0:
            raise InvalidInputError(f"negative target rate {m} for agent {u}")
        if u == v:
            raise InvalidInputError("host cannot target itself")
    order = sorted((u for u, m in target_rates.items() if m > 0), key=lambda u: (-target_rates[u], u))
    events = []
    for i, u in enumerate(order):
        nxt = target_rates[order[i + 1]] if i + 1 < len(order) else ZERO
        gap = target_rates[u] - nxt
        if gap > 0:
            events.append(Event(v, frozenset(order[: i + 1]), gap))
    return Strategy(tuple(events))


def realization_cost(params: Parameters, target_rates: Mapping[int, Fraction]) -> InfinitesimalUtility:
    vals = [m for m in target_rates.values()]
    for m in vals:
        if m < 0:
            raise InvalidInputError(f"negative target rate {m}")
    return InfinitesimalUtility(params.c * sum(vals, ZERO), max(vals, default=ZERO))


def candidate_deficits(config: EventConfiguration, v: int, e: Deficits = None) -> list:
    """``T_v`` as ``(E, u)`` pairs sorted by deficit then id."""
    gamma = config.params.gamma
    if e is None:
        e = deficits(config, v)
    cand = [(x, u) for u, x in e.items() if ZERO < x < gamma]
    if gamma > ONE:
        cand.extend((ONE, u) for u in e.default_agents())
    cand.sort()
    return cand


def best_prefix(params: Parameters, cand: list) -> int:
    """Length of the optimal prefix of sorted candidate deficits (0 allowed)."""
    best_j = 0
    best_key = InfinitesimalUtility().key(params)
    csum = ZERO
    for j, (x, _) in enumerate(cand, start=1):
        csum += x
        val = InfinitesimalUtility(params.a * j - params.c * csum, -x)
        k = val.key(params)
        if k > best_key:
            best_key, best_j = k, j
    return best_j


def best_response(config: EventConfiguration, v: int) -> BestResponse:
    params = config.params
    e = deficits(config, v)
    cand = candidate_deficits(config, v, e)
    j = best_prefix(params, cand)
    chosen = cand[:j]
    targets = {u: x for x, u in chosen}
    strat = realize_nested(targets, v)
    free = sum(1 for x in e.values() if x <= ZERO)
    util = InfinitesimalUtility(params.a * (free + j), ZERO) - realization_cost(params, targets)
    return BestResponse(targets, strat, util, free, tuple(u for _, u in chosen))


def exhaustive_best_value(params: Parameters, deficit_values: list) -> InfinitesimalUtility:
    """Brute-force best achievable value over every subset of the given deficits.

    Independent of the prefix argument: enumerates all subsets and scores each
    with ``a|S| - c*sum(S) - b*max(S)``.  Exponential; intended for |T| <= 12.
    """
    best = InfinitesimalUtility()
    best_key = best.key(params)
    idx = range(len(deficit_values))
    for r in range(1, len(deficit_values) + 1):
        for sub in combinations(idx, r):
            vals = [deficit_values[i] for i in sub]
            u = InfinitesimalUtility(params.a * r - params.c * sum(vals, ZERO), -max(vals))
            if u.key(params) > best_key:
                best, best_key = u, u.key(params)
    return best


def prefix_best_value(params: Parameters, deficit_values: list) -> InfinitesimalUtility:
    cand = sorted((x, i) for i, x in enumerate(deficit_values) if ZERO < x < params.gamma)
    j = best_prefix(params, cand)
    if j == 0:
        return InfinitesimalUtility()
    chosen = [x for x, _ in cand[:j]]
    return InfinitesimalUtility(params.a * j - params.c * sum(chosen, ZERO), -chosen[-1])


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _criterion_agent(config: EventConfiguration, v: int) -> list:
    gamma = config.params.gamma
    e = deficits(config, v)
    own = config.own_rates.get(v, {})
    invited = sorted(u for u, r in own.items() if r > 0)
    out = []
    for u in invited:
        x = e[u]
        if not ZERO < x < gamma:
            out.append(Violation(v, SUBSET, (v, u), f"invitee {u} has deficit {_fmt(x)} outside (0, {_fmt(gamma)})"))
        if own[u] != x:
            out.append(Violation(v, RATE_MATCH, (v, u), f"invites {u} at {_fmt(own[u])} but deficit is {_fmt(x)}"))
    if invited:
        inv = set(invited)
        uninvited = [(x, w) for x, w in candidate_deficits(config, v, e) if w not in inv]
        if uninvited:
            low_x, low_w = uninvited[0]
            for u in invited:
                if not e[u] < low_x:
                    out.append(Violation(
                        v, ORDERING, (u, low_w),
                        f"invitee {u} (deficit {_fmt(e[u])}) not strictly cheaper than uninvited {low_w} (deficit {_fmt(low_x)})",
                    ))
    return out


def check_stability_criterion(config: EventConfiguration) -> StabilityReport:
    """Verify the three deficit conditions agent by agent.

    Only meaningful for an infinitesimal fixed cost; a concrete ``b`` raises
    :class:`UnsupportedRegimeError` (use :func:`check_stability_deviation`).
    """
    if config.params.b is not B_EPS:
        raise UnsupportedRegimeError(
            "the deficit criterion is stated for b = 0+; use check_stability_deviation for concrete b"
        )
    out = []
    for v in range(config.n):
        out.extend(_criterion_agent(config, v))
    return StabilityReport(tuple(out))


def deviation_violation(config: EventConfiguration, v: int):
    br = best_response(config, v)
    cur = utility(config, v)
    params = config.params
    if br.utility.key(params) > cur.key(params):
        gain = br.utility - cur
        witness = (v, br.chosen[0]) if br.chosen else (v, v)
        return Violation(
            v, PROFITABLE_DEVIATION, witness,
            f"best response gains main {_fmt(gain.main)}, b-coefficient {_fmt(gain.b_coeff)}",
        )
    return None


def check_stability_deviation(config: EventConfiguration) -> StabilityReport:
    """Nash stability by comparing every agent's utility with its exact best response."""
    out = []
    for v in range(config.n):
        viol = deviation_violation(config, v)
        if viol is not None:
            out.append(viol)
    return StabilityReport(tuple(out))


def is_stable(config: EventConfiguration) -> bool:
    return check_stability_deviation(config).stable


def own_cost(config: EventConfiguration, v: int) -> InfinitesimalUtility:
    return cost(config.params, config.strategy(v))
