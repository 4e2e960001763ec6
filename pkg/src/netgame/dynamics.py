"""Asynchronous best-response dynamics.

One agent moves at a time.  An agent switches to its exact best response only
when that is strictly better (lexicographically, for an infinitesimal fixed
cost) than what it currently holds, so a stable configuration is left
untouched.  A run is *converged* after a full pass over the agents in which
nobody moved; otherwise it stops at the round limit.  Nothing here promises
convergence.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidInputError
from .model import ONE, EventConfiguration, Parameters, Strategy, utility
from .stability import best_response

ROUND_ROBIN = "round-robin"
UNIFORM_RANDOM = "uniform-random"
CONVERGED = "converged"
ROUND_LIMIT = "round-limit"

_ORDER_ALIASES = {"rr": ROUND_ROBIN, ROUND_ROBIN: ROUND_ROBIN, "random": UNIFORM_RANDOM, UNIFORM_RANDOM: UNIFORM_RANDOM}


@dataclass(frozen=True)
class Arrival:
    """A new agent joining at the start of ``round`` and holding ``strategy``.

    The newcomer receives the next free agent id; the strategy's events must be
    hosted by that id.
    """

    round: int
    strategy: Strategy


@dataclass(frozen=True)
class DynamicsPolicy:
    order: str = ROUND_ROBIN
    max_rounds: int = 100
    seed: Optional[int] = None
    arrivals: tuple = ()

    def __post_init__(self):
        if self.order not in _ORDER_ALIASES:
            raise InvalidInputError(f"unknown update order {self.order!r}")
        object.__setattr__(self, "order", _ORDER_ALIASES[self.order])
        if self.max_rounds < 1:
            raise InvalidInputError("max_rounds must be at least 1")
        if self.order == UNIFORM_RANDOM and self.seed is None:
            raise InvalidInputError("random update order needs a seed")
        object.__setattr__(self, "arrivals", tuple(sorted(self.arrivals, key=lambda a: a.round)))


def _u(x) -> dict:
    return x.to_json()


@dataclass(frozen=True)
class TraceStep:
    round: int
    agent: int
    old_utility: object
    new_utility: object
    added: tuple
    removed: tuple

    def to_json(self) -> dict:
        return {
            "round": self.round,
            "agent": self.agent,
            "old_utility": _u(self.old_utility),
            "new_utility": _u(self.new_utility),
            "edges_added": [list(e) for e in self.added],
            "edges_removed": [list(e) for e in self.removed],
        }


@dataclass
class Trace:
    steps: list = field(default_factory=list)
    arrivals: list = field(default_factory=list)
    status: str = ROUND_LIMIT
    rounds: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def records(self) -> list:
        out = [dict(kind="arrival", round=r, agent=v) for r, v in self.arrivals]
        out += [dict(kind="step", **s.to_json()) for s in self.steps]
        out.sort(key=lambda d: (d["round"], d["kind"] != "arrival"))
        out.append({"kind": "status", "status": self.status, "rounds": self.rounds, "changes": len(self.steps)})
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in self.records())


def _edge_changes(before: EventConfiguration, after: EventConfiguration, v: int) -> tuple:
    # only pairs that co-attend one of v's old or new events can change
    groups = [e.attendees for e in before.strategy(v).events] + [e.attendees for e in after.strategy(v).events]
    pairs = set()
    for att in groups:
        s = sorted(att)
        for i, x in enumerate(s):
            for y in s[i + 1:]:
                pairs.add((x, y))
    added, removed = [], []
    for x, y in sorted(pairs):
        was = before.partners(x).get(y, 0) >= ONE
        now = after.partners(x).get(y, 0) >= ONE
        if now and not was:
            added.append((x, y))
        elif was and not now:
            removed.append((x, y))
    return tuple(added), tuple(removed)


def _admit(config: EventConfiguration, arrival: Arrival) -> tuple:
    v = config.n
    for e in arrival.strategy.events:
        if e.host != v:
            raise InvalidInputError(f"arriving agent gets id {v} but its event is hosted by {e.host}")
    strategies = dict(config.strategies)
    strategies[v] = arrival.strategy
    return EventConfiguration(config.params.with_n(v + 1), strategies), v


def run_dynamics(
    config: EventConfiguration,
    params: Optional[Parameters] = None,
    policy: DynamicsPolicy = DynamicsPolicy(),
) -> tuple:
    """Run best-response dynamics; returns ``(final configuration, Trace)``."""
    if params is not None:
        config = config.with_params(params)
    rng = random.Random(policy.seed)
    trace = Trace()
    pending = list(policy.arrivals)
    for rnd in range(1, policy.max_rounds + 1):
        trace.rounds = rnd
        while pending and pending[0].round <= rnd:
            config, v = _admit(config, pending.pop(0))
            trace.arrivals.append((rnd, v))
        order = list(range(config.n))
        if policy.order == UNIFORM_RANDOM:
            rng.shuffle(order)
        moved = False
        for v in order:
            p = config.params
            br = best_response(config, v)
            cur = utility(config, v)
            if br.utility.key(p) <= cur.key(p):
                continue
            new = config.with_strategy(v, br.strategy)
            added, removed = _edge_changes(config, new, v)
            trace.steps.append(TraceStep(rnd, v, cur, utility(new, v), added, removed))
            config = new
            moved = True
        if not moved and not pending:
            trace.status = CONVERGED
            break
    return config, trace


def is_fixed_point(config: EventConfiguration) -> bool:
    """True when one round-robin pass changes nothing."""
    _, trace = run_dynamics(config, policy=DynamicsPolicy(max_rounds=1))
    return trace.converged and not trace.steps


def arrivals_from(items: Sequence[tuple]) -> tuple:
    return tuple(Arrival(r, s if isinstance(s, Strategy) else Strategy(tuple(s))) for r, s in items)
