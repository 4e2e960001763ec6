"""Events, configurations, meeting rates and utilities of the social-event game.

All quantities are exact :class:`fractions.Fraction` values.  The connection
threshold is normalised to 1, so two agents are connected exactly when the
total rate of events they both attend is at least 1.

A host always attends its own events; :class:`Event` stores the invitees only.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import InvalidInputError, InvalidPairError

__all__ = [
    "B_EPS",
    "ConnectionGraph",
    "Event",
    "EventConfiguration",
    "InfinitesimalUtility",
    "Parameters",
    "Strategy",
    "connection_graph",
    "cost",
    "meeting_rate",
    "meeting_rate_by",
    "to_fraction",
    "utility",
]

ONE = Fraction(1)
ZERO = Fraction(0)


class _BEps:
    """Sentinel for an infinitesimally small positive fixed event cost."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "B_EPS"

    def __reduce__(self):
        return (_BEps, ())


B_EPS = _BEps()

Number = Union[int, str, Fraction]


def to_fraction(x: Number) -> Fraction:
    """Exact conversion; floats are rejected to keep thresholds exact."""
    if isinstance(x, float):
        raise InvalidInputError(f"refusing float {x!r}; pass a Fraction or 'p/q' string")
    if isinstance(x, Fraction):
        return x
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"not a rational number: {x!r}") from exc


@dataclass(frozen=True)
class Parameters:
    """Game constants.  ``b`` is either a rational or :data:`B_EPS`."""

    a: Fraction
    b: Union[Fraction, _BEps]
    c: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "c", to_fraction(self.c))
        if self.b is not B_EPS:
            object.__setattr__(self, "b", to_fraction(self.b))
            if self.b < 0:
                raise InvalidInputError("b must be non-negative")
        if self.a <= 0 or self.c <= 0:
            raise InvalidInputError("a and c must be positive")
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidInputError("community size n must be a positive integer")

    @property
    def gamma(self) -> Fraction:
        return self.a / self.c

    @property
    def infinitesimal_b(self) -> bool:
        return self.b is B_EPS

    @classmethod
    def from_gamma(cls, gamma: Number, n: int, b=B_EPS) -> "Parameters":
        """Split ``gamma = p/q`` into ``a = p``, ``c = q``."""
        g = to_fraction(gamma)
        return cls(a=Fraction(g.numerator), b=b, c=Fraction(g.denominator), n=n)

    def with_gamma(self, gamma: Number) -> "Parameters":
        return Parameters.from_gamma(gamma, self.n, self.b)

    def with_b(self, b) -> "Parameters":
        return Parameters(self.a, b, self.c, self.n)

    def with_n(self, n: int) -> "Parameters":
        return Parameters(self.a, self.b, self.c, n)


@dataclass(frozen=True, order=True)
class InfinitesimalUtility:
    """A utility ``main + b * b_coeff`` kept as a pair.

    The dataclass ordering is lexicographic on ``(main, b_coeff)``, which is
    the right comparison when ``b`` is infinitesimal.  Use :meth:`key` to get
    a comparison key valid for a particular parameter set.
    """

    main: Fraction = ZERO
    b_coeff: Fraction = ZERO

    def __add__(self, other: "InfinitesimalUtility") -> "InfinitesimalUtility":
        return InfinitesimalUtility(self.main + other.main, self.b_coeff + other.b_coeff)

    def __sub__(self, other: "InfinitesimalUtility") -> "InfinitesimalUtility":
        return InfinitesimalUtility(self.main - other.main, self.b_coeff - other.b_coeff)

    def __neg__(self) -> "InfinitesimalUtility":
        return InfinitesimalUtility(-self.main, -self.b_coeff)

    def collapse(self, b: Fraction) -> Fraction:
        return self.main + b * self.b_coeff

    def key(self, params: Parameters) -> tuple:
        if params.b is B_EPS:
            return (self.main, self.b_coeff)
        return (self.collapse(params.b),)

    def to_json(self) -> dict:
        return {"main": _frac_str(self.main), "b_coeff": _frac_str(self.b_coeff)}


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Event:
    host: int
    invitees: frozenset
    rate: Fraction

    def __post_init__(self):
        object.__setattr__(self, "invitees", frozenset(self.invitees))
        object.__setattr__(self, "rate", to_fraction(self.rate))
        if self.host in self.invitees:
            raise InvalidInputError(f"host {self.host} listed among its own invitees")
        if not self.invitees:
            raise InvalidInputError("event must invite at least one agent")
        if self.rate <= 0:
            raise InvalidInputError(f"event rate must be positive, got {self.rate}")

    @property
    def attendees(self) -> frozenset:
        return self.invitees | {self.host}


@dataclass(frozen=True)
class Strategy:
    events: tuple = ()

    def __post_init__(self):
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        hosts = {e.host for e in events}
        if len(hosts) > 1:
            raise InvalidInputError(f"strategy mixes hosts {sorted(hosts)}")

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def total_rate(self) -> Fraction:
        return sum((e.rate for e in self.events), ZERO)

    def invitation_rates(self) -> dict:
        """``u -> M^v_{v,u}``: the rate at which the host meets ``u`` at its own events."""
        out: dict = defaultdict(Fraction)
        for e in self.events:
            for u in e.invitees:
                out[u] += e.rate
        return dict(out)


EMPTY_STRATEGY = Strategy()


@dataclass(frozen=True, eq=False)
class EventConfiguration:
    """A full strategy profile.  Agents absent from ``strategies`` hold no events."""

    params: Parameters
    strategies: Mapping[int, Strategy] = field(default_factory=dict)

    def __post_init__(self):
        n = self.params.n
        clean = {}
        for v, s in self.strategies.items():
            if not isinstance(s, Strategy):
                s = Strategy(tuple(s))
            if not 0 <= v < n:
                raise InvalidInputError(f"agent {v} outside 0..{n - 1}")
            for e in s.events:
                if e.host != v:
                    raise InvalidInputError(f"event hosted by {e.host} filed under agent {v}")
                for u in e.invitees:
                    if not 0 <= u < n:
                        raise InvalidInputError(f"invitee {u} outside 0..{n - 1}")
            if s.events:
                clean[v] = s
        object.__setattr__(self, "strategies", dict(sorted(clean.items())))

    @property
    def n(self) -> int:
        return self.params.n

    def strategy(self, v: int) -> Strategy:
        return self.strategies.get(v, EMPTY_STRATEGY)

    def events(self) -> Iterable[Event]:
        for s in self.strategies.values():
            yield from s.events

    def with_strategy(self, v: int, strategy: Strategy) -> "EventConfiguration":
        new = dict(self.strategies)
        new[v] = strategy
        return EventConfiguration(self.params, new)

    def with_params(self, params: Parameters) -> "EventConfiguration":
        if params.n != self.n:
            raise InvalidInputError("parameter change may not resize the community")
        return EventConfiguration(params, self.strategies)

    @classmethod
    def from_events(cls, params: Parameters, events: Iterable[Event]) -> "EventConfiguration":
        by_host: dict = defaultdict(list)
        for e in events:
            by_host[e.host].append(e)
        return cls(params, {v: Strategy(tuple(es)) for v, es in by_host.items()})

    # cached indices; safe because the object is immutable

    @cached_property
    def pair_rates(self) -> dict:
        """Sparse symmetric meeting rates: ``partners[u][v] = M_{u,v}`` for co-attending pairs."""
        partners: dict = defaultdict(lambda: defaultdict(Fraction))
        for e in self.events():
            att = sorted(e.attendees)
            r = e.rate
            for i, u in enumerate(att):
                pu = partners[u]
                for v in att[i + 1:]:
                    pu[v] += r
                    partners[v][u] += r
        return {u: dict(d) for u, d in partners.items()}

    @cached_property
    def own_rates(self) -> dict:
        """``own_rates[v][u] = M^v_{v,u}``."""
        return {v: s.invitation_rates() for v, s in self.strategies.items()}

    def partners(self, v: int) -> dict:
        return self.pair_rates.get(v, {})

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventConfiguration):
            return NotImplemented
        return self.params == other.params and _canon(self) == _canon(other)

    def __hash__(self) -> int:
        return hash((self.params, _canon(self)))


def _canon(config: EventConfiguration) -> tuple:
    return tuple(
        (v, tuple((tuple(sorted(e.invitees)), e.rate) for e in s.events))
        for v, s in config.strategies.items()
    )


@dataclass(frozen=True)
class ConnectionGraph:
    """The induced network: an edge wherever the meeting rate reaches 1."""

    n: int
    meeting_rates: Mapping[tuple, Fraction]
    edges: frozenset

    @cached_property
    def adjacency(self) -> list:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def neighbors(self, v: int) -> set:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list:
        return [len(s) for s in self.adjacency]

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "ConnectionGraph":
        es = set()
        for u, v in edges:
            if u == v:
                raise InvalidInputError(f"self-loop at {u}")
            es.add((min(u, v), max(u, v)))
        return cls(n=n, meeting_rates={}, edges=frozenset(es))


def _check_pair(u: int, v: int) -> None:
    if u == v:
        raise InvalidPairError(f"meeting rate undefined for identical agents ({u}, {v})")


def meeting_rate_by(config: EventConfiguration, w: int, u: int, v: int) -> Fraction:
    """Rate at which ``u`` and ``v`` are both present at events hosted by ``w``."""
    _check_pair(u, v)
    total = ZERO
    for e in config.strategy(w).events:
        att = e.attendees
        if u in att and v in att:
            total += e.rate
    return total


def meeting_rate(config: EventConfiguration, u: int, v: int) -> Fraction:
    _check_pair(u, v)
    return config.partners(u).get(v, ZERO)


def connection_graph(config: EventConfiguration) -> ConnectionGraph:
    rates = {}
    edges = set()
    for u, d in config.pair_rates.items():
        for v, r in d.items():
            if u < v:
                rates[(u, v)] = r
                if r >= ONE:
                    edges.add((u, v))
    return ConnectionGraph(n=config.n, meeting_rates=rates, edges=frozenset(edges))


def cost(params: Parameters, strategy: Strategy) -> InfinitesimalUtility:
    """Cost of a strategy as ``(c * sum r|invitees|, sum r)``; the second slot multiplies ``b``."""
    main = ZERO
    total = ZERO
    for e in strategy.events:
        main += e.rate * len(e.invitees)
        total += e.rate
    return InfinitesimalUtility(params.c * main, total)


def utility(config: EventConfiguration, v: int) -> InfinitesimalUtility:
    degree = sum(1 for r in config.partners(v).values() if r >= ONE)
    return InfinitesimalUtility(config.params.a * degree, ZERO) - cost(config.params, config.strategy(v))
