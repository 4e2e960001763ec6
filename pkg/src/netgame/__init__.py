"""Exact engine for the social-event network formation game."""

from .errors import (
    AssumptionError,
    ConstructionError,
    DomainError,
    FeasibilityError,
    InvalidInputError,
    InvalidPairError,
    ParseError,
    PreconditionError,
    RegimeError,
    UnsupportedRegimeError,
)
from .model import (
    B_EPS,
    ConnectionGraph,
    Event,
    EventConfiguration,
    InfinitesimalUtility,
    Parameters,
    Strategy,
    connection_graph,
    cost,
    meeting_rate,
    meeting_rate_by,
    utility,
)
from .stability import (
    best_response,
    check_stability_criterion,
    check_stability_deviation,
    deficits,
    is_stable,
    realization_cost,
    realize_nested,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionError", "ConstructionError", "DomainError", "FeasibilityError",
    "InvalidInputError", "InvalidPairError", "ParseError", "PreconditionError",
    "RegimeError", "UnsupportedRegimeError",
    "B_EPS", "ConnectionGraph", "Event", "EventConfiguration", "InfinitesimalUtility",
    "Parameters", "Strategy", "connection_graph", "cost", "meeting_rate",
    "meeting_rate_by", "utility",
    "best_response", "check_stability_criterion", "check_stability_deviation",
    "deficits", "is_stable", "realization_cost", "realize_nested",
]
