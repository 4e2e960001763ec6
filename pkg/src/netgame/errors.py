"""Exception hierarchy.

``DomainError`` subclasses signal that the request is mathematically outside a
construction's regime (CLI exit code 1); ``ParseError`` covers malformed input
(exit code 2).
"""


class NetgameError(Exception):
    pass


class InvalidInputError(NetgameError, ValueError):
    pass


class InvalidPairError(InvalidInputError):
    pass


class DomainError(NetgameError):
    pass


class RegimeError(DomainError):
    """Parameters outside the range where a construction is stable."""


class UnsupportedRegimeError(DomainError):
    """The stability criterion is only defined for an infinitesimal fixed cost."""


class ConstructionError(DomainError):
    """A construction request that would break a structural requirement."""


class AssumptionError(DomainError):
    """A degree sequence fails one of the realisability assumptions."""

    def __init__(self, assumption: int, message: str):
        super().__init__(f"assumption ({assumption}) violated: {message}")
        self.assumption = assumption


class FeasibilityError(DomainError):
    """A random generator gave up after its retry budget."""


class PreconditionError(DomainError):
    pass


class ParseError(NetgameError):
    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.message = message
        self.location = location
