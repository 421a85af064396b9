"""Exception types raised across the package."""


class ErLabError(Exception):
    """Base class for all library errors."""


class BadParams(ErLabError, ValueError):
    pass


class GraphFormatError(ErLabError, ValueError):
    """A graph, decomposition or instance file could not be parsed."""


class DisconnectedPair(ErLabError):
    pass


class Disconnected(ErLabError):
    """An algorithm that needs a connected hidden graph saw an infinite resistance."""


class SameVertex(ErLabError, ValueError):
    pass


class WeightedInput(ErLabError):
    """Raised by procedures whose correctness argument only covers unweighted graphs."""


class CapabilityError(ErLabError):
    """The oracle does not provide a requested query type."""


class InvalidDecomposition(ErLabError):
    pass


class DegreeBoundExceeded(ErLabError):
    pass


class InconsistentKnownPart(ErLabError):
    pass


class NoConsistentCompletion(ErLabError):
    pass


class AmbiguousCompletion(ErLabError):
    def __init__(self, message, matches=()):
        super().__init__(message)
        self.matches = list(matches)
