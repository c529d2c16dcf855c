"""Exception hierarchy for polyrot."""


class PolyrotError(Exception):
    """Base class for all errors raised by this package."""


class NotSquare(PolyrotError):
    pass


class NotSkew(PolyrotError):
    pass


class DimensionTooSmall(PolyrotError):
    pass


class DimensionTooLarge(PolyrotError):
    pass


class DimensionMismatch(PolyrotError):
    pass


class Degenerate(PolyrotError):
    """Points that should span a full-dimensional simplex do not."""


class UnboundedOrInconsistent(PolyrotError):
    pass


class RedundantFacet(PolyrotError):
    pass


class SigmaNotContained(PolyrotError):
    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = list(offenders)


class ZeroDirection(PolyrotError):
    pass


class NumericalFailure(PolyrotError):
    pass


class GenerationFailed(PolyrotError):
    pass


class NoSolutionOnFacet(PolyrotError):
    pass


class ConstructionUnverified(PolyrotError):
    pass


class ScenarioFormatError(PolyrotError):
    """Bad scenario file; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
