"""Exception hierarchy shared by every module."""


class GeoGraphError(Exception):
    """Base class for all library errors."""


class DegenerateGeometryError(GeoGraphError):
    """Input violates general position (collinear overlap, point on a line, ...)."""


class CoordinateRangeError(GeoGraphError):
    """A coordinate exceeds the supported magnitude budget."""


class ValidationError(GeoGraphError):
    """Structurally valid input that breaks a model invariant."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class ParseError(GeoGraphError):
    """Malformed input document."""


class PerturbationError(GeoGraphError):
    pass


class NotAMatchingError(GeoGraphError):
    pass


class SizeError(GeoGraphError):
    """Argument is outside the size range an operation accepts."""


class GenerationError(GeoGraphError):
    pass


class InvariantError(GeoGraphError):
    """An internal postcondition failed; indicates a bug, never bad input."""
