"""Exception hierarchy shared by all modules."""


class FrobToricError(Exception):
    """Base class for errors raised by this package."""


class CapacityError(FrobToricError):
    """A desk-scale bound (enumeration size, matrix size, box volume) was exceeded."""


class FanAxiomViolation(FrobToricError):
    def __init__(self, message, cones=None, intersection=None):
        super().__init__(message)
        self.cones = cones
        self.intersection = intersection


class NotCartier(FrobToricError):
    """No integral local linearization exists on some maximal cone."""

    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class InconsistentInput(FrobToricError):
    """Known dimensions cannot sit in any long exact sequence."""


class DegeneratePairing(FrobToricError):
    """The wedge pairing failed to be perfect on a grade."""


class InternalInconsistency(FrobToricError):
    """Two independent decision procedures disagreed."""


class ChartMismatch(FrobToricError):
    pass


class ParseError(FrobToricError):
    def __init__(self, message, line=None, column=None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column
