class ComodError(Exception):
    """Base class for errors raised by comodlim."""


class ShapeError(ComodError, ValueError):
    pass


class NoSolution(ComodError):
    """A requested factorization does not exist."""


class MixedCoalgebras(ComodError):
    pass


class InvalidStructure(ComodError):
    """Input fails an axiom that the operation requires."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotCoinvariant(ComodError):
    """A subspace is not closed under the coaction."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class ConeMismatch(ComodError):
    """Proposed cone or cocone legs do not commute with the diagram."""


class CertificateFailure(ComodError):
    """A verification check on a computed result came back false."""


class FatalCorrectnessError(ComodError):
    """A branch that would contradict the existence of limits was reached.

    Never expected to fire; if it does, the implementation is wrong.
    """
