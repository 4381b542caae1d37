"""Exception types shared across the package."""


class CantorAuditError(Exception):
    """Base class for every error raised by this package."""


class OutOfRange(CantorAuditError, ValueError):
    pass


class NotInjective(CantorAuditError, ValueError):
    """A sequence or list repeated a term that was already seen."""

    def __init__(self, message, first_index=None, second_index=None):
        super().__init__(message)
        self.first_index = first_index
        self.second_index = second_index


class NotAMember(CantorAuditError, ValueError):
    pass


class NoDifferenceWithinPrefix(CantorAuditError):
    pass


class InvalidRule(CantorAuditError, ValueError):
    pass


class NoTranscendentalCoordinate(CantorAuditError, ValueError):
    pass


class NoAlgebraicCoordinate(CantorAuditError, ValueError):
    pass


class NotOnGrid(CantorAuditError, ValueError):
    pass


class DegenerateInput(CantorAuditError, ValueError):
    pass


class DeviationUnattainable(CantorAuditError, ValueError):
    """The exempt coordinate class is too sparse to hug the straight line."""


class SceneError(CantorAuditError, ValueError):
    pass


class AuditFailure(CantorAuditError):
    """An exhaustive audit found a counterexample; ``witness`` carries it."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
