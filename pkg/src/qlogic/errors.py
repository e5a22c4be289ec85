"""Exception hierarchy shared by all modules."""


class QLogicError(Exception):
    """Base class for every error raised by qlogic."""


class ZeroVector(QLogicError, ValueError):
    pass


class DimensionMismatch(QLogicError, ValueError):
    pass


class NotAProjector(QLogicError, ValueError):
    pass


class NotADensityOperator(QLogicError, ValueError):
    pass


class NotOrthogonal(QLogicError, ValueError):
    pass


class IncompleteSum(QLogicError, ValueError):
    pass


class TrivialMember(QLogicError, ValueError):
    pass


class NotALattice(QLogicError, ValueError):
    """Tables or order relation do not describe a lattice."""


class ClosureOverflow(QLogicError, RuntimeError):
    pass


class BlockNotBoolean(QLogicError, ValueError):
    pass


class IncompatibleTrivials(QLogicError, ValueError):
    pass


class PastingNotClosed(QLogicError, ValueError):
    """A cross-block meet or join falls outside the pasted element table."""


class UnknownElement(QLogicError, KeyError):
    pass


class InvalidLabel(QLogicError, ValueError):
    pass


class MissingElement(QLogicError, KeyError):
    pass


class PreparationNotAtom(QLogicError, ValueError):
    pass


class IndifferenceConflict(QLogicError, ValueError):
    """An indeterminate atom receives different uniform weights from two blocks."""


class SchemaError(QLogicError, ValueError):
    pass


class ValidationError(QLogicError, ValueError):
    pass


class CheckFailed(QLogicError, RuntimeError):
    pass
