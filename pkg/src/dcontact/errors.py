"""Exception hierarchy shared by every module of the toolkit."""


class DContactError(Exception):
    """Base class for all toolkit errors."""


class AlgebraMismatchError(DContactError):
    """Operands come from incompatible algebras (same symbol name, different grading)."""


class DegreeError(DContactError):
    """A degree or weight constraint was violated."""


class NotAGeneratorError(DContactError):
    pass


class MissingImageError(DContactError):
    pass


class InvalidPointError(DContactError):
    pass


class SchemeError(DContactError):
    """Variable scheme or parity case does not match the requested construction."""


class ChainMapError(DContactError):
    pass


class PreconditionError(DContactError):
    """An operation was called on data violating its documented precondition."""


class DuplicateNameError(DContactError):
    pass


class TowerError(DContactError):
    """Differential images refer to symbols outside the algebra or break the tower order."""


class MasterEquationError(PreconditionError):
    """A Hamiltonian fails the classical master equation."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual
