class MdtkError(Exception):
    pass


class ValidationError(MdtkError, TypeError):
    pass


class NotModularError(MdtkError, ValueError):
    """Raised when data cannot come from a modular category.

    :param witness: the labels (or values) that showed it, if any.
    """
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegeneracyError(NotModularError):
    pass


class GaloisError(MdtkError, ValueError):
    pass


class DivisionByZero(MdtkError, ZeroDivisionError):
    pass


class NotRealError(MdtkError, ValueError):
    pass


class NotTotallyPositiveError(MdtkError, ValueError):
    pass


class NumericalError(MdtkError, ArithmeticError):
    pass


class ConsistencyError(MdtkError, AssertionError):
    pass


class UnderdeterminedError(MdtkError, ValueError):
    pass


class OutputError(MdtkError, FileExistsError):
    pass
