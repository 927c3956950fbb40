"""Exception hierarchy.

Errors are split in two families so the command line can map them onto
stable exit codes: bad input data (exit 2) and numerical failure (exit 3).
"""


class SzNagyError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class ValidationError(SzNagyError, ValueError):
    """Input data violates a structural or physical precondition."""

    exit_code = 2


class NumericalError(SzNagyError, ArithmeticError):
    """An algorithm failed to reach its target accuracy."""

    exit_code = 3


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class NotCP(ValidationError):
    pass


class NotContraction(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class IncompleteSet(ValidationError):
    pass


class InvalidState(ValidationError):
    pass


class ZeroMatrix(ValidationError):
    pass


class ParseError(ValidationError):
    """Malformed gate-list text; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class NoConvergence(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass
