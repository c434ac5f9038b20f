"""Exception types shared across the package."""


class QsatError(Exception):
    """Base class for all qsat errors."""


class InvalidParametersError(QsatError, ValueError):
    """Rejected construction or generation arguments."""


class InvalidAssignmentError(QsatError, ValueError):
    """Assignment does not match the instance it is evaluated against."""


class TooLargeError(QsatError, ValueError):
    """Problem size exceeds an enumeration or simulation cap."""


class UnsupportedWidthError(QsatError, ValueError):
    """Clause width outside what the operation supports."""


class DimacsParseError(QsatError, ValueError):
    """Malformed DIMACS CNF input."""


class QasmParseError(QsatError, ValueError):
    """Malformed OpenQASM input."""


class BuilderError(QsatError, ValueError):
    """Circuit construction failed (ancilla budget, index clash, ...)."""


class UnsupportedGatesetError(QsatError, ValueError):
    """Unknown transpilation target or export format restriction."""


class NumericalFailureError(QsatError, RuntimeError):
    """A numerical guard tripped (norm drift, non-finite objective)."""
