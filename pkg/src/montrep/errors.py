"""Exception hierarchy.

Two families matter to callers: ``InputError`` (bad link specs, bad tangle
text, bad parameters) and ``NumericError`` (a computation that could not be
carried out to tolerance).  The CLI maps them to exit codes 2 and 3.
"""


class MontrepError(Exception):
    """Base class for every error raised by montrep."""


class InputError(MontrepError):
    """The request itself is malformed."""


class NumericError(MontrepError, ArithmeticError):
    """A numerical construction failed."""


# ---------------------------------------------------------------------------
# Input errors
# ---------------------------------------------------------------------------

class ParseError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidFraction(InputError):
    pass


class DivisionByZero(InputError, ZeroDivisionError):
    """An intermediate continued fraction vanished and had to be inverted."""


class ArithmeticOverflow(InputError, OverflowError):
    """Continuant intermediates left the signed 64-bit range."""


class ZeroParameter(InputError):
    pass


class InvalidParameter(InputError):
    pass


class NotTraceFree(InputError):
    pass


class InconsistentTrace(InputError):
    """The parameter s does not match -tr(XY)."""


class UsedWrongCase(InputError):
    pass


class NotClosed(InputError):
    pass


# ---------------------------------------------------------------------------
# Numeric errors
# ---------------------------------------------------------------------------

class SingularMatrix(NumericError):
    pass


class SingularBracket(NumericError):
    """A bracket {k}_s needed as a divisor is numerically zero."""


class PropagationOrderError(NumericError):
    """Crossing propagation stalled before every arc was labelled."""


class UnlabeledArc(NumericError, KeyError):
    pass


class DegenerateParameters(NumericError):
    pass


class NoSolution(NumericError):
    pass


class ClosureViolation(NumericError):
    def __init__(self, residual: float, tol: float):
        super().__init__(f"closure residual {residual:.3e} exceeds tolerance {tol:.1e}")
        self.residual = residual
        self.tol = tol
