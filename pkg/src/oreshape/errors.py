"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class so
the CLI can map it to a stable exit code. All inherit from OreShapeError.
"""


class OreShapeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OreShapeError):
    """Malformed operator text or ideal file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class ArityError(OreShapeError):
    """A symbol refers to a parameter index outside 1..nvars, or operator

    arities are mixed within one computation."""


class DivisionByZero(OreShapeError, ZeroDivisionError):
    """Division by the zero polynomial or zero rational function."""


class PoleAtPoint(OreShapeError):
    """A rational function was evaluated where its denominator vanishes."""


class PoleAtOrigin(PoleAtPoint):
    """A coefficient has no power series expansion at the origin."""


class NonOrdinaryOrigin(OreShapeError):
    """Series solving needed a quotient-action coordinate with a pole at 0."""


class NotZeroDimensional(OreShapeError):
    """The quotient by the ideal is not finite dimensional over K."""


class NotNormalPosition(OreShapeError):
    """The elimination operator has order strictly less than the quotient
    dimension, so no shape basis exists for this ideal as given."""


class NotCyclic(OreShapeError):
    """The proposed vector does not generate the quotient under the action
    of the main derivative."""


class DegreeCapExceeded(OreShapeError):
    """Groebner completion produced an operator above the configured order
    cap; raised instead of looping on pathological input."""


class TruncationTooSmall(OreShapeError):
    """A series computation cannot guarantee even one correct coefficient at
    the requested truncation order."""


class NormalizationFailed(OreShapeError):
    """No sampled shear reached normal position within the attempt budget.

    Inconclusive by design: exhausting the budget proves nothing about
    whether a suitable shear exists."""


class CyclicVectorNotFound(OreShapeError):
    """No cyclic vector was found within the attempt budget (inconclusive)."""
