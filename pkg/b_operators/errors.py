"""Error hierarchy shared by every module.

The CLI maps ``ValidationError`` to exit code 2, ``PreconditionError`` to
exit code 3 and ``InternalInconsistency`` to exit code 1.
"""

from __future__ import annotations


class BOperatorError(Exception):
    """Root of all errors raised by this package."""

    exit_code = 1


class ValidationError(BOperatorError, ValueError):
    """Input data violates a structural axiom or a file format rule."""

    exit_code = 2


class PreconditionError(BOperatorError):
    """Input data is well formed but outside the domain of an operation."""

    exit_code = 3


class InternalInconsistency(BOperatorError, RuntimeError):
    """Two independent computations disagreed."""

    exit_code = 1


# validation errors


class ParseError(ValidationError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str = ""):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class NotIrreducible(ValidationError):
    pass


class NotCommutative(ValidationError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"b_{i}*b_{j} != b_{j}*b_{i}")


class NotAssociative(ValidationError):
    def __init__(self, i: int, j: int, l: int):
        self.i, self.j, self.l = i, j, l
        super().__init__(f"(b_{i}*b_{j})*b_{l} != b_{i}*(b_{j}*b_{l})")


class BadUnit(ValidationError):
    pass


class BadAugmentation(ValidationError):
    def __init__(self, i: int, j: int | None = None):
        self.i, self.j = i, j
        if j is None:
            super().__init__(f"augmentation is not unital (index {i})")
        else:
            super().__init__(f"pi(b_{i}*b_{j}) != pi(b_{i})*pi(b_{j})")


class BasisNotNormalized(ValidationError):
    def __init__(self, i: int, reason: str = ""):
        self.i = i
        super().__init__(reason or f"basis element b_{i} violates pi(b_0)=1, pi(b_i)=0")


class FieldMismatch(ValidationError):
    pass


class RingMismatch(ValidationError):
    pass


class VariableClash(ValidationError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"variable names used twice: {', '.join(self.names)}")


class VariableMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class BadExponent(ValidationError):
    pass


class UnsupportedTower(ValidationError):
    pass


class BadEmbedding(ValidationError):
    pass


class PointNotOnVariety(ValidationError):
    pass


# precondition errors


class PreconditionViolated(PreconditionError):
    pass


class NonLocalFractionUnsupported(PreconditionError):
    pass


class NotInvertible(PreconditionError):
    pass


class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass


class NotAConstant(PreconditionError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"{t} is not a constant of the operator")


class AlreadyPthPower(PreconditionError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"{t} is already a p-th power")


class NotConstantInput(PreconditionError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"vector {i} is not a constant of the semilinear map")


class PrimalityNotAsserted(PreconditionError):
    pass


class TooLarge(PreconditionError):
    pass


class NotAKernel(PreconditionError):
    pass


class GroebnerBudgetExceeded(PreconditionError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"Buchberger step budget of {budget} pairs exhausted")
