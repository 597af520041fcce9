"""Exception hierarchy.

Validation errors map to CLI exit code 2, numerical-applicability errors to
exit code 3.
"""


class OscnetError(Exception):
    exit_code = 1


class ValidationError(OscnetError, ValueError):
    exit_code = 2


class NumericalError(OscnetError, ArithmeticError):
    exit_code = 3


class IndexOutOfRange(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class SelfLoop(ValidationError):
    pass


class InvalidWeight(ValidationError):
    pass


class InvalidSize(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NegativeSqNorm(ValidationError):
    pass


class InvalidB(ValidationError):
    pass


class ZeroOutDegree(NumericalError):
    def __init__(self, node):
        self.node = node
        super().__init__(
            f"node {node} has zero out-degree; semi-normalized Laplacian is undefined"
        )


class ComplexSpectrum(NumericalError):
    pass


class NotDiagonalizable(NumericalError):
    pass


class NegativeEigenvalue(NumericalError):
    pass


class UnstableStep(NumericalError):
    pass


class Unsupported(NumericalError):
    pass


class SolverInapplicable(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass
