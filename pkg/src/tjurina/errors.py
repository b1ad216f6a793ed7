"""Exception hierarchy.

Every error raised by the package derives from :class:`TjurinaError`.  The
three intermediate classes map onto the CLI exit codes: input problems (2),
mathematical preconditions or computational limits (3) and failed internal
cross-checks (4).
"""


class TjurinaError(Exception):
    exit_code = 1


class InputError(TjurinaError):
    exit_code = 2


class ParseError(InputError):
    """Malformed expression; carries the 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownVariable(ParseError):
    pass


class PreconditionError(TjurinaError):
    exit_code = 3


class ZeroPolynomial(PreconditionError):
    pass


class IrrationalCoefficient(PreconditionError):
    """A Newton-Puiseux step needs a root outside Q."""

    def __init__(self, minimal_polynomial):
        self.minimal_polynomial = minimal_polynomial
        super().__init__(
            f"expansion requires a root of the irreducible polynomial "
            f"{minimal_polynomial}, which is not rational"
        )


class NotSquareFree(PreconditionError):
    pass


class NotTransversal(PreconditionError):
    pass


class MissingFactor(PreconditionError):
    pass


class NonFinite(PreconditionError):
    pass


class WrongBranchCount(PreconditionError):
    pass


class GammaTooSmall(PreconditionError):
    pass


class NonIsolated(PreconditionError):
    pass


class ComputationError(TjurinaError):
    exit_code = 3


class TruncationTooSmall(ComputationError):
    pass


class NoConductorInWindow(ComputationError):
    pass


class InconclusiveTruncation(ComputationError):
    pass


class VerificationFailed(TjurinaError):
    exit_code = 4
