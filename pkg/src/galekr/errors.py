"""Exception hierarchy shared across the package."""


class GaleKRError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GaleKRError):
    """A problem file or rational literal could not be parsed."""


class DomainError(GaleKRError):
    """A point lies outside the domain where the expression is defined."""


class InternalError(GaleKRError):
    """An identity that must hold exactly failed; indicates a bug or bad input."""


class LatticeError(GaleKRError):
    """The exponent lattice is not all of Z^n, so Gale duality is not a bijection."""


class RankError(GaleKRError):
    """A matrix does not have the rank required by the construction."""


class SingularError(GaleKRError):
    """No invertible coefficient submatrix exists for the diagonalization."""


class EmptyError(GaleKRError):
    """The positive chamber is empty."""


# Alias kept because both names describe the same condition at different layers.
EmptyChamberError = EmptyError


class UnboundedError(GaleKRError):
    """The chamber is unbounded and no bounding transformation applies."""


class NonGenericError(GaleKRError):
    """The input violates a genericity assumption (common factors, triple incidences)."""


class PrecisionError(GaleKRError):
    """Floating point refinement produced results that could not be certified."""


class DegenerateVertexError(GaleKRError):
    """A vertex of the chamber has a zero exponent on an incident form."""


class SingularPointError(GaleKRError):
    """The gradient vanishes where a tangent direction was requested."""


class LaunchFailure(GaleKRError):
    """Every trial step size at a vertex launch failed to land on the curve."""


class VerificationError(GaleKRError):
    """A structural invariant of the continuation output was violated."""
