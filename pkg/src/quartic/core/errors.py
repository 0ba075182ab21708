"""
Exceptions raised by the quartic numerical core.

Every failure the library can signal derives from QuarticError, so callers
(the CLI, the verification suites) can catch one type and report it.

None of them derive from ValueError: raised inside a pydantic validator they
propagate unchanged instead of being folded into a ValidationError.
"""


class QuarticError(Exception):
    """
    Base exception for all numerical-core errors.

    Raised when an operation cannot produce a meaningful result. The suite
    runner catches it and turns it into a failed SuiteResult.
    """

    pass


class DimensionError(QuarticError):
    """Shape, length or subsystem-split mismatch."""

    pass


class HermiticityError(QuarticError):
    """Operator deviates from Hermiticity by more than its tolerance."""

    pass


class DomainError(QuarticError):
    """
    Input lies outside the domain of the operation.

    Examples: entropy of an operator with an eigenvalue below the clamp
    threshold, an invalid density matrix passed where a state is required.
    """

    pass


class EigenSolverError(QuarticError):
    """The eigen-solver failed to converge. Never silently zeroed."""

    pass


class ImpossibleOutcomeError(QuarticError):
    """A measurement outcome has probability below the division threshold."""

    pass


class CombinatorialGuardError(QuarticError):
    """Enumeration requested beyond the supported ambient dimension."""

    pass


class MembershipViolation(QuarticError, AssertionError):
    """
    A pairing that duality guarantees non-negative came out negative.

    This signals a bug in a membership predicate, so it is loud on purpose.
    """

    pass
