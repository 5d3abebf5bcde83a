"""Exception hierarchy.

Two families: ``DomainError`` for inputs that violate a documented domain
invariant (CLI exit code 3), ``NumericalError`` for computations that broke
down or produced results contradicting a structural guarantee (exit code 4).
"""


class BOSolitonError(Exception):
    pass


class DomainError(BOSolitonError):
    """Input violates a domain invariant."""


class NumericalError(BOSolitonError):
    """A numerical computation failed or broke a structural guarantee."""


# -- domain errors ----------------------------------------------------------

class DegenerateParameters(DomainError):
    """Poles/roots collide within the degeneracy tolerance."""


class DegreeError(DomainError):
    """Polynomial degree outside the admissible range."""


class NotSquareIntegrable(DomainError):
    """Rational function has a nonzero constant part, hence is not in L2."""


class PoleProximity(DomainError):
    """Evaluation point too close to a pole."""


class OrderingViolation(DomainError):
    """Action variables are not strictly increasing and negative."""


class BoundaryNotDecayed(DomainError):
    """Grid field does not decay at the domain edges."""


class GridMismatch(DomainError):
    """Two grid fields do not share the same grid."""


# -- numerical errors -------------------------------------------------------

class RootFindingFailed(NumericalError):
    """Companion-matrix roots fail the residual bound."""


class InvariantViolation(NumericalError):
    """A structurally guaranteed cancellation or bound failed."""


class DegenerateSpectrum(NumericalError):
    """Eigenvalue gap below the simplicity tolerance."""


class PositivityFailure(NumericalError):
    """An eigenvalue or pairing that must be negative/positive is not."""


class GramIllConditioned(NumericalError):
    """Gram matrix condition number exceeds the trusted range."""


class RootsNotInLowerHalfPlane(NumericalError):
    """Recovered translation-scaling parameters left the lower half-plane."""


class SingularResolvent(NumericalError):
    """Resolvent solve hit a (numerically) singular matrix."""


class FDStepTooLarge(NumericalError):
    """Finite-difference check does not converge when the step shrinks."""


class BlowupDetected(NumericalError):
    """Time integration produced non-finite values."""


class BoundaryContamination(NumericalError):
    """Wave content reached the edges of the periodic domain."""
