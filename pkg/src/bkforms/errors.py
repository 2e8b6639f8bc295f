"""Exception hierarchy for bkforms."""


class BkFormsError(Exception):
    """Base class for all library errors."""


class FrequencyCapExceeded(BkFormsError, ValueError):
    """A Fourier frequency grew past the configured cap."""


class NonInvertibleLeadingCoefficient(BkFormsError, ValueError):
    """The leading coefficient of a series vanishes somewhere on the circle."""


class UnrepresentableResult(BkFormsError, ValueError):
    """The exact result is not a trigonometric polynomial (e.g. 1/g for nonconstant g)."""


class InvalidPolynomial(BkFormsError, ValueError):
    """A reparameterizing polynomial violates P(0) = 0, P'(0) > 0."""


class NotDivisible(BkFormsError, ValueError):
    pass


class InsufficientOrder(BkFormsError, ValueError):
    """A collar density is not known to high enough order in y."""


class DegenerateOnZ(BkFormsError, ValueError):
    """The density A(0, theta) has a zero on some circle of Z."""


class EpsilonOutOfRange(BkFormsError, ValueError):
    pass


class VerificationFailed(BkFormsError, RuntimeError):
    """A self-check failed; this indicates a bug rather than bad input."""


class NotSymplectic(BkFormsError, ValueError):
    pass


class NotPositivelyOriented(BkFormsError, ValueError):
    pass


class WrongPoleOrder(BkFormsError, ValueError):
    pass


class IncompatibleStructures(BkFormsError, ValueError):
    """Two forms do not live on the same (M, Z) model."""


class PathDegenerate(BkFormsError):
    """The straight-line path between two forms leaves the symplectic locus.

    Equivalence is then undecided rather than false.
    """


class SpecValidationError(BkFormsError, ValueError):
    pass
