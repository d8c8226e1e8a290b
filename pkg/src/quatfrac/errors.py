"""Exception types shared across the package."""


class QuatFracError(Exception):
    """Base class for all package errors."""


class NotOrthonormal(QuatFracError):
    """Candidate structural set fails the orthonormality test."""


class InvalidExponent(QuatFracError):
    """Jacobi weight exponent out of the admissible range (> -1)."""


class NonFinite(QuatFracError):
    """An integrand returned a non-finite value at a quadrature node."""


class DomainError(QuatFracError):
    """Evaluation point violates a domain precondition (e.g. x <= a)."""


class InvalidOrder(QuatFracError):
    """Fractional order outside the range required by the operation."""


class MissingDerivative(QuatFracError):
    """An analytic derivative of required order was not supplied."""


class OutsideDomain(QuatFracError):
    """Evaluation point lies outside the field's domain."""


class SingularPoint(QuatFracError):
    """Kernel evaluated at (numerically) zero separation."""


class SegmentHitsSingularity(QuatFracError):
    """A fractional-kernel base segment passes too close to the singularity."""


class OnBoundary(QuatFracError):
    """Evaluation point lies (numerically) on the integration boundary."""


class NestingViolation(QuatFracError):
    """Nested boxes are not strictly contained with positive margins."""


class ConfigError(QuatFracError):
    """Invalid scenario configuration; message carries the field path."""
