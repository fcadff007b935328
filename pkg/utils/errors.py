"""
Error Types
Domain exceptions raised by the numerical modules
"""


class DomainError(ValueError):
    """Input outside the domain of a formula (t <= 0, L0 out of range, ...)."""


class ConvexityError(ValueError):
    """Convexity hypothesis violated: negative shape eigenvalue or bending angle outside (0, pi)."""


class DegenerateSurfaceError(ValueError):
    """Id + t^2 B-hat is singular, or the Beltrami coefficient reaches the unit circle."""


class CriticalPointError(ValueError):
    """The map is not locally univalent at the query point (f'(z) = 0)."""


class LaminationError(ValueError):
    """Malformed lamination: linked leaves, bad weights, arc inside a leaf."""


class DerivativeError(RuntimeError):
    """The complex-derivative engine could not certify derivatives (non-holomorphic input)."""


class QuadratureError(RuntimeError):
    """Quadrature did not converge: order doubling disagrees above tolerance."""
