"""Exception hierarchy shared by all hyperquad modules."""


class HyperquadError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HyperquadError, ValueError):
    """A point lies outside the domain (|x| > 1, or not on the unit sphere)."""


class QuadratureError(HyperquadError):
    """A quadrature rule could not be constructed or loaded."""


class ExactnessError(HyperquadError):
    """A rule's verified exactness is too low for the requested operation."""


class MZError(HyperquadError):
    """The Marcinkiewicz-Zygmund constant is >= 1, so no error bound applies."""


class CapExceededError(HyperquadError):
    """The polynomial space dimension exceeds the configured cap."""
