"""Exception types raised across the package."""


class ThreeZoneError(Exception):
    """Base class for all package-specific errors."""


class DegenerateZone(ThreeZoneError):
    """Outer zone with a^2 + b*c = 0: neither saddle nor center."""


class HypothesisViolation(ThreeZoneError):
    """System fails a structural requirement (empty annulus, b <= 0, ...)."""


class OutsideZone(ThreeZoneError):
    """Initial point handed to a zone flow lies outside that zone."""


class OutOfAnnulus(ThreeZoneError):
    """Energy ordinate h outside the periodic-annulus interval."""


class DomainError(ThreeZoneError):
    """Argument outside a basis function's domain."""


class QuadratureNonConvergence(ThreeZoneError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class FitResidualTooLarge(ThreeZoneError):
    """Least-squares recovery of coefficients left a residual above gate."""


class ClassMismatch(ThreeZoneError):
    """Operation applied to a system of the wrong saddle/center class."""


class RankDeficient(ThreeZoneError):
    """Coefficient Jacobian does not have full rank 5."""


class TargetNotSupported(ThreeZoneError):
    """Requested zero configuration not admissible for this system."""


class LadderFailed(ThreeZoneError):
    """Constructive realization did not reach the target configuration."""


class WindowTooLarge(ThreeZoneError):
    """Zero-counting window extends beyond the valid annulus range."""


class TangencyEncountered(ThreeZoneError):
    """Trajectory met a switching line with near-zero normal velocity."""


class Escape(ThreeZoneError):
    """Trajectory left the configured bounding box."""


class BracketLost(ThreeZoneError):
    """Displacement sign change vanished near a predicted Melnikov zero."""


class ParseError(ThreeZoneError):
    """Malformed system specification file."""
