"""Exception types raised by the bikefronts library."""


class BikefrontsError(Exception):
    """Base class for all library errors."""


class NullVector(BikefrontsError):
    """Vector too close to the null cone / origin to normalize."""


class WrongSheet(BikefrontsError):
    """Hyperboloid point with z <= 0 (lower sheet or equator)."""


class WrongModel(BikefrontsError):
    """Operation applied to the wrong surface model."""


class SpecInvalid(BikefrontsError):
    """Curve specification violates its validity constraints."""


class NotConvex(BikefrontsError):
    """Curve has negative sampled geodesic curvature where convexity is required."""


class NotProper(BikefrontsError):
    """Curve orientation gives a nonpositive curvature integral."""


class NotHorocyclicallyConvex(BikefrontsError):
    """Hyperbolic curve with sampled |kappa| < 1 somewhere."""


class DegenerateCurve(BikefrontsError):
    """Curve speed vanishes on a whole arc (e.g. a point track)."""


class StepUnstable(BikefrontsError):
    """Steering integration left the sanity window (blowup guard)."""


class NoFixedPoint(BikefrontsError):
    """Monodromy map has no fixed point (elliptic), rear track undefined."""


class NotHyperbolic(BikefrontsError):
    """Monodromy map is not hyperbolic where hyperbolicity is required."""


class ParseError(BikefrontsError):
    """Input file is not valid JSON/CSV."""


class SchemaError(BikefrontsError):
    """Input file parsed but does not match the expected schema."""
