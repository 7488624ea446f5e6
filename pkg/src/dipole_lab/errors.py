"""Exception types shared across the package."""


class DipoleLabError(Exception):
    """Base class for all package-specific errors."""


class ConfigParseError(DipoleLabError):
    """The run configuration file is missing, malformed, or inconsistent."""


class UnsupportedConfig(DipoleLabError):
    """A parameter combination lies outside the implemented regime."""


class QuadratureNotConverged(DipoleLabError):
    """Two time-quadrature refinement levels disagree beyond the tolerance."""


class AliasingRisk(DipoleLabError):
    """The field point is too far out for the radial k spacing (undersampled phase)."""


class SingularPoint(DipoleLabError):
    """The evaluation point coincides with a charge position."""


class RootNotBracketed(DipoleLabError):
    """A retarded-time bracket could not be established for a charge."""


class SuperluminalSpec(DipoleLabError):
    """The configured trajectory reaches or exceeds the speed of light."""


class DimensionTooSmall(DipoleLabError):
    """Truncated ladder operators need at least a 2-dimensional basis."""


class PreEmissionTime(DipoleLabError):
    """Canonical variables are only defined after the emission window closes."""
