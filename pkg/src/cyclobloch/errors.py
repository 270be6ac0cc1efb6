"""Exception hierarchy shared across the package."""


class CycloblochError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(CycloblochError):
    """State amplitudes do not match the declared lattice."""


class DegenerateFieldError(CycloblochError):
    """Operation requires a nonzero magnetic flux (alpha != 0)."""


class RegimeMismatchError(CycloblochError):
    """Prediction requested outside its regime of validity."""


class NormDriftError(CycloblochError):
    """Integrator norm error exceeded the per-step tolerance (step too large)."""


class EdgeOverflowError(CycloblochError):
    """Probability reached the lattice guard band; the finite window is too small."""


class TruncationError(CycloblochError):
    """Initial state does not fit on the lattice within the tail-mass budget."""


class InsufficientDataError(CycloblochError):
    """Too few trajectory records for a stable fit."""


class NumericalInconsistencyError(CycloblochError):
    """Internal numerical contract violated (e.g. variance < 0 beyond roundoff)."""


class ConfigError(CycloblochError):
    """Scenario/sweep configuration is malformed or fails validation."""
