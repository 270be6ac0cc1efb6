"""Physical parameters and closed-form transport predictions.

Unit convention used throughout the package: hbar = e = a = 1. Energies are
measured in units of the hopping element, frequencies in units of J/hbar,
time in units of hbar/J. The natural display unit for time series is the
tunneling period T_J = 2*pi/j_x, reported alongside raw times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateFieldError, RegimeMismatchError

#: Relative half-width of the band around the critical frequency that is
#: reported as Critical instead of forcing a slow/fast call.
REGIME_BAND = 0.05

#: Tolerance used to accept a continued-fraction convergent as exact.
RATIONAL_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Drive and lattice parameters of the driven-lattice model.

    j_x, j_y    hopping elements along x and y (units of J); zero is allowed
                for degenerate/oracle configurations, negative is not
    alpha       Peierls phase, magnetic flux quanta per unit cell; any finite
                real, rationality is not required
    omega_x/y   Bloch frequencies of the static force components (units J/hbar);
                signs are fixed by the drive phase convention, so negative
                values are rejected rather than normalized
    """

    j_x: float = 1.0
    j_y: float = 1.0
    alpha: float = 0.1
    omega_x: float = 0.0
    omega_y: float = 0.0

    def __post_init__(self) -> None:
        if not (self.j_x >= 0 and self.j_y >= 0):
            raise ValueError(f"hopping elements must be >= 0, got j_x={self.j_x}, j_y={self.j_y}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")
        if self.omega_x < 0 or self.omega_y < 0:
            raise ValueError(
                f"Bloch frequencies must be >= 0, got omega_x={self.omega_x}, omega_y={self.omega_y}"
            )

    @property
    def tunneling_period(self) -> float:
        """T_J = h/J = 2*pi/j_x in hbar=1 units."""
        if self.j_x == 0:
            raise ValueError("tunneling period undefined for j_x = 0")
        return 2.0 * math.pi / self.j_x

    @property
    def magnetic_period(self) -> float:
        """Spatial period d = 1/alpha (sites) of the synthetic cosine potential."""
        if self.alpha == 0:
            raise DegenerateFieldError("magnetic period undefined for alpha = 0")
        return 1.0 / abs(self.alpha)


class Regime(Enum):
    SLOW_DRIVING = "slow-driving"
    FAST_DRIVING = "fast-driving"
    CRITICAL = "critical"


class BoundedOscillation:
    """Marker: dispersion oscillates in time, no asymptotic linear growth."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BoundedOscillation"


#: Singleton returned by predicted_ballistic_rate for irrational drive ratios.
BOUNDED_OSCILLATION = BoundedOscillation()


@dataclass(frozen=True)
class FrequencyRatio:
    """Classification of the drive-frequency ratio omega_x/omega_y.

    Rational r/q (coprime, r >= 0) carries the spreading exponent
    nu = r + q - 1. r = 0 with q = 1 encodes the axis-aligned drive
    (omega_x = 0), whose ballistic rate is a special constant rather than
    a power law. Irrational ratios carry only their value; nu is None.
    """

    kind: str  # "rational" | "irrational"
    r: int | None = None
    q: int | None = None
    value: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.r is None or self.q is None or self.q < 1 or self.r < 0:
                raise ValueError(f"rational ratio needs r >= 0, q >= 1, got r={self.r}, q={self.q}")
            if math.gcd(self.r, self.q) != 1:
                raise ValueError(f"r={self.r}, q={self.q} are not coprime")
        elif self.kind == "irrational":
            if self.value is None or not math.isfinite(self.value):
                raise ValueError("irrational ratio needs a finite value")
        else:
            raise ValueError(f"unknown ratio kind {self.kind!r}")

    @property
    def nu(self) -> int | None:
        """Spreading-suppression exponent r + q - 1; None for irrational ratios."""
        if self.kind == "rational":
            return self.r + self.q - 1
        return None

    def as_float(self) -> float:
        return self.r / self.q if self.kind == "rational" else float(self.value)

    @staticmethod
    def rational(r: int, q: int) -> "FrequencyRatio":
        return FrequencyRatio(kind="rational", r=r, q=q)

    @staticmethod
    def irrational(value: float) -> "FrequencyRatio":
        return FrequencyRatio(kind="irrational", value=value)


def critical_frequency(params: ModelParams) -> float:
    """Boundary 2*pi*alpha*j_x between the slow- and fast-driving regimes.

    Defined with j_x; the source model sets j_x = j_y, and the anisotropic
    threshold is a convention of this package.
    """
    return 2.0 * math.pi * abs(params.alpha) * params.j_x


def drive_magnitude(params: ModelParams) -> float:
    """Total drive frequency omega = sqrt(omega_x^2 + omega_y^2)."""
    return math.hypot(params.omega_x, params.omega_y)


def classify_regime(params: ModelParams, band: float = REGIME_BAND) -> Regime:
    """Slow/fast/critical call with a relative dead band around omega_cr."""
    omega = drive_magnitude(params)
    omega_cr = critical_frequency(params)
    if omega < omega_cr * (1.0 - band):
        return Regime.SLOW_DRIVING
    if omega > omega_cr * (1.0 + band):
        return Regime.FAST_DRIVING
    return Regime.CRITICAL


def predicted_drift_velocity(params: ModelParams) -> float:
    """Drift velocity omega_y / (2*pi*alpha) of the transporting packet, in sites
    per unit time. Multiply by the tunneling period for sites per T_J."""
    if params.alpha == 0:
        raise DegenerateFieldError("no cyclotron drift without magnetic field (alpha = 0)")
    return params.omega_y / (2.0 * math.pi * params.alpha)


def predicted_ballistic_rate(
    params: ModelParams, ratio: FrequencyRatio
) -> float | BoundedOscillation:
    """Asymptotic dispersion growth rate in the fast-driving regime.

    Returns sites per unit time: j_x/sqrt(2) for an axis-aligned drive
    (omega_x = 0, the free-spreading limit), (j_x/2)*(j_y/omega)**nu for a
    rational ratio r/q with nu = r + q - 1, and the BOUNDED_OSCILLATION
    marker for irrational ratios. The power law is reached only at
    algebraically large times; callers own the horizon choice.
    """
    regime = classify_regime(params)
    if regime is not Regime.FAST_DRIVING:
        raise RegimeMismatchError(
            f"ballistic rate is a fast-driving prediction; regime is {regime.value}"
        )
    if params.omega_x == 0 or (ratio.kind == "rational" and ratio.r == 0):
        return params.j_x / math.sqrt(2.0)
    if params.omega_y == 0:
        raise ValueError("drive along x only (omega_y = 0) has no spreading prediction")
    if ratio.kind == "irrational":
        return BOUNDED_OSCILLATION
    omega = drive_magnitude(params)
    return (params.j_x / 2.0) * (params.j_y / omega) ** ratio.nu
