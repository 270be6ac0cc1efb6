"""Populations, moments, transport fits, and drive-ratio classification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from .errors import InsufficientDataError, NumericalInconsistencyError
from .lattice import Lattice1D, Lattice2D, State1D, State2D
from .model import RATIONAL_TOL, FrequencyRatio

if TYPE_CHECKING:  # pragma: no cover
    from .propagator import Trajectory

LINEAR_GROWTH = "linear-growth"
BOUNDED_OSCILLATION_FIT = "bounded-oscillation"

#: Minimum number of records inside a fit window.
MIN_FIT_RECORDS = 20

#: Relative growth below which a fitted series counts as non-growing.
GROWTH_THRESHOLD = 0.05


def populations(state: State1D | State2D) -> np.ndarray:
    """Site populations along x: |b_l|^2 in 1D, sum_m |psi_{l,m}|^2 in 2D."""
    if isinstance(state, State2D):
        return np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    return np.abs(state.amplitudes) ** 2


def moments(pops: np.ndarray, lattice) -> tuple[float, float, float]:
    """First moment, second moment, and dispersion of a population sequence.

    `lattice` may be a Lattice1D/Lattice2D (absolute x labels are used) or a
    plain label array. The variance is accumulated in centered form to avoid
    the M2 - M1^2 cancellation, and M2 is reported consistently as
    M1^2 + variance; negative variance beyond roundoff (-1e-12) raises.
    """
    if isinstance(lattice, Lattice1D):
        labels = lattice.labels
    elif isinstance(lattice, Lattice2D):
        labels = lattice.labels_x
    else:
        labels = np.asarray(lattice)
    p = np.asarray(pops, dtype=float)
    if p.shape != labels.shape:
        raise ValueError(f"populations shape {p.shape} vs labels {labels.shape}")
    m1 = float(labels @ p)
    variance = float(((labels - m1) ** 2) @ p)
    if variance < -1e-12:
        raise NumericalInconsistencyError(f"negative variance {variance!r}")
    variance = max(variance, 0.0)
    return m1, m1 * m1 + variance, math.sqrt(variance)


@dataclass(frozen=True)
class FitResult:
    """Least-squares line over a trailing time window of a recorded series."""

    slope: float
    intercept: float
    window: tuple[float, float]
    rms_residual: float
    classification: str

    def __post_init__(self) -> None:
        if not self.window[0] < self.window[1]:
            raise ValueError(f"empty fit window {self.window}")
        if self.rms_residual < 0:
            raise ValueError("rms_residual must be >= 0")


def _fit_line(times: np.ndarray, values: np.ndarray, t_end: float) -> FitResult:
    if times.size < MIN_FIT_RECORDS:
        raise InsufficientDataError(
            f"need >= {MIN_FIT_RECORDS} records in the fit window, got {times.size}"
        )
    slope, intercept = np.polyfit(times, values, 1)
    residuals = values - (slope * times + intercept)
    rms = float(np.sqrt(np.mean(residuals**2)))
    # Non-growing if the extrapolated growth is small against the series level,
    # or if the scatter around the line dominates the fitted growth across the
    # window.
    span = float(times[-1] - times[0])
    mean_level = float(np.mean(np.abs(values)))
    bounded = (slope * t_end < GROWTH_THRESHOLD * mean_level) or (rms > abs(slope) * span)
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        window=(float(times[0]), float(times[-1])),
        rms_residual=rms,
        classification=BOUNDED_OSCILLATION_FIT if bounded else LINEAR_GROWTH,
    )


def fit_drift(trajectory: "Trajectory") -> FitResult:
    """Drift velocity: line through M1(t) over the window [0.2 t_end, t_end]."""
    times = np.asarray(trajectory.times, dtype=float)
    m1 = np.asarray(trajectory.m1, dtype=float)
    t_end = float(times[-1])
    mask = times >= 0.2 * t_end
    return _fit_line(times[mask], m1[mask], t_end)


def fit_ballistic_rate(trajectory: "Trajectory") -> FitResult:
    """Spreading rate: line through sigma(t) over the final half of the records.

    The caller is responsible for a horizon long enough to reach the
    asymptotic regime; the classification only reports what the window shows.
    """
    times = np.asarray(trajectory.times, dtype=float)
    sigma = np.asarray(trajectory.sigma, dtype=float)
    half = times.size // 2
    return _fit_line(times[half:], sigma[half:], float(times[-1]))


def rational_approx(x: float, max_q: int) -> FrequencyRatio:
    """Classify x as rational r/q with q <= max_q, or irrational.

    Takes the best rational approximation with bounded denominator (via
    continued-fraction convergents) and accepts it only if it reproduces x
    to RATIONAL_TOL; coprimality of the result is automatic.
    """
    if not (x >= 0 and math.isfinite(x)):
        raise ValueError(f"ratio must be finite and >= 0, got {x}")
    if max_q < 1:
        raise ValueError(f"max_q must be >= 1, got {max_q}")
    best = Fraction(x).limit_denominator(max_q)
    if abs(x - float(best)) < RATIONAL_TOL:
        return FrequencyRatio.rational(best.numerator, best.denominator)
    return FrequencyRatio.irrational(x)
