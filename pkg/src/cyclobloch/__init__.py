"""Wave-packet dynamics in driven 1D and field-subjected 2D tight-binding
lattices: Hamiltonians, RK4 propagation, Monte-Carlo ensembles, transport
observables, and reproducible experiment presets."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    CycloblochError,
    DegenerateFieldError,
    EdgeOverflowError,
    InsufficientDataError,
    NormDriftError,
    NumericalInconsistencyError,
    RegimeMismatchError,
    ShapeError,
    TruncationError,
)
from .hamiltonian import apply_h1d, apply_h2d_driven, apply_h2d_static, gauge_map
from .lattice import Lattice1D, Lattice2D, State1D, State2D
from .model import (
    BOUNDED_OSCILLATION,
    FrequencyRatio,
    ModelParams,
    Regime,
    classify_regime,
    critical_frequency,
    drive_magnitude,
    predicted_ballistic_rate,
    predicted_drift_velocity,
)
from .observables import (
    FitResult,
    fit_ballistic_rate,
    fit_drift,
    moments,
    populations,
    rational_approx,
)
from .propagator import TimeGrid, Trajectory, evolve, evolve_ensemble
from .states import (
    Ensemble,
    GaussianSpec,
    coherent_gaussian,
    embed_y_uniform,
    incoherent_ensemble,
    transporting_width,
    wide_width,
)

__all__ = [
    "__version__",
    "BOUNDED_OSCILLATION",
    "ConfigError",
    "CycloblochError",
    "DegenerateFieldError",
    "EdgeOverflowError",
    "Ensemble",
    "FitResult",
    "FrequencyRatio",
    "GaussianSpec",
    "InsufficientDataError",
    "Lattice1D",
    "Lattice2D",
    "ModelParams",
    "NormDriftError",
    "NumericalInconsistencyError",
    "Regime",
    "RegimeMismatchError",
    "ShapeError",
    "State1D",
    "State2D",
    "TimeGrid",
    "Trajectory",
    "TruncationError",
    "apply_h1d",
    "apply_h2d_driven",
    "apply_h2d_static",
    "classify_regime",
    "coherent_gaussian",
    "critical_frequency",
    "drive_magnitude",
    "embed_y_uniform",
    "evolve",
    "evolve_ensemble",
    "fit_ballistic_rate",
    "fit_drift",
    "gauge_map",
    "incoherent_ensemble",
    "moments",
    "populations",
    "predicted_ballistic_rate",
    "predicted_drift_velocity",
    "rational_approx",
    "transporting_width",
    "wide_width",
]
