"""Finite lattice windows and normalized quantum states on them.

Site indices are absolute labels: the drive phase 2*pi*alpha*l and the tilt
potentials are evaluated on the label l, not on the array position, so a
lattice is a window [lo, hi] of the integer line with `origin` marking the
array position of l = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ShapeError

HARD_WALL = "hard-wall"
PERIODIC = "periodic"

#: Normalization tolerance for freshly constructed / recorded states.
NORM_TOL = 1e-10


@dataclass(frozen=True)
class Lattice1D:
    """Finite hard-wall window of a 1D chain."""

    n_sites: int
    origin: int | None = None  # array index of site l = 0; default: centered
    boundary: str = HARD_WALL

    def __post_init__(self) -> None:
        if self.n_sites < 8:
            raise ValueError(f"n_sites must be >= 8, got {self.n_sites}")
        if self.boundary != HARD_WALL:
            raise ValueError(f"1D lattices are hard-wall only, got {self.boundary!r}")
        if self.origin is None:
            object.__setattr__(self, "origin", self.n_sites // 2)
        if not (0 <= self.origin < self.n_sites):
            raise ValueError("origin must lie inside the window")

    @cached_property
    def labels(self) -> np.ndarray:
        """Absolute site labels l, shape (n_sites,)."""
        labels = np.arange(self.n_sites) - self.origin
        labels.setflags(write=False)
        return labels


@dataclass(frozen=True)
class Lattice2D:
    """Finite window of a square lattice.

    boundary_y may be periodic (required by the y-uniform reduction);
    boundary_x is hard-wall for transport runs, periodic only for oracle
    states that need exact translation invariance.
    """

    n_x: int
    n_y: int
    boundary_x: str = HARD_WALL
    boundary_y: str = HARD_WALL
    origin_x: int | None = None
    origin_y: int | None = None

    def __post_init__(self) -> None:
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError(f"lattice dimensions must be positive, got {self.n_x}x{self.n_y}")
        for name, b in (("boundary_x", self.boundary_x), ("boundary_y", self.boundary_y)):
            if b not in (HARD_WALL, PERIODIC):
                raise ValueError(f"{name} must be {HARD_WALL!r} or {PERIODIC!r}, got {b!r}")
        if self.origin_x is None:
            object.__setattr__(self, "origin_x", self.n_x // 2)
        if self.origin_y is None:
            object.__setattr__(self, "origin_y", self.n_y // 2)
        if not (0 <= self.origin_x < self.n_x and 0 <= self.origin_y < self.n_y):
            raise ValueError("origins must lie inside the window")

    @cached_property
    def labels_x(self) -> np.ndarray:
        labels = np.arange(self.n_x) - self.origin_x
        labels.setflags(write=False)
        return labels

    @cached_property
    def labels_y(self) -> np.ndarray:
        labels = np.arange(self.n_y) - self.origin_y
        labels.setflags(write=False)
        return labels


def _check_norm(amplitudes: np.ndarray) -> None:
    norm2 = float(np.sum(np.abs(amplitudes) ** 2))
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"state not normalized: sum |psi|^2 = {norm2!r}")


@dataclass
class State1D:
    """Complex amplitudes b_l on a Lattice1D at a given time."""

    amplitudes: np.ndarray
    lattice: Lattice1D
    time: float = 0.0

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.lattice.n_sites,):
            raise ShapeError(
                f"amplitudes shape {self.amplitudes.shape} does not match "
                f"lattice with {self.lattice.n_sites} sites"
            )
        _check_norm(self.amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes, lattice: Lattice1D, time: float = 0.0) -> "State1D":
        """Build a state, normalizing the given amplitudes."""
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize a zero state")
        return cls(amps / norm, lattice, time)


@dataclass
class State2D:
    """Complex amplitudes psi_{l,m} on a Lattice2D at a given time."""

    amplitudes: np.ndarray
    lattice: Lattice2D
    time: float = 0.0

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.lattice.n_x, self.lattice.n_y):
            raise ShapeError(
                f"amplitudes shape {self.amplitudes.shape} does not match "
                f"{self.lattice.n_x}x{self.lattice.n_y} lattice"
            )
        _check_norm(self.amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes, lattice: Lattice2D, time: float = 0.0) -> "State2D":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize a zero state")
        return cls(amps / norm, lattice, time)
