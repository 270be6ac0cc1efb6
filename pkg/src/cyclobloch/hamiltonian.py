"""Right-hand sides of the three lattice Schrödinger equations.

All functions return the time derivative of the amplitudes, i.e.
d(psi)/dt = -i H(t) psi, for

* the driven 1D chain
      i db_l/dt = -(j_x/2)(e^{-i w_x t} b_{l+1} + e^{+i w_x t} b_{l-1})
                  - j_y cos(2 pi alpha l - w_y t) b_l,
* its driven 2D parent
      i dpsi_{l,m}/dt = -(j_x/2)(e^{-i w_x t} psi_{l+1,m} + h.c.)
                        -(j_y/2)(e^{i(2 pi alpha l - w_y t)} psi_{l,m+1} + h.c.),
* and the static-field 2D form
      i dpsi_{l,m}/dt = -(j_x/2)(psi_{l+1,m} + psi_{l-1,m})
                        -(j_y/2)(e^{i 2 pi alpha l} psi_{l,m+1} + h.c.)
                        + (w_x l + w_y m) psi_{l,m}.

Hard-wall boundaries drop hopping terms that reference sites outside the
window; periodic boundaries wrap them. Site labels l, m are absolute
(relative to the lattice origin), which keeps the Peierls phase and the
tilt potential physical under window translation.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import ShapeError
from .lattice import PERIODIC, Lattice1D, Lattice2D, State1D, State2D
from .model import ModelParams

TWO_PI = 2.0 * math.pi

TO_DRIVEN = "to_driven"
TO_STATIC = "to_static"


@lru_cache(maxsize=64)
def _h1d_tables(alpha: float, n_sites: int, origin: int) -> tuple[np.ndarray, np.ndarray]:
    """cos/sin of the Peierls argument 2 pi alpha l, so the moving potential
    cos(2 pi alpha l - w_y t) costs two scalar trig calls per evaluation."""
    arg = TWO_PI * alpha * (np.arange(n_sites) - origin)
    cos_c, sin_c = np.cos(arg), np.sin(arg)
    cos_c.setflags(write=False)
    sin_c.setflags(write=False)
    return cos_c, sin_c


def h1d_derivative(
    amps: np.ndarray,
    t: float,
    params: ModelParams,
    lattice: Lattice1D,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Raw-array derivative for the driven 1D chain."""
    if amps.shape != (lattice.n_sites,):
        raise ShapeError(f"amplitudes {amps.shape} vs lattice ({lattice.n_sites},)")
    deriv = np.zeros_like(amps) if out is None else out
    if params.j_x != 0.0:
        fwd = (params.j_x / 2.0) * np.exp(-1j * params.omega_x * t)
        np.multiply(amps[1:], fwd, out=deriv[:-1])
        deriv[-1] = 0.0
        deriv[1:] += np.conj(fwd) * amps[:-1]
    elif out is not None:
        deriv[:] = 0.0
    if params.j_y != 0.0:
        cos_c, sin_c = _h1d_tables(params.alpha, lattice.n_sites, lattice.origin)
        wt = params.omega_y * t
        onsite = (params.j_y * math.cos(wt)) * cos_c
        onsite += (params.j_y * math.sin(wt)) * sin_c
        deriv += onsite * amps
    deriv *= 1j
    return deriv


def h2d_driven_derivative(
    psi: np.ndarray, t: float, params: ModelParams, lattice: Lattice2D
) -> np.ndarray:
    """Raw-array derivative for the driven 2D lattice."""
    if psi.shape != (lattice.n_x, lattice.n_y):
        raise ShapeError(f"amplitudes {psi.shape} vs lattice ({lattice.n_x}, {lattice.n_y})")
    deriv = np.zeros_like(psi)
    if params.j_x != 0.0:
        fwd = (params.j_x / 2.0) * np.exp(-1j * params.omega_x * t)
        if lattice.boundary_x == PERIODIC:
            deriv += fwd * np.roll(psi, -1, axis=0) + np.conj(fwd) * np.roll(psi, 1, axis=0)
        else:
            deriv[:-1, :] += fwd * psi[1:, :]
            deriv[1:, :] += np.conj(fwd) * psi[:-1, :]
    if params.j_y != 0.0:
        up = (params.j_y / 2.0) * np.exp(
            1j * (TWO_PI * params.alpha * lattice.labels_x - params.omega_y * t)
        )
        up = up[:, None]
        if lattice.boundary_y == PERIODIC:
            deriv += up * np.roll(psi, -1, axis=1) + np.conj(up) * np.roll(psi, 1, axis=1)
        else:
            deriv[:, :-1] += up * psi[:, 1:]
            deriv[:, 1:] += np.conj(up) * psi[:, :-1]
    deriv *= 1j
    return deriv


def h2d_static_derivative(
    psi: np.ndarray, params: ModelParams, lattice: Lattice2D
) -> np.ndarray:
    """Raw-array derivative for the static-field 2D lattice (time-independent)."""
    if psi.shape != (lattice.n_x, lattice.n_y):
        raise ShapeError(f"amplitudes {psi.shape} vs lattice ({lattice.n_x}, {lattice.n_y})")
    deriv = np.zeros_like(psi)
    if params.j_x != 0.0:
        half = params.j_x / 2.0
        if lattice.boundary_x == PERIODIC:
            deriv += half * (np.roll(psi, -1, axis=0) + np.roll(psi, 1, axis=0))
        else:
            deriv[:-1, :] += half * psi[1:, :]
            deriv[1:, :] += half * psi[:-1, :]
    if params.j_y != 0.0:
        up = (params.j_y / 2.0) * np.exp(1j * TWO_PI * params.alpha * lattice.labels_x)
        up = up[:, None]
        if lattice.boundary_y == PERIODIC:
            deriv += up * np.roll(psi, -1, axis=1) + np.conj(up) * np.roll(psi, 1, axis=1)
        else:
            deriv[:, :-1] += up * psi[:, 1:]
            deriv[:, 1:] += np.conj(up) * psi[:, :-1]
    potential = params.omega_x * lattice.labels_x[:, None] + params.omega_y * lattice.labels_y
    deriv -= potential * psi
    deriv *= 1j
    return deriv


def apply_h1d(state: State1D, t: float, params: ModelParams) -> np.ndarray:
    """Derivative db/dt of a 1D state under the driven chain Hamiltonian."""
    return h1d_derivative(state.amplitudes, t, params, state.lattice)


def apply_h2d_driven(state: State2D, t: float, params: ModelParams) -> np.ndarray:
    """Derivative dpsi/dt of a 2D state under the driven Hamiltonian."""
    return h2d_driven_derivative(state.amplitudes, t, params, state.lattice)


def apply_h2d_static(state: State2D, params: ModelParams) -> np.ndarray:
    """Derivative dpsi/dt of a 2D state under the static-field Hamiltonian."""
    return h2d_static_derivative(state.amplitudes, params, state.lattice)


def gauge_map(state: State2D, t: float, params: ModelParams, direction: str) -> State2D:
    """Phase map between the static-field and driven 2D frames.

    to_driven multiplies amplitudes by exp(+i(w_x l + w_y m) t), to_static by
    the conjugate; the two compose to the identity and populations are
    untouched. A static-frame solution, pushed through to_driven at time t,
    equals the driven-frame solution started from the same t=0 state.
    """
    if direction not in (TO_DRIVEN, TO_STATIC):
        raise ValueError(f"direction must be {TO_DRIVEN!r} or {TO_STATIC!r}, got {direction!r}")
    lattice = state.lattice
    arg = params.omega_x * lattice.labels_x[:, None] + params.omega_y * lattice.labels_y
    sign = 1j if direction == TO_DRIVEN else -1j
    return State2D(state.amplitudes * np.exp(sign * arg * t), lattice, state.time)
