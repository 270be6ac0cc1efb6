"""Fixed-step RK4 time integration with scheduled observable recording.

The integrator is deliberately plain: classical Runge-Kutta with the drive
evaluated exactly at the substep times, a per-step renormalization guarded
by a hard error threshold, and a guard-band monitor that converts the
infinite-lattice assumption into a runtime contract. Determinism across
repeated runs and across worker counts is part of the contract.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from ._kernels import h1d_rk4_block
from .errors import CycloblochError, EdgeOverflowError, NormDriftError, ShapeError
from .hamiltonian import (
    _h1d_tables,
    h1d_derivative,
    h2d_driven_derivative,
    h2d_static_derivative,
)
from .lattice import HARD_WALL, State1D, State2D
from .model import ModelParams
from .observables import moments

#: Per-step norm drift above which the step size is considered broken.
NORM_DRIFT_TOL = 1e-8

#: Width of the guard band (sites on each edge) and its occupation threshold.
EDGE_GUARD = 5
EDGE_MASS_TOL = 1e-6

TIME_UNIT_NATURAL = "inverse_j"
TIME_UNIT_TJ = "T_J"

HamiltonianLike = Union[str, Callable]


@dataclass(frozen=True)
class TimeGrid:
    """Integration schedule; times in the declared unit ("inverse_j" or "T_J")."""

    t_end: float
    dt: float
    record_every: int = 1
    snapshot_times: tuple[float, ...] = ()
    time_unit: str = TIME_UNIT_NATURAL

    def __post_init__(self) -> None:
        if not (0 < self.dt <= self.t_end):
            raise ValueError(f"need 0 < dt <= t_end, got dt={self.dt}, t_end={self.t_end}")
        if self.t_end / self.dt > 1e9:
            raise ValueError("more than 1e9 steps requested; refusing runaway grid")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.time_unit not in (TIME_UNIT_NATURAL, TIME_UNIT_TJ):
            raise ValueError(f"unknown time unit {self.time_unit!r}")
        snaps = tuple(float(t) for t in self.snapshot_times)
        if list(snaps) != sorted(snaps):
            raise ValueError("snapshot_times must be sorted")
        if snaps and (snaps[0] < 0 or snaps[-1] > self.t_end):
            raise ValueError("snapshot_times must lie within [0, t_end]")
        object.__setattr__(self, "snapshot_times", snaps)

    def resolve(self, params: ModelParams) -> "TimeGrid":
        """Convert to natural (1/J) units."""
        if self.time_unit == TIME_UNIT_NATURAL:
            return self
        tj = params.tunneling_period
        return TimeGrid(
            t_end=self.t_end * tj,
            dt=self.dt * tj,
            record_every=self.record_every,
            snapshot_times=tuple(t * tj for t in self.snapshot_times),
            time_unit=TIME_UNIT_NATURAL,
        )


@dataclass
class Trajectory:
    """Recorded observables of one run (or an ensemble average)."""

    times: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    sigma: np.ndarray
    edge_mass: np.ndarray
    snapshots: dict[float, np.ndarray] = field(default_factory=dict)
    sites: np.ndarray | None = None
    population_series: np.ndarray | None = None
    members: tuple["Trajectory", ...] | None = None


def _resolve_hamiltonian(selector: HamiltonianLike) -> Callable:
    if callable(selector):
        return selector
    if selector == "h1d":
        return h1d_derivative
    if selector == "h2d_driven":
        return h2d_driven_derivative
    if selector == "h2d_static":
        return lambda psi, t, params, lattice: h2d_static_derivative(psi, params, lattice)
    raise ValueError(f"unknown hamiltonian selector {selector!r}")


def _x_populations(amps: np.ndarray) -> np.ndarray:
    if amps.ndim == 2:
        return np.sum(np.abs(amps) ** 2, axis=1)
    return np.abs(amps) ** 2


def _edge_mass(amps: np.ndarray, lattice, guard: int) -> float:
    if guard == 0:
        return 0.0
    pop_x = _x_populations(amps)
    mass = float(np.sum(pop_x[:guard]) + np.sum(pop_x[-guard:]))
    if amps.ndim == 2 and lattice.boundary_y == HARD_WALL:
        pop_y = np.sum(np.abs(amps) ** 2, axis=0)
        mass += float(np.sum(pop_y[:guard]) + np.sum(pop_y[-guard:]))
    return mass


def evolve(
    state: State1D | State2D,
    params: ModelParams,
    grid: TimeGrid,
    hamiltonian: HamiltonianLike = "h1d",
    edge_guard: int = EDGE_GUARD,
    record_populations: bool = False,
):
    """Integrate a state to t_end, recording moments on the grid schedule.

    Returns (final_state, Trajectory). The step count is round(t_end/dt), so
    dt is stretched by at most half a step to divide t_end evenly. Raises
    NormDriftError when one step changes the norm by more than 1e-8 and
    EdgeOverflowError when more than 1e-6 of the probability reaches the
    guard band (pass edge_guard=0 for closed/whole-lattice runs).

    With record_populations=True the full x-population sequence at every
    record time is kept on the trajectory (used for ensemble averaging).
    """
    grid = grid.resolve(params)
    lattice = state.lattice
    if hamiltonian == "h1d" and not isinstance(state, State1D):
        raise ShapeError("hamiltonian 'h1d' needs a State1D")
    n_x = lattice.n_sites if isinstance(state, State1D) else lattice.n_x
    if edge_guard < 0:
        raise ValueError("edge_guard must be >= 0")
    if edge_guard and n_x <= 2 * edge_guard:
        raise ValueError(
            f"lattice with {n_x} sites cannot hold a {edge_guard}-site guard band; "
            "enlarge it or pass edge_guard=0"
        )
    rhs = _resolve_hamiltonian(hamiltonian)

    n_steps = max(1, int(round(grid.t_end / grid.dt)))
    dt = grid.t_end / n_steps
    t0 = float(state.time)
    snap_steps: dict[int, float] = {}
    for t_snap in grid.snapshot_times:
        k = min(n_steps, max(0, int(round(t_snap / dt))))
        snap_steps[k] = t0 + k * dt

    labels = lattice.labels if isinstance(state, State1D) else lattice.labels_x
    times, m1s, m2s, sigmas, edges = [], [], [], [], []
    pop_series: list[np.ndarray] = [] if record_populations else None
    snapshots: dict[float, np.ndarray] = {}

    y = state.amplitudes.copy()

    def record(step: int, t: float) -> None:
        pops = _x_populations(y)
        m1, m2, sigma = moments(pops, labels)
        edge = _edge_mass(y, lattice, edge_guard)
        if edge_guard and edge > EDGE_MASS_TOL:
            raise EdgeOverflowError(
                f"guard-band mass {edge:.3e} exceeds {EDGE_MASS_TOL} at t={t:.6g}; "
                "lattice window too small for this run"
            )
        times.append(t)
        m1s.append(m1)
        m2s.append(m2)
        sigmas.append(sigma)
        edges.append(edge)
        if record_populations:
            pop_series.append(pops)
        if step in snap_steps:
            snapshots[snap_steps[step]] = pops

    record(0, t0)
    stop_steps = sorted(
        ({n_steps} | set(range(grid.record_every, n_steps + 1, grid.record_every)) | set(snap_steps))
        - {0}
    )
    if hamiltonian == "h1d":
        # Fused kernel between record points; same stepping and renorm policy
        # as the generic loop below (equivalence is tested).
        cos_c, sin_c = _h1d_tables(params.alpha, lattice.n_sites, lattice.origin)
        prev = 0
        for stop in stop_steps:
            done, drift = h1d_rk4_block(
                y, cos_c, sin_c,
                params.j_x / 2.0, params.j_y, params.omega_x, params.omega_y,
                t0 + prev * dt, dt, stop - prev, NORM_DRIFT_TOL,
            )
            if done < stop - prev:
                raise NormDriftError(
                    f"norm drifted by {drift:.3e} in one step at "
                    f"t={t0 + (prev + done) * dt:.6g}; reduce dt"
                )
            record(stop, t0 + stop * dt)
            prev = stop
    else:
        half_dt = 0.5 * dt
        for step in range(1, n_steps + 1):
            t = t0 + (step - 1) * dt
            k1 = rhs(y, t, params, lattice)
            k2 = rhs(y + half_dt * k1, t + half_dt, params, lattice)
            k3 = rhs(y + half_dt * k2, t + half_dt, params, lattice)
            k4 = rhs(y + dt * k3, t + dt, params, lattice)
            y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            norm = float(np.linalg.norm(y))
            if abs(norm - 1.0) > NORM_DRIFT_TOL:
                raise NormDriftError(
                    f"norm drifted by {abs(norm - 1.0):.3e} in one step at t={t + dt:.6g}; "
                    "reduce dt"
                )
            y /= norm
            if step % grid.record_every == 0 or step == n_steps or step in snap_steps:
                record(step, t0 + step * dt)

    final = type(state)(y, lattice, t0 + grid.t_end)
    traj = Trajectory(
        times=np.asarray(times),
        m1=np.asarray(m1s),
        m2=np.asarray(m2s),
        sigma=np.asarray(sigmas),
        edge_mass=np.asarray(edges),
        snapshots=snapshots,
        sites=np.asarray(labels),
        population_series=np.asarray(pop_series) if record_populations else None,
    )
    return final, traj


def _evolve_member(args):
    index, amps, lattice, params, grid, hamiltonian, edge_guard, seed = args
    try:
        _, traj = evolve(
            State1D(amps, lattice),
            params,
            grid,
            hamiltonian=hamiltonian,
            edge_guard=edge_guard,
            record_populations=True,
        )
    except CycloblochError as exc:
        raise type(exc)(f"realization {index} (ensemble seed {seed}): {exc}") from exc
    return traj


def evolve_ensemble(
    ensemble,
    params: ModelParams,
    grid: TimeGrid,
    hamiltonian: HamiltonianLike = "h1d",
    edge_guard: int = EDGE_GUARD,
    workers: int = 1,
    keep_members: bool = False,
) -> Trajectory:
    """Evolve every realization and average populations before taking moments.

    The member populations are summed in realization order, so the result is
    bit-identical for any worker count. Member failures propagate annotated
    with the realization index and the ensemble seed.
    """
    members = ensemble.members
    if not members:
        raise ValueError("ensemble has no realizations")
    grid = grid.resolve(params)
    jobs = [
        (i, m.amplitudes, m.lattice, params, grid, hamiltonian, edge_guard, ensemble.seed)
        for i, m in enumerate(members)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trajs = list(pool.map(_evolve_member, jobs))
    else:
        trajs = [_evolve_member(job) for job in jobs]

    n = len(trajs)
    pops_sum = np.zeros_like(trajs[0].population_series)
    edge_sum = np.zeros_like(trajs[0].edge_mass)
    for traj in trajs:
        pops_sum += traj.population_series
        edge_sum += traj.edge_mass
    pops_mean = pops_sum / n
    labels = trajs[0].sites
    times = trajs[0].times
    m1s, m2s, sigmas = [], [], []
    for pops in pops_mean:
        m1, m2, sigma = moments(pops, labels)
        m1s.append(m1)
        m2s.append(m2)
        sigmas.append(sigma)

    snapshots: dict[float, np.ndarray] = {}
    for t_snap in trajs[0].snapshots:
        acc = np.zeros_like(trajs[0].snapshots[t_snap])
        for traj in trajs:
            acc += traj.snapshots[t_snap]
        snapshots[t_snap] = acc / n

    if not keep_members:
        for traj in trajs:
            traj.population_series = None
    return Trajectory(
        times=times,
        m1=np.asarray(m1s),
        m2=np.asarray(m2s),
        sigma=np.asarray(sigmas),
        edge_mass=edge_sum / n,
        snapshots=snapshots,
        sites=labels,
        members=tuple(trajs) if keep_members else None,
    )
