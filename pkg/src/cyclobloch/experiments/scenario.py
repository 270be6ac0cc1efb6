"""Serializable experiment descriptions.

A Scenario is one complete run: parameters, initial packet, time grid,
Hamiltonian choice, lattice (explicit or "auto"), seed, and the artifact
list. A Sweep varies the drive magnitude at fixed direction (or vice
versa); a SweepGroup bundles the per-ratio branches of one figure into a
single result table. The YAML config dialect round-trips every field
losslessly and is the only on-disk format.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from ..errors import ConfigError
from ..lattice import Lattice1D, Lattice2D
from ..model import ModelParams
from ..propagator import TimeGrid
from ..states import GaussianSpec

SCENARIO_SCHEMA = "cyclobloch-scenario-v1"
SWEEP_SCHEMA = "cyclobloch-sweep-v1"
SWEEP_GROUP_SCHEMA = "cyclobloch-sweep-group-v1"

OUTPUT_KINDS = ("trajectory_csv", "snapshot_csv", "summary_json")

AXIS_OMEGA = "omega"
AXIS_RATIO = "ratio"

HORIZON_FIXED = "fixed"
HORIZON_ASYMPTOTIC = "asymptotic"

#: Floor (in tunneling periods) and scale of the per-point horizon rule used
#: by rate sweeps: t_end = max(RATE_FLOOR_TJ, RATE_SCALE_TJ * (omega/j_y)**nu).
RATE_FLOOR_TJ = 300.0
RATE_SCALE_TJ = 20.0


@dataclass(frozen=True)
class Scenario:
    """One fully specified, reproducible simulation run."""

    name: str
    params: ModelParams
    initial: GaussianSpec
    grid: TimeGrid
    hamiltonian: str = "h1d"
    lattice: Lattice1D | Lattice2D | str = "auto"
    seed: int = 0
    outputs: tuple[str, ...] = OUTPUT_KINDS

    def __post_init__(self) -> None:
        if self.hamiltonian not in ("h1d", "h2d_driven", "h2d_static"):
            raise ConfigError(f"unknown hamiltonian {self.hamiltonian!r}")
        if isinstance(self.lattice, str) and self.lattice != "auto":
            raise ConfigError(f"lattice must be explicit or 'auto', got {self.lattice!r}")
        bad = set(self.outputs) - set(OUTPUT_KINDS)
        if bad:
            raise ConfigError(f"unknown outputs {sorted(bad)}")
        object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass(frozen=True)
class Sweep:
    """A family of scenarios along one drive axis.

    axis="omega" scans the drive magnitude at fixed ratio omega_x/omega_y;
    axis="ratio" scans the ratio at fixed magnitude. horizon="asymptotic"
    stretches each point's t_end to max(300, 20 (omega/j_y)^nu) tunneling
    periods so rate fits approach the asymptotic regime.
    """

    name: str
    base: Scenario
    axis: str
    values: tuple[float, ...]
    ratio: float | None = None
    omega: float | None = None
    horizon: str = HORIZON_FIXED

    def __post_init__(self) -> None:
        if self.axis not in (AXIS_OMEGA, AXIS_RATIO):
            raise ConfigError(f"axis must be 'omega' or 'ratio', got {self.axis!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 1 or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError("sweep values must be strictly increasing and nonempty")
        object.__setattr__(self, "values", vals)
        if self.axis == AXIS_OMEGA:
            if self.ratio is None or self.ratio < 0:
                raise ConfigError("omega sweep needs a fixed ratio >= 0")
        else:
            if self.omega is None or self.omega <= 0:
                raise ConfigError("ratio sweep needs a fixed omega > 0")
        if self.horizon not in (HORIZON_FIXED, HORIZON_ASYMPTOTIC):
            raise ConfigError(f"unknown horizon rule {self.horizon!r}")

    @property
    def grid(self) -> TimeGrid:
        return self.base.grid

    @property
    def params(self) -> ModelParams:
        return self.base.params


@dataclass(frozen=True)
class SweepGroup:
    """Per-ratio branches of one figure, reported in a single table."""

    name: str
    sweeps: tuple[Sweep, ...]

    def __post_init__(self) -> None:
        if not self.sweeps:
            raise ConfigError("sweep group needs at least one sweep")
        object.__setattr__(self, "sweeps", tuple(self.sweeps))

    @property
    def grid(self) -> TimeGrid:
        return self.sweeps[0].base.grid

    @property
    def params(self) -> ModelParams:
        return self.sweeps[0].base.params


def drive_components(omega: float, ratio: float) -> tuple[float, float]:
    """(omega_x, omega_y) with magnitude omega and omega_x/omega_y = ratio."""
    omega_y = omega / (1.0 + ratio * ratio) ** 0.5
    return ratio * omega_y, omega_y


def sweep_point(sweep: Sweep, value: float) -> Scenario:
    """Materialize one sweep point as a standalone scenario."""
    if sweep.axis == AXIS_OMEGA:
        omega, ratio = float(value), float(sweep.ratio)
    else:
        omega, ratio = float(sweep.omega), float(value)
    omega_x, omega_y = drive_components(omega, ratio)
    params = replace(sweep.base.params, omega_x=omega_x, omega_y=omega_y)
    grid = sweep.base.grid
    if sweep.horizon == HORIZON_ASYMPTOTIC:
        from ..observables import rational_approx  # cycle-free at runtime

        approx = rational_approx(ratio, max_q=100)
        nu = approx.nu if approx.kind == "rational" else 0
        t_end_tj = max(RATE_FLOOR_TJ, RATE_SCALE_TJ * (omega / params.j_y) ** nu)
        base = grid.resolve(params)
        tj = params.tunneling_period
        grid = TimeGrid(
            t_end=t_end_tj * tj,
            dt=base.dt,
            record_every=base.record_every,
            snapshot_times=tuple(min(t, t_end_tj * tj) for t in base.snapshot_times),
        )
    return replace(
        sweep.base,
        name=f"{sweep.name}_{sweep.axis}_{value:g}",
        params=params,
        grid=grid,
    )


# --- dict <-> object conversion -------------------------------------------


def _params_to_dict(p: ModelParams) -> dict:
    return {
        "j_x": p.j_x,
        "j_y": p.j_y,
        "alpha": p.alpha,
        "omega_x": p.omega_x,
        "omega_y": p.omega_y,
    }


def _initial_to_dict(s: GaussianSpec) -> dict:
    return {
        "center": s.center,
        "sigma0": s.sigma0,
        "phases": s.phases,
        "seed": s.seed,
        "n_realizations": s.n_realizations,
    }


def _grid_to_dict(g: TimeGrid) -> dict:
    return {
        "t_end": g.t_end,
        "dt": g.dt,
        "record_every": g.record_every,
        "snapshot_times": list(g.snapshot_times),
        "time_unit": g.time_unit,
    }


def _lattice_to_dict(lat) -> dict | str:
    if isinstance(lat, str):
        return lat
    if isinstance(lat, Lattice1D):
        return {"kind": "1d", "n_sites": lat.n_sites, "origin": lat.origin}
    return {
        "kind": "2d",
        "n_x": lat.n_x,
        "n_y": lat.n_y,
        "boundary_x": lat.boundary_x,
        "boundary_y": lat.boundary_y,
        "origin_x": lat.origin_x,
        "origin_y": lat.origin_y,
    }


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "schema": SCENARIO_SCHEMA,
        "name": s.name,
        "seed": s.seed,
        "hamiltonian": s.hamiltonian,
        "params": _params_to_dict(s.params),
        "initial": _initial_to_dict(s.initial),
        "grid": _grid_to_dict(s.grid),
        "lattice": _lattice_to_dict(s.lattice),
        "outputs": list(s.outputs),
    }


def _build(cls, kwargs: dict, what: str):
    try:
        return cls(**kwargs)
    except (TypeError, ValueError, ConfigError) as exc:
        raise ConfigError(f"bad {what}: {exc}") from exc


def _lattice_from(obj) -> Lattice1D | Lattice2D | str:
    if isinstance(obj, str):
        return obj
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError(f"bad lattice spec {obj!r}")
    spec = dict(obj)
    kind = spec.pop("kind")
    if kind == "1d":
        return _build(Lattice1D, spec, "lattice")
    if kind == "2d":
        return _build(Lattice2D, spec, "lattice")
    raise ConfigError(f"unknown lattice kind {kind!r}")


def scenario_from_dict(d: dict) -> Scenario:
    if d.get("schema") != SCENARIO_SCHEMA:
        raise ConfigError(f"expected schema {SCENARIO_SCHEMA}, got {d.get('schema')!r}")
    grid_spec = dict(d.get("grid", {}))
    if "snapshot_times" in grid_spec:
        grid_spec["snapshot_times"] = tuple(grid_spec["snapshot_times"])
    return _build(
        Scenario,
        {
            "name": d.get("name", "unnamed"),
            "seed": int(d.get("seed", 0)),
            "hamiltonian": d.get("hamiltonian", "h1d"),
            "params": _build(ModelParams, d.get("params", {}), "params"),
            "initial": _build(GaussianSpec, d.get("initial", {}), "initial"),
            "grid": _build(TimeGrid, grid_spec, "grid"),
            "lattice": _lattice_from(d.get("lattice", "auto")),
            "outputs": tuple(d.get("outputs", OUTPUT_KINDS)),
        },
        "scenario",
    )


def sweep_to_dict(s: Sweep) -> dict:
    return {
        "schema": SWEEP_SCHEMA,
        "name": s.name,
        "axis": s.axis,
        "values": list(s.values),
        "ratio": s.ratio,
        "omega": s.omega,
        "horizon": s.horizon,
        "base": scenario_to_dict(s.base),
    }


def sweep_from_dict(d: dict) -> Sweep:
    if d.get("schema") != SWEEP_SCHEMA:
        raise ConfigError(f"expected schema {SWEEP_SCHEMA}, got {d.get('schema')!r}")
    return _build(
        Sweep,
        {
            "name": d.get("name", "unnamed"),
            "axis": d.get("axis", AXIS_OMEGA),
            "values": tuple(d.get("values", ())),
            "ratio": d.get("ratio"),
            "omega": d.get("omega"),
            "horizon": d.get("horizon", HORIZON_FIXED),
            "base": scenario_from_dict(d.get("base", {})),
        },
        "sweep",
    )


def group_to_dict(g: SweepGroup) -> dict:
    return {
        "schema": SWEEP_GROUP_SCHEMA,
        "name": g.name,
        "sweeps": [sweep_to_dict(s) for s in g.sweeps],
    }


def group_from_dict(d: dict) -> SweepGroup:
    if d.get("schema") != SWEEP_GROUP_SCHEMA:
        raise ConfigError(f"expected schema {SWEEP_GROUP_SCHEMA}, got {d.get('schema')!r}")
    return _build(
        SweepGroup,
        {
            "name": d.get("name", "unnamed"),
            "sweeps": tuple(sweep_from_dict(s) for s in d.get("sweeps", ())),
        },
        "sweep group",
    )


def parse_config(text: str) -> Scenario | Sweep | SweepGroup:
    """Parse a YAML config into a Scenario, Sweep, or SweepGroup."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    schema = data.get("schema")
    if schema == SCENARIO_SCHEMA:
        return scenario_from_dict(data)
    if schema == SWEEP_SCHEMA:
        return sweep_from_dict(data)
    if schema == SWEEP_GROUP_SCHEMA:
        return group_from_dict(data)
    raise ConfigError(f"unknown or missing schema {schema!r}")


def serialize_config(obj: Scenario | Sweep | SweepGroup) -> str:
    if isinstance(obj, Scenario):
        data = scenario_to_dict(obj)
    elif isinstance(obj, Sweep):
        data = sweep_to_dict(obj)
    elif isinstance(obj, SweepGroup):
        data = group_to_dict(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=False)


def load_config(path: str | Path) -> Scenario | Sweep | SweepGroup:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {p} does not exist")
    return parse_config(p.read_text())


def save_config(obj: Scenario | Sweep | SweepGroup, path: str | Path) -> None:
    Path(path).write_text(serialize_config(obj))
