"""Scenario execution: lattice sizing, simulation, fits, and file outputs.

Output files per run: trajectory.csv (t, t_over_tj, m1, m2, sigma,
edge_mass), snapshots.csv (l, p_l in comment-delimited time blocks), and
summary.json (predictions, measured fits, seed, code version). Sweeps add a
table.csv with one row per point. All numbers are written with 17
significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .. import __version__
from ..errors import ConfigError, CycloblochError, InsufficientDataError
from ..lattice import Lattice1D, Lattice2D, State2D
from ..model import (
    BOUNDED_OSCILLATION,
    ModelParams,
    Regime,
    classify_regime,
    critical_frequency,
    drive_magnitude,
    predicted_ballistic_rate,
    predicted_drift_velocity,
)
from ..observables import fit_ballistic_rate, fit_drift, rational_approx
from ..propagator import Trajectory, evolve, evolve_ensemble
from ..states import (
    Ensemble,
    GaussianSpec,
    _resolve_width,
    coherent_gaussian,
    incoherent_ensemble,
)
from .scenario import Scenario, Sweep, SweepGroup, sweep_point

log = logging.getLogger("cyclobloch")

TRAJECTORY_SCHEMA = "cyclobloch-trajectory-v1"
SNAPSHOTS_SCHEMA = "cyclobloch-snapshots-v1"
TABLE_SCHEMA = "cyclobloch-sweep-table-v1"
SUMMARY_SCHEMA = "cyclobloch-summary-v1"

TABLE_COLUMNS = (
    "omega",
    "ratio",
    "ratio_kind",
    "nu",
    "regime",
    "fitted_A",
    "fitted_A_per_tj",
    "predicted_A",
    "sigma_final",
    "classification",
    "error",
)

#: Bounds for the 1D auto-sizer (desk scale caps at 4096 sites).
MIN_AUTO_SITES = 512
MAX_AUTO_SITES = 4096


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _ratio_of(params: ModelParams):
    """FrequencyRatio of omega_x/omega_y, or None when undefined (no drive,
    or drive along x only)."""
    if params.omega_y == 0:
        return None
    return rational_approx(params.omega_x / params.omega_y, max_q=100)


def predictions(params: ModelParams) -> dict:
    """Closed-form transport predictions for a parameter set."""
    regime = classify_regime(params)
    ratio = _ratio_of(params)
    tj = params.tunneling_period
    out = {
        "omega": drive_magnitude(params),
        "omega_cr": critical_frequency(params),
        "regime": regime.value,
        "tunneling_period": tj,
        "magnetic_period": params.magnetic_period if params.alpha != 0 else None,
        "drift_velocity": None,
        "drift_velocity_per_tj": None,
        "ratio": None,
        "ballistic_rate": None,
        "ballistic_rate_per_tj": None,
    }
    if params.alpha != 0:
        v = predicted_drift_velocity(params)
        out["drift_velocity"] = v
        out["drift_velocity_per_tj"] = v * tj
    if ratio is not None:
        out["ratio"] = {
            "kind": ratio.kind,
            "r": ratio.r,
            "q": ratio.q,
            "nu": ratio.nu,
            "value": ratio.as_float(),
        }
    if regime is Regime.FAST_DRIVING and ratio is not None:
        rate = predicted_ballistic_rate(params, ratio)
        if rate is BOUNDED_OSCILLATION:
            out["ballistic_rate"] = "bounded-oscillation"
        else:
            out["ballistic_rate"] = rate
            out["ballistic_rate_per_tj"] = rate * tj
    return out


def auto_lattice_1d(params: ModelParams, grid, initial: GaussianSpec) -> Lattice1D:
    """Size the 1D window from the transport predictions.

    Half-width = |drift| t_end + 10 sigma0 + margin t_end, where the
    ballistic margin comes from the predicted spreading rate (with a safety
    factor) instead of the worst case j_x, so bounded and suppressed runs
    stay at desk scale; the guard-band monitor still enforces correctness at
    runtime. Rounded up to a multiple of 64 and clamped to [512, 4096].
    """
    g = grid.resolve(params)
    t_end = g.t_end
    sigma0 = _resolve_width(initial, params)
    v = abs(predicted_drift_velocity(params)) if params.alpha != 0 else 0.0
    regime = classify_regime(params)
    ratio = _ratio_of(params)
    if regime is Regime.FAST_DRIVING:
        if ratio is None:
            margin = params.j_x
        else:
            rate = predicted_ballistic_rate(params, ratio)
            if rate is BOUNDED_OSCILLATION:
                margin = 0.06 * params.j_x
            else:
                margin = min(params.j_x, 2.2 * rate + 0.02 * params.j_x)
    elif regime is Regime.CRITICAL:
        margin = min(params.j_x, max(1.2 * v + 0.05 * params.j_x, 0.35 * params.j_x))
    else:
        margin = min(params.j_x, 1.2 * v + 0.05 * params.j_x)
    half = v * t_end + 10.0 * sigma0 + margin * t_end
    n = 64 * math.ceil(2.0 * half / 64.0)
    return Lattice1D(min(max(n, MIN_AUTO_SITES), MAX_AUTO_SITES))


def _resolve_lattice(scenario: Scenario):
    if not isinstance(scenario.lattice, str):
        return scenario.lattice
    if scenario.hamiltonian != "h1d":
        raise ConfigError("2D scenarios need an explicit lattice")
    return auto_lattice_1d(scenario.params, scenario.grid, scenario.initial)


def _initial_state(scenario: Scenario, lattice):
    """Coherent Gaussian (possibly embedded uniformly along y) or ensemble."""
    params = scenario.params
    if scenario.initial.phases == "random":
        if not isinstance(lattice, Lattice1D):
            raise ConfigError("random-phase ensembles are 1D only")
        return incoherent_ensemble(scenario.initial, lattice, params)
    if isinstance(lattice, Lattice1D):
        return coherent_gaussian(scenario.initial, lattice, params)
    chain = Lattice1D(lattice.n_x, origin=lattice.origin_x)
    packet = coherent_gaussian(scenario.initial, chain, params)
    psi = np.repeat(packet.amplitudes[:, None], lattice.n_y, axis=1)
    return State2D(psi / math.sqrt(lattice.n_y), lattice)


def _horizon_warning(scenario: Scenario, grid) -> None:
    params = scenario.params
    ratio = _ratio_of(params)
    if ratio is None or ratio.kind != "rational" or ratio.r == 0:
        return
    if classify_regime(params) is not Regime.FAST_DRIVING:
        return
    omega = drive_magnitude(params)
    needed = 10.0 * (omega / params.j_y) ** ratio.nu * params.tunneling_period
    if grid.t_end < needed:
        log.warning(
            "%s: t_end=%.3g is below ~%.3g needed for the nu=%d asymptotic regime; "
            "the fitted rate reflects the transient",
            scenario.name, grid.t_end, needed, ratio.nu,
        )


def _fit_or_none(fit_fn, trajectory):
    try:
        return fit_fn(trajectory)
    except InsufficientDataError:
        return None


def _grid_to_record(grid) -> dict:
    return {
        "t_end": grid.t_end,
        "dt": grid.dt,
        "record_every": grid.record_every,
        "snapshot_times": list(grid.snapshot_times),
        "time_unit": grid.time_unit,
    }


def _lattice_to_record(lattice) -> dict:
    if isinstance(lattice, Lattice1D):
        return {"kind": "1d", "n_sites": lattice.n_sites, "origin": lattice.origin}
    return {
        "kind": "2d", "n_x": lattice.n_x, "n_y": lattice.n_y,
        "boundary_x": lattice.boundary_x, "boundary_y": lattice.boundary_y,
        "origin_x": lattice.origin_x, "origin_y": lattice.origin_y,
    }


def _write_trajectory_csv(path: Path, traj: Trajectory, tj: float) -> None:
    lines = [f"# schema={TRAJECTORY_SCHEMA}", "t,t_over_tj,m1,m2,sigma,edge_mass"]
    for i, t in enumerate(traj.times):
        lines.append(
            ",".join(
                _fmt(x)
                for x in (t, t / tj, traj.m1[i], traj.m2[i], traj.sigma[i], traj.edge_mass[i])
            )
        )
    path.write_text("\n".join(lines) + "\n")


def _write_snapshots_csv(path: Path, traj: Trajectory, tj: float) -> None:
    lines = [f"# schema={SNAPSHOTS_SCHEMA}", "l,p_l"]
    for t in sorted(traj.snapshots):
        lines.append(f"# t={_fmt(t)} t_over_tj={_fmt(t / tj)}")
        pops = traj.snapshots[t]
        for site, p in zip(traj.sites, pops):
            lines.append(f"{int(site)},{_fmt(p)}")
    path.write_text("\n".join(lines) + "\n")


def run(
    scenario: Scenario,
    out_dir: str | Path,
    workers: int = 1,
    keep_outputs: bool = True,
):
    """Execute one scenario, write its artifacts, and return (trajectory, summary).

    Partial outputs are removed if the run fails.
    """
    params = scenario.params
    lattice = _resolve_lattice(scenario)
    grid = scenario.grid.resolve(params)
    _horizon_warning(scenario, grid)
    initial = _initial_state(scenario, lattice)

    log.info("run %s: lattice=%s, %d steps", scenario.name,
             _lattice_to_record(lattice), round(grid.t_end / grid.dt))
    if isinstance(initial, Ensemble):
        traj = evolve_ensemble(
            initial, params, grid, hamiltonian=scenario.hamiltonian, workers=workers
        )
    else:
        _, traj = evolve(initial, params, grid, hamiltonian=scenario.hamiltonian)

    tj = params.tunneling_period
    drift = _fit_or_none(fit_drift, traj)
    rate = _fit_or_none(fit_ballistic_rate, traj)
    summary = {
        "schema": SUMMARY_SCHEMA,
        "code_version": __version__,
        "name": scenario.name,
        "seed": scenario.seed,
        "hamiltonian": scenario.hamiltonian,
        "params": {
            "j_x": params.j_x, "j_y": params.j_y, "alpha": params.alpha,
            "omega_x": params.omega_x, "omega_y": params.omega_y,
        },
        "grid": _grid_to_record(grid),
        "lattice": _lattice_to_record(lattice),
        "n_realizations": len(initial.members) if isinstance(initial, Ensemble) else 1,
        "predictions": predictions(params),
        "measured": {
            "drift_slope": drift.slope if drift else None,
            "drift_slope_per_tj": drift.slope * tj if drift else None,
            "drift_rms_residual": drift.rms_residual if drift else None,
            "rate_slope": rate.slope if rate else None,
            "rate_slope_per_tj": rate.slope * tj if rate else None,
            "rate_classification": rate.classification if rate else None,
            "m1_first": float(traj.m1[0]),
            "m1_last": float(traj.m1[-1]),
            "sigma_first": float(traj.sigma[0]),
            "sigma_last": float(traj.sigma[-1]),
            "max_edge_mass": float(traj.edge_mass.max()),
        },
    }

    if keep_outputs:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        try:
            if "trajectory_csv" in scenario.outputs:
                p = out / "trajectory.csv"
                _write_trajectory_csv(p, traj, tj)
                written.append(p)
            if "snapshot_csv" in scenario.outputs and traj.snapshots:
                p = out / "snapshots.csv"
                _write_snapshots_csv(p, traj, tj)
                written.append(p)
            if "summary_json" in scenario.outputs:
                p = out / "summary.json"
                p.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
                written.append(p)
        except BaseException:
            for p in written:
                p.unlink(missing_ok=True)
            raise
    return traj, summary


def _sweep_row(sweep: Sweep, value: float, scenario: Scenario, summary, error) -> dict:
    params = scenario.params
    omega = drive_magnitude(params)
    ratio = _ratio_of(params)
    pred = predictions(params)
    row = {
        "omega": omega,
        "ratio": ratio.as_float() if ratio else None,
        "ratio_kind": ratio.kind if ratio else "",
        "nu": ratio.nu if ratio and ratio.kind == "rational" else None,
        "regime": pred["regime"],
        "fitted_A": None,
        "fitted_A_per_tj": None,
        "predicted_A": pred["ballistic_rate"],
        "sigma_final": None,
        "classification": "",
        "error": "",
    }
    if summary is not None:
        m = summary["measured"]
        row["fitted_A"] = m["rate_slope"]
        row["fitted_A_per_tj"] = m["rate_slope_per_tj"]
        row["sigma_final"] = m["sigma_last"]
        row["classification"] = m["rate_classification"] or ""
    if error is not None:
        row["error"] = f"{type(error).__name__}: {error}"
    return row


def _run_point(args):
    sweep, value, out_dir = args
    scenario = sweep_point(sweep, value)
    try:
        _, summary = run(scenario, Path(out_dir) / "points" / scenario.name, workers=1)
        return _sweep_row(sweep, value, scenario, summary, None)
    except ConfigError:
        raise
    except CycloblochError as exc:
        log.error("point %s failed: %s", scenario.name, exc)
        return _sweep_row(sweep, value, scenario, None, exc)


def run_sweep(
    sweep: Sweep | SweepGroup,
    out_dir: str | Path,
    workers: int = 1,
) -> list[dict]:
    """Run every point, write <out_dir>/table.csv, return the rows.

    Rows follow axis order (per branch for groups) regardless of worker
    scheduling; point failures are recorded in the error column and do not
    stop the sweep.
    """
    branches = sweep.sweeps if isinstance(sweep, SweepGroup) else (sweep,)
    jobs = [(br, v, str(out_dir)) for br in branches for v in br.values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_point, jobs))
    else:
        rows = [_run_point(job) for job in jobs]

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [f"# schema={TABLE_SCHEMA}", ",".join(TABLE_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in TABLE_COLUMNS))
    (out / "table.csv").write_text("\n".join(lines) + "\n")
    return rows
