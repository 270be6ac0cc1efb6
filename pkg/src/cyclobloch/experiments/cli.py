"""Command-line interface.

    cyclobloch run <config.yaml>      execute one scenario config
    cyclobloch preset <name>          run a bundled figure scenario/sweep
    cyclobloch sweep <config.yaml>    execute a sweep / sweep-group config
    cyclobloch predict <config.yaml>  print model predictions, no simulation

Outputs land in --out, $CYCLOBLOCH_OUTDIR, or ./outputs, under a
subdirectory named after the scenario. Exit codes: 0 success, 2 config
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from ..errors import ConfigError, CycloblochError
from .presets import PRESET_NAMES, preset
from .runner import predictions, run, run_sweep
from .scenario import (
    Scenario,
    Sweep,
    SweepGroup,
    load_config,
    save_config,
    sweep_point,
)

log = logging.getLogger("cyclobloch")


def _default_out() -> str:
    return os.environ.get("CYCLOBLOCH_OUTDIR", "outputs")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output directory (default: $CYCLOBLOCH_OUTDIR or ./outputs)")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--dt", type=float, default=None,
                   help="override the time step, in the config's time unit")
    p.add_argument("--t-end", type=float, default=None, dest="t_end",
                   help="override the horizon, in the config's time unit")
    p.add_argument("--workers", type=int, default=1, help="worker processes for sweeps/ensembles")
    p.add_argument("--quiet", action="store_true", help="suppress progress output")


def _override_scenario(s: Scenario, args) -> Scenario:
    if args.seed is not None:
        initial = s.initial
        if initial.phases == "random":
            initial = replace(initial, seed=args.seed)
        s = replace(s, seed=args.seed, initial=initial)
    if args.dt is not None or args.t_end is not None:
        grid = replace(
            s.grid,
            dt=args.dt if args.dt is not None else s.grid.dt,
            t_end=args.t_end if args.t_end is not None else s.grid.t_end,
        )
        s = replace(s, grid=grid)
    return s


def _override(obj, args):
    if isinstance(obj, Scenario):
        return _override_scenario(obj, args)
    if isinstance(obj, Sweep):
        return replace(obj, base=_override_scenario(obj.base, args))
    return replace(obj, sweeps=tuple(_override(s, args) for s in obj.sweeps))


def _out_dir(args, name: str) -> Path:
    root = args.out if args.out is not None else _default_out()
    return Path(root) / name


def _execute(obj, args) -> int:
    obj = _override(obj, args)
    out = _out_dir(args, obj.name)
    if isinstance(obj, Scenario):
        _, summary = run(obj, out, workers=args.workers)
        m = summary["measured"]
        log.info(
            "%s done: M1 %.4g -> %.4g, sigma %.4g -> %.4g, fitted rate %s",
            obj.name, m["m1_first"], m["m1_last"],
            m["sigma_first"], m["sigma_last"], m["rate_slope"],
        )
    else:
        rows = run_sweep(obj, out, workers=args.workers)
        failed = [r for r in rows if r["error"]]
        log.info("%s done: %d points, %d failed", obj.name, len(rows), len(failed))
        if failed:
            return 3
    log.info("outputs in %s", out)
    return 0


def _cmd_run(args) -> int:
    obj = load_config(args.config)
    if not isinstance(obj, Scenario):
        raise ConfigError("config is a sweep; use `cyclobloch sweep`")
    return _execute(obj, args)


def _cmd_sweep(args) -> int:
    obj = load_config(args.config)
    if isinstance(obj, Scenario):
        raise ConfigError("config is a single scenario; use `cyclobloch run`")
    return _execute(obj, args)


def _cmd_preset(args) -> int:
    obj = preset(args.name)
    if args.write_config:
        save_config(_override(obj, args), args.write_config)
        log.info("wrote %s", args.write_config)
        return 0
    return _execute(obj, args)


def _print_predictions(params) -> None:
    pred = predictions(params)
    print(f"omega          = {pred['omega']:.6g}")
    print(f"omega_cr       = {pred['omega_cr']:.6g}")
    print(f"regime         = {pred['regime']}")
    print(f"T_J            = {pred['tunneling_period']:.6g}")
    ratio = pred["ratio"]
    if ratio is not None:
        if ratio["kind"] == "rational":
            print(f"ratio          = {ratio['r']}/{ratio['q']} (nu={ratio['nu']})")
        else:
            print(f"ratio          = {ratio['value']:.6g} (irrational)")
    if pred["drift_velocity"] is not None:
        print(f"drift velocity = {pred['drift_velocity']:.6g} sites/time "
              f"({pred['drift_velocity_per_tj']:.6g} sites/T_J)")
    rate = pred["ballistic_rate"]
    if rate == "bounded-oscillation":
        print("spreading rate = bounded oscillation (irrational fast drive)")
    elif rate is not None:
        print(f"spreading rate = {rate:.6g} sites/time "
              f"({pred['ballistic_rate_per_tj']:.6g} sites/T_J)")


def _cmd_predict(args) -> int:
    obj = load_config(args.config)
    if isinstance(obj, Scenario):
        _print_predictions(obj.params)
        return 0
    sweeps = obj.sweeps if isinstance(obj, SweepGroup) else (obj,)
    for sweep in sweeps:
        for value in sweep.values:
            point = sweep_point(sweep, value)
            print(f"--- {point.name}")
            _print_predictions(point.params)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclobloch",
        description="Driven-lattice wave-packet transport simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_preset = sub.add_parser("preset", help=f"run a bundled preset: {', '.join(PRESET_NAMES)}")
    p_preset.add_argument("name")
    p_preset.add_argument("--write-config", default=None,
                          help="write the preset's config YAML to this path instead of running")
    _add_common(p_preset)
    p_preset.set_defaults(func=_cmd_preset)

    p_sweep = sub.add_parser("sweep", help="run a sweep config")
    p_sweep.add_argument("config")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_predict = sub.add_parser("predict", help="print model predictions for a config")
    p_predict.add_argument("config")
    p_predict.set_defaults(func=_cmd_predict, quiet=False)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CycloblochError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
