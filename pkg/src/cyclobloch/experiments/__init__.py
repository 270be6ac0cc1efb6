from .presets import PRESET_NAMES, preset
from .runner import auto_lattice_1d, predictions, run, run_sweep
from .scenario import (
    Scenario,
    Sweep,
    SweepGroup,
    load_config,
    parse_config,
    serialize_config,
    save_config,
)

__all__ = [
    "PRESET_NAMES",
    "Scenario",
    "Sweep",
    "SweepGroup",
    "auto_lattice_1d",
    "load_config",
    "parse_config",
    "predictions",
    "preset",
    "run",
    "run_sweep",
    "save_config",
    "serialize_config",
]
