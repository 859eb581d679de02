from .aggregate import AggregateTrace, aggregate
from .config import Cell, ExperimentConfig, load_experiment_config
from .emit import Overlay, build_figure, emit_csv, emit_metadata, emit_run_csv, emit_svg, read_csv
from .experiment import measure_constants, run_experiment, run_monte_carlo
from .overlays import bound_overlay
from .slope import loglog_slope
from .templates import TEMPLATES, gen_config

__all__ = [
    "AggregateTrace",
    "Cell",
    "ExperimentConfig",
    "Overlay",
    "TEMPLATES",
    "aggregate",
    "bound_overlay",
    "build_figure",
    "emit_csv",
    "emit_metadata",
    "emit_run_csv",
    "emit_svg",
    "gen_config",
    "load_experiment_config",
    "loglog_slope",
    "measure_constants",
    "read_csv",
    "run_experiment",
    "run_monte_carlo",
]
