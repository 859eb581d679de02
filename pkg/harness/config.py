import configparser
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from core.errors import ConfigError, OptimizationError
from problems.spec import FAMILIES, GeneratorSpec
from schedules.stepsize import StepsizeSchedule
from solvers.trace import ALGORITHMS, SolverConfig

logger = logging.getLogger(__name__)

GROUP_KEYS = ("none", "gamma", "mu0", "algorithm", "solver")

EXPERIMENT_KEYS = {
    "name", "runs", "seed", "output_dir", "iterations", "stride", "group_by",
    "record_feasibility",
}
PROBLEM_KEYS = {"family", "n", "m", "batch", "p", "seed"}
PROBLEM_KNOBS = {
    "spectrum": str,
    "noise": float,
    "active": int,
    "coupling": str,
    "lam": float,
    "contains_origin": bool,
    "loss": str,
    "ridge": float,
    "csv": str,
    "b_policy": str,
    "train_fraction": float,
}
SOLVER_KEYS = {"algorithm", "mu0", "gamma", "iterations", "epochs", "stride"}
BOUNDS_KEYS = {"overlay", "kappa", "samples", "noise_scaled"}


@dataclass(frozen=True)
class Cell:
    """
    One grid cell: a named solver configuration without its seed.
    """

    name: str
    solver: str
    algorithm: str
    schedule: StepsizeSchedule
    iterations: int | None = None
    epochs: int | None = None
    stride: int | None = None

    def solver_config(self, iterations: int, stride: int, seed: int,
                      record_feasibility: bool = True) -> SolverConfig:
        return SolverConfig(
            algorithm=self.algorithm,
            schedule=self.schedule,
            iterations=self.iterations or iterations,
            epochs=self.epochs,
            seed=seed,
            stride=self.stride or stride,
            record_feasibility=record_feasibility,
        )

    def group(self, key: str) -> str:
        if key == "none":
            return "all"
        if key == "gamma":
            return f"gamma{self.schedule.gamma:g}" if self.schedule.kind == "poly-decay" else "constant"
        if key == "mu0":
            return f"mu0{self.schedule.mu0:g}"
        if key == "algorithm":
            return self.algorithm
        return self.solver

    @property
    def label(self) -> str:
        return f"{self.algorithm} ({self.schedule.label()})"


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A Monte-Carlo experiment: one problem, a grid of solver cells.

    Attributes:
        problem: Generator spec of the problem.
        cells: Grid cells, in file order.
        runs: Monte-Carlo runs per cell.
        seed: Base seed; run i uses seed + i.
        output_dir: Where CSV, SVG and metadata files go.
        iterations: Default budget; None means one pass (component count).
        stride: Default recording stride.
        group_by: Cell attribute that splits cells into figures.
        overlay: Draw theoretical-bound overlays where they apply.
        kappa: Linear-regularity constant override (estimated when None).
        samples: Sample points of the kappa estimate.
        noise_scaled: Forwarded to the decaying-stepsize bound.
    """

    problem: GeneratorSpec
    cells: tuple
    name: str = "experiment"
    runs: int = 30
    seed: int = 0
    output_dir: Path = Path("results")
    iterations: int | None = None
    stride: int = 1
    group_by: str = "none"
    record_feasibility: bool = True
    overlay: bool = True
    kappa: float | None = None
    samples: int = 200
    noise_scaled: bool = True
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if not self.cells:
            raise ConfigError("the experiment names no solver")
        if self.group_by not in GROUP_KEYS:
            raise ConfigError(f"group_by must be one of {GROUP_KEYS}")
        if self.iterations is not None and self.iterations < 1:
            raise ConfigError("iterations must be at least 1")
        if self.stride < 1:
            raise ConfigError("stride must be at least 1")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.kappa is not None and self.kappa < 1:
            raise ConfigError("kappa must be at least 1")
        names = [cell.name for cell in self.cells]
        if len(set(names)) != len(names):
            raise ConfigError("grid cell names must be unique")


def _floats(raw: str, key: str):
    try:
        return [float(part) for part in raw.replace(";", ",").split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{key} must be a comma-separated list of numbers") from None


def _typed(section, key, kind):
    try:
        if kind is bool:
            return section.getboolean(key)
        if kind is int:
            return section.getint(key)
        if kind is float:
            return section.getfloat(key)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key} must be of type {kind.__name__}") from None
    return section.get(key)


def _check_keys(section, allowed):
    unknown = sorted(set(section.keys()) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section.name}]: {', '.join(unknown)}")


def _parse_problem(section) -> GeneratorSpec:
    _check_keys(section, PROBLEM_KEYS | set(PROBLEM_KNOBS))
    family = section.get("family", "constrained-ls")
    if family not in FAMILIES:
        raise ConfigError(f"unknown problem family {family!r}")
    values = {"family": family}
    for key in ("n", "m", "batch", "p", "seed"):
        if key in section:
            values[key] = _typed(section, key, int)
    knobs = {key: _typed(section, key, kind) for key, kind in PROBLEM_KNOBS.items() if key in section}
    try:
        return GeneratorSpec(knobs=knobs, **values)
    except OptimizationError as e:
        raise ConfigError(f"[problem] {e}") from e


def _parse_solver(section, name: str):
    _check_keys(section, SOLVER_KEYS)
    algorithm = section.get("algorithm", "SPP")
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"[{section.name}] unknown algorithm {algorithm!r}")
    mu0s = _floats(section.get("mu0", "1.0"), "mu0")
    gammas = _floats(section.get("gamma", "1.0"), "gamma")
    iterations = _typed(section, "iterations", int) if "iterations" in section else None
    epochs = _typed(section, "epochs", int) if "epochs" in section else None
    stride = _typed(section, "stride", int) if "stride" in section else None
    cells = []
    for mu0 in mu0s:
        for gamma in gammas:
            try:
                schedule = (
                    StepsizeSchedule.constant(mu0)
                    if gamma == 0
                    else StepsizeSchedule.poly_decay(mu0, gamma)
                )
            except ValueError as e:
                raise ConfigError(f"[{section.name}] {e}") from e
            cell_name = name if len(mu0s) * len(gammas) == 1 else f"{name}-mu{mu0:g}-g{gamma:g}"
            cells.append(Cell(cell_name, name, algorithm, schedule, iterations, epochs, stride))
            try:
                cells[-1].solver_config(1, 1, 0)
            except ValueError as e:
                raise ConfigError(f"[{section.name}] {e}") from e
    return cells


def load_experiment_config(path, output_dir: str | None = None) -> ExperimentConfig:
    """
    Parse an experiment INI file.

    Sections: [experiment], [problem], [solver.<name>] (one or more) and an
    optional [bounds]. mu0 and gamma accept comma-separated lists, expanded
    into a grid; gamma = 0 means a constant stepsize. The SPP_OUTPUT_DIR
    environment variable overrides [experiment] output_dir and the output_dir
    argument overrides both.

    Raises:
        ConfigError: On unreadable files, unknown sections or keys, and
            invalid values.
    """
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from e

    allowed = {"experiment", "problem", "bounds"}
    solvers = [s for s in parser.sections() if s.startswith("solver.")]
    unknown = [s for s in parser.sections() if s not in allowed and s not in solvers]
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
    if not solvers:
        raise ConfigError("at least one [solver.<name>] section is required")

    experiment = parser["experiment"] if parser.has_section("experiment") else parser["DEFAULT"]
    if parser.has_section("experiment"):
        _check_keys(experiment, EXPERIMENT_KEYS)
    problem = _parse_problem(parser["problem"] if parser.has_section("problem") else parser["DEFAULT"])
    cells = []
    for section in solvers:
        cells.extend(_parse_solver(parser[section], section.split(".", 1)[1]))

    values = {}
    for key, kind in (("runs", int), ("seed", int), ("iterations", int), ("stride", int),
                      ("record_feasibility", bool)):
        if key in experiment:
            values[key] = _typed(experiment, key, kind)
    for key in ("name", "group_by"):
        if key in experiment:
            values[key] = experiment.get(key)
    target = output_dir or os.getenv("SPP_OUTPUT_DIR") or experiment.get("output_dir")
    if target:
        values["output_dir"] = Path(target)

    if parser.has_section("bounds"):
        bounds = parser["bounds"]
        _check_keys(bounds, BOUNDS_KEYS)
        for key, kind in (("overlay", bool), ("kappa", float), ("samples", int),
                          ("noise_scaled", bool)):
            if key in bounds:
                values[key] = _typed(bounds, key, kind)

    config = ExperimentConfig(problem=problem, cells=tuple(cells), source=str(path), **values)
    logger.info("loaded %s: %d cells x %d runs", path, len(config.cells), config.runs)
    return config
