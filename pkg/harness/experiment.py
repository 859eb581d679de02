import logging
import os
import time
from multiprocessing import Pool

from tqdm import tqdm

from bounds import ProblemConstants
from constraints import estimate_kappa
from core.errors import AssumptionError, OptimizationError
from core.random_source import RandomSource
from problems import generate
from solvers import run_solver

from .aggregate import aggregate
from .config import ExperimentConfig
from .emit import emit_csv, emit_metadata, emit_run_csv, emit_svg
from .overlays import bound_overlay

logger = logging.getLogger(__name__)

KAPPA_CAVEAT = (
    "kappa_hat is an empirical lower bound on kappa; bound overlays evaluated "
    "with it are only indicative outside the sampled region"
)
REGION_CAVEAT = (
    "least-squares losses have bounded subgradients only on bounded sets; the "
    "convex-case bounds hold over the region the iterates actually visit"
)

_WORKER = {}


def _init_worker(problem):
    _WORKER["problem"] = problem


def _run_one(solver_config):
    return run_solver(_WORKER["problem"], solver_config)


def default_workers() -> int:
    """
    Pool size from SPP_WORKERS, else the available parallelism.
    """
    value = os.getenv("SPP_WORKERS")
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


def run_monte_carlo(problem, solver_configs, workers: int = 1, progress: bool = False,
                    description: str | None = None):
    """
    Run one solver configuration per entry and return the RunTraces in input
    order. Results depend only on each config's seed, never on scheduling.
    """
    if workers <= 1 or len(solver_configs) == 1:
        _init_worker(problem)
        iterator = map(_run_one, solver_configs)
        return list(tqdm(iterator, total=len(solver_configs), desc=description, disable=not progress))
    with Pool(min(workers, len(solver_configs)), initializer=_init_worker, initargs=(problem,)) as pool:
        iterator = pool.imap(_run_one, solver_configs)
        return list(tqdm(iterator, total=len(solver_configs), desc=description, disable=not progress))


def measure_constants(problem, config: ExperimentConfig):
    """
    Problem constants for the bound overlays, or None when x* is unknown.

    Returns:
        (constants, kappa_hat)
    """
    if problem.x_star is None:
        return None, None
    kappa = config.kappa
    if kappa is None:
        try:
            kappa = estimate_kappa(problem, config.samples, RandomSource(config.seed + config.runs))
        except AssumptionError:
            logger.info("every kappa sample is feasible; using kappa = 1")
            kappa = 1.0
        logger.info("kappa_hat = %.6g (lower bound, %d samples)", kappa, config.samples)
    constants = ProblemConstants.from_problem(problem, mu0=1.0, kappa=kappa)
    return constants, kappa


def _theta0(constants, cell):
    if constants is None:
        return None
    try:
        return constants.replace(mu0=cell.schedule.mu0).theta0
    except OptimizationError:
        return None


def run_experiment(config: ExperimentConfig, workers: int | None = None,
                   debug_runs: bool = False, progress: bool | None = None):
    """
    Execute every grid cell of an experiment and write its artifacts.

    Per cell: `config.runs` runs with seeds seed + i, one aggregate CSV
    (<name>.csv) and metadata (<name>.meta.json), plus per-run CSVs when
    debug_runs is set. Per figure group: one SVG with every cell of the group
    and the matching bound overlays.

    Returns:
        The AggregateTraces, in cell order.
    """
    workers = default_workers() if workers is None else workers
    if progress is None:
        progress = logger.isEnabledFor(logging.INFO)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)

    problem = generate(config.problem)
    iterations = config.iterations or problem.component_count
    if problem.x_star is None:
        metric = "objective"
    else:
        metric = "relative" if problem.relative_distance else "sqdist"
    constants, kappa_hat = (None, None)
    if config.overlay:
        constants, kappa_hat = measure_constants(problem, config)
    logger.info("%s: %s, K=%d, %d cells x %d runs, %d workers",
                config.name, problem.name, iterations, len(config.cells), config.runs, workers)

    traces, overlays = [], {}
    for cell in config.cells:
        started = time.perf_counter()
        run_configs = [
            cell.solver_config(iterations, config.stride, config.seed + i, config.record_feasibility)
            for i in range(config.runs)
        ]
        runs = run_monte_carlo(problem, run_configs, workers, progress, cell.name)
        trace = aggregate(runs, cell.name, cell.label)
        trace.metadata.update({
            "problem": problem.name,
            "iterations": iterations,
            "seeds": [config.seed, config.seed + config.runs - 1],
            "metric": metric,
            "kappa_hat": kappa_hat,
            "kappa_caveat": KAPPA_CAVEAT if kappa_hat is not None else None,
            "region_caveat": REGION_CAVEAT if constants is not None else None,
            "theta0": _theta0(constants, cell),
            "constants": None if constants is None else {
                "r0": constants.r0,
                "eta_sq": constants.eta_sq,
                "mean_sq_lipschitz": constants.mean_sq_lipschitz,
                "grad_norm": constants.grad_norm,
                "dist0": constants.dist0,
                "kappa": constants.kappa,
            },
            "wall_clock": time.perf_counter() - started,
        })
        if trace.divergence_count:
            logger.warning("%s: %d of %d runs diverged", cell.name, trace.divergence_count, config.runs)
        emit_csv(trace, out / f"{cell.name}.csv")
        emit_metadata(trace, out / f"{cell.name}.meta.json")
        if debug_runs:
            for i, run in enumerate(runs):
                emit_run_csv(run, out / f"{cell.name}.run{i:03d}.csv")
        if metric != "objective":
            overlay = bound_overlay(constants, cell, trace.k, config.noise_scaled)
            if overlay is not None:
                overlays[cell.name] = overlay
        traces.append(trace)
        logger.info("%s done in %.1fs", cell.name, trace.metadata["wall_clock"])

    groups = {}
    for cell, trace in zip(config.cells, traces):
        groups.setdefault(cell.group(config.group_by), []).append((cell, trace))
    for group, members in groups.items():
        name = config.name if len(groups) == 1 else f"{config.name}-{group}"
        emit_svg(
            [trace for _, trace in members],
            [overlays[cell.name] for cell, _ in members if cell.name in overlays],
            out / f"{name}.svg",
            metric=metric,
            title=None if len(groups) == 1 else group,
        )
    return traces
