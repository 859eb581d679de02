from .averaged_spp_solver import AveragedSPPSolver, run_aspp
from .restarted_spp_solver import RestartedSPPSolver, epochs_within, run_rspp
from .sgd_solver import SGDSolver, run_sgd
from .solver import Solver
from .spp_solver import SPPSolver, run_spp
from .trace import ALGORITHMS, RunTrace, SolverConfig, TraceRecord

SOLVERS = {
    "SPP": SPPSolver,
    "A-SPP": AveragedSPPSolver,
    "SGD": SGDSolver,
    "RSPP": RestartedSPPSolver,
}


def run_solver(problem, config, rng=None, trace_listener=None):
    """
    Run whichever algorithm the config names.
    """
    return SOLVERS[config.algorithm](problem, config, trace_listener).run(rng)


__all__ = [
    "ALGORITHMS",
    "AveragedSPPSolver",
    "RestartedSPPSolver",
    "RunTrace",
    "SGDSolver",
    "SOLVERS",
    "SPPSolver",
    "Solver",
    "SolverConfig",
    "TraceRecord",
    "epochs_within",
    "run_aspp",
    "run_rspp",
    "run_sgd",
    "run_solver",
    "run_spp",
]
