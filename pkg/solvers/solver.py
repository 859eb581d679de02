import logging

import numpy as np

from core.errors import NonFiniteError
from core.random_source import RandomSource

from .trace import RunTrace, SolverConfig, TraceRecord

logger = logging.getLogger(__name__)


class Solver:
    """
    The solver base class.

    A solver owns the iteration loop: it draws S_k, applies `step` and records
    metrics every `stride` iterations. Subclasses implement `step`.
    """

    algorithm = None

    def __init__(self, problem, config: SolverConfig, trace_listener=None):
        """
        Initialize the solver with a problem and a configuration.
        Args:
            problem: The StochasticProblem to solve.
            config: The SolverConfig; its algorithm must match the solver.
            trace_listener: Optional callback receiving each TraceRecord.
        """
        if config.algorithm != self.algorithm:
            raise ValueError(
                f"{type(self).__name__} runs {self.algorithm}, config asks for {config.algorithm}"
            )
        self.problem = problem
        self.config = config
        self.schedule = config.schedule
        self.trace_listener = trace_listener

    def run(self, rng: RandomSource | None = None, x0=None) -> RunTrace:
        """
        Run the solver for config.iterations steps.
        """
        if rng is None:
            rng = RandomSource(self.config.seed)
        x = np.array(self.problem.x0 if x0 is None else x0, dtype=np.float64)
        trace = RunTrace(algorithm=self.algorithm, seed=rng.seed)
        logger.debug("%s start: K=%d seed=%d", self.algorithm, self.config.iterations, rng.seed)

        self.start(x)
        self.record(trace, 0, self.output(x), self.schedule.at(0))
        for k in range(self.config.iterations):
            x = self.step(x, k, self.schedule.at(k), rng)
            if not self.accept(x, k, trace):
                break
            self.observe(x, k + 1)
            if (k + 1) % self.config.stride == 0:
                self.record(trace, k + 1, self.output(x), self.schedule.at(k + 1))

        trace.final_iterate = x
        self.finish(trace)
        logger.debug("%s done: %d records", self.algorithm, len(trace))
        return trace

    def step(self, x, k, mu, rng):
        raise NotImplementedError("step is not implemented.")

    def start(self, x) -> None:
        """
        Hook called with x^0 before the first step.
        """

    def observe(self, x, k) -> None:
        """
        Hook called with every accepted iterate x^k, k >= 1.
        """

    def output(self, x):
        """
        The point whose metrics are recorded; the iterate itself by default.
        """
        return x

    def finish(self, trace: RunTrace) -> None:
        """
        Hook called once the loop ends.
        """

    def accept(self, x, k, trace: RunTrace) -> bool:
        if not np.all(np.isfinite(x)):
            raise NonFiniteError(f"{self.algorithm} produced a non-finite iterate", iteration=k + 1)
        return True

    def record(self, trace: RunTrace, k: int, x, mu: float) -> None:
        problem = self.problem
        feasibility = (
            problem.feasibility_distance(x, tol=self.config.feasibility_tol)
            if self.config.record_feasibility
            else float("nan")
        )
        record = TraceRecord(
            k=k,
            sqdist=problem.squared_error(x),
            feasibility=feasibility,
            objective=problem.reported_objective(x),
            stepsize=mu,
        )
        trace.append(record)
        if self.trace_listener is not None:
            self.trace_listener(record)
