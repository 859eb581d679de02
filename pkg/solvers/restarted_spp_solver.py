import logging

import numpy as np

from core.errors import NonFiniteError
from core.random_source import RandomSource
from schedules.stepsize import epoch_length, epoch_stepsize

from .spp_solver import SPPSolver
from .trace import RunTrace

logger = logging.getLogger(__name__)


def epochs_within(iterations: int, gamma: float) -> int:
    """
    Largest T with sum_{t<=T} ceil(t^gamma) <= iterations (at least 1).
    """
    total, t = 0, 0
    while True:
        length = epoch_length(t + 1, gamma)
        if total + length > iterations:
            return max(t, 1)
        total += length
        t += 1


class RestartedSPPSolver(SPPSolver):
    """
    Restarted SPP. Epoch t runs SPP with the constant stepsize
    mu_t = mu0 / t^gamma for K_t = ceil(t^gamma) iterations from the previous
    epoch's output; the epoch output is the plain average of the epoch's
    iterates x^{0,t}, ..., x^{K_t - 1,t}.
    """

    algorithm = "RSPP"

    def epoch_count(self) -> int:
        if self.config.epochs is not None:
            return self.config.epochs
        return epochs_within(self.config.iterations, self.schedule.gamma)

    def run(self, rng: RandomSource | None = None, x0=None) -> RunTrace:
        if rng is None:
            rng = RandomSource(self.config.seed)
        mu0, gamma = self.schedule.mu0, self.schedule.gamma
        epochs = self.epoch_count()
        x = np.array(self.problem.x0 if x0 is None else x0, dtype=np.float64)
        trace = RunTrace(algorithm=self.algorithm, seed=rng.seed)
        logger.debug("RSPP start: T=%d gamma=%g seed=%d", epochs, gamma, rng.seed)

        self.record(trace, 0, x, mu0)
        done = 0
        for t in range(1, epochs + 1):
            mu = epoch_stepsize(mu0, t, gamma)
            length = epoch_length(t, gamma)
            running = np.zeros_like(x)
            for i in range(length):
                running += x
                x = self.step(x, done + i, mu, rng)
                if not np.all(np.isfinite(x)):
                    raise NonFiniteError("RSPP produced a non-finite iterate", iteration=done + i + 1)
            done += length
            x = running / length
            trace.epoch_boundaries.append(done)
            trace.epoch_stepsizes.append(mu)
            trace.epoch_lengths.append(length)
            if t % self.config.stride == 0 or t == epochs:
                self.record(trace, done, x, mu)

        trace.final_iterate = x
        trace.final_average = x.copy()
        logger.debug("RSPP done: %d inner iterations", done)
        return trace


def run_rspp(problem, config, rng=None, trace_listener=None):
    return RestartedSPPSolver(problem, config, trace_listener).run(rng)
