import logging

import numpy as np

from .solver import Solver

logger = logging.getLogger(__name__)

# Iterates beyond this norm count as divergence.
DIVERGENCE_NORM = 1e12


class SGDSolver(Solver):
    """
    Projected stochastic gradient baseline:

        x^{k+1} = [x^k - mu_k grad f(x^k; S_k)]_{X_{S_k}}.

    Blow-up is an outcome, not an error: the run stops early with the trace
    flagged as diverged.
    """

    algorithm = "SGD"

    def step(self, x, k, mu, rng):
        _, loss, constraint = self.problem.sample(rng)
        with np.errstate(over="ignore", invalid="ignore"):
            y = x - mu * loss.gradient(x)
        if not np.all(np.isfinite(y)):
            return y
        return constraint.project(y)

    def accept(self, x, k, trace):
        if np.all(np.isfinite(x)) and np.linalg.norm(x) <= DIVERGENCE_NORM:
            return True
        trace.diverged = True
        trace.diverged_at = k + 1
        logger.warning("SGD diverged at iteration %d (seed %d)", k + 1, trace.seed)
        return False


def run_sgd(problem, config, rng=None, trace_listener=None):
    return SGDSolver(problem, config, trace_listener).run(rng)
