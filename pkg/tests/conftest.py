import dataclasses

import numpy as np
import pytest

from bounds import ProblemConstants
from components import QuadraticNormLoss
from constraints import WholeSpace
from core import RandomSource, StochasticProblem
from harness import aggregate, run_monte_carlo
from problems import GeneratorSpec, gen_constrained_ls


@pytest.fixture
def quadratic_problem():
    """
    Factory for f = 1/2 ||x - c||^2 over one constraint set (whole space by default).
    """

    def build(center=(1.0, -2.0), x0=(5.0, 3.0), constraint=None):
        center = np.asarray(center, dtype=float)
        n = center.shape[0]
        return StochasticProblem(
            dimension=n,
            losses=[QuadraticNormLoss(1.0, n, center=center)],
            constraints=[constraint or WholeSpace(n)],
            x_star=center,
            x0=np.asarray(x0, dtype=float),
            name="quadratic",
        )

    return build


@pytest.fixture(scope="session")
def small_ls():
    return gen_constrained_ls(GeneratorSpec(n=5, m=100, seed=3))


@pytest.fixture(scope="session")
def desk_ls():
    """
    The n = 20, m = 2000 constrained least-squares instance, 1050 losses over
    1050 halfspaces.
    """
    return gen_constrained_ls(GeneratorSpec(n=20, m=2000, seed=0, knobs={"spectrum": "flat"}))


@pytest.fixture(scope="session")
def desk_constants(desk_ls):
    return ProblemConstants.from_problem(desk_ls, mu0=1.0, samples=50, rng=RandomSource(1))


@pytest.fixture(scope="session")
def monte_carlo():
    """
    run(problem, config, runs) -> (AggregateTrace, RunTraces) over seeds
    config.seed + i.
    """

    def run(problem, config, runs=30):
        configs = [dataclasses.replace(config, seed=config.seed + i) for i in range(runs)]
        traces = run_monte_carlo(problem, configs)
        return aggregate(traces, config.algorithm, config.label), traces

    return run
