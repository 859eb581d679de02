import logging

import numpy as np

from components import (
    ComposedScalarLoss,
    LogisticScalarLoss,
    QuadraticNormLoss,
    SquaredScalarLoss,
)
from constraints import Box, IntersectionProjector
from core.errors import GenerationError
from core.problem import StochasticProblem
from core.random_source import RandomSource

from .feasibility import random_halfspaces
from .reference import mean_gradient, reference_solve
from .spec import GeneratorSpec

logger = logging.getLogger(__name__)


def gen_finite_sum(spec: GeneratorSpec, rng: RandomSource | None = None) -> StochasticProblem:
    """
    Regression finite sum F(x) = (1/(m+1)) [sum_i l(a_i^T x; y_i) + (ridge/2) ||x||^2].

    Omega = {1..m+1} uniform with paired draws: component i carries its own
    random halfspace, the ridge term a box. All sets share a feasible point.
    """
    if spec.family != "finite-sum":
        raise GenerationError(f"expected family finite-sum, got {spec.family!r}")
    rng = rng or RandomSource(spec.seed)
    n, m = spec.n, spec.m
    kind = spec.knob("loss", "logistic")
    ridge = float(spec.knob("ridge", 1.0))
    noise = float(spec.knob("noise", 0.5))
    if ridge <= 0:
        raise GenerationError("ridge must be positive")

    A = rng.normal((m, n)) / np.sqrt(n)
    w = rng.normal(n)
    signal = A @ w + noise * rng.normal(m)
    if kind == "logistic":
        scalar_losses = [LogisticScalarLoss(1.0 if t >= 0 else -1.0) for t in signal]
    elif kind == "squared":
        scalar_losses = [SquaredScalarLoss(t) for t in signal]
    else:
        raise GenerationError(f"unknown scalar loss {kind!r}")
    losses = [ComposedScalarLoss(A[i], scalar_losses[i]) for i in range(m)]
    losses.append(QuadraticNormLoss(ridge, n))

    interior = rng.normal(n)
    radius = float(np.max(np.abs(interior))) + 1.0
    constraints = random_halfspaces(m, n, interior, rng)
    constraints.append(Box(-radius * np.ones(n), radius * np.ones(n)))

    projector = IntersectionProjector(constraints)
    smoothness = float(np.mean([loss.lipschitz for loss in losses]))
    x_star = reference_solve(mean_gradient(losses), projector, interior, smoothness)

    logger.info("finite-sum: n=%d m=%d loss=%s", n, m, kind)
    return StochasticProblem(
        dimension=n,
        losses=losses,
        constraints=constraints,
        coupling="paired",
        x_star=x_star,
        name="finite-sum",
        metadata={"interior_point": interior, "loss": kind, "seed": spec.seed},
    )
