import logging

import numpy as np

from components import QuadraticNormLoss
from constraints import Halfspace, IntersectionProjector
from core.errors import GenerationError
from core.problem import StochasticProblem
from core.random_source import RandomSource

from .reference import PROJECTION_TOLERANCE
from .spec import GeneratorSpec

logger = logging.getLogger(__name__)


def random_halfspaces(count: int, n: int, interior, rng: RandomSource, margin=(0.1, 1.0)):
    """
    `count` random halfspaces that all contain `interior` with a positive margin.
    """
    C = rng.normal((count, n))
    d = C @ interior + rng.uniform(margin[0], margin[1], size=count)
    return [Halfspace(C[j], d[j]) for j in range(count)]


def gen_feasibility(spec: GeneratorSpec, rng: RandomSource | None = None) -> StochasticProblem:
    """
    Least-norm convex feasibility: f(x; S) = (lam / 2) ||x||^2 on every draw,
    X the intersection of p random halfspaces sharing an interior point.

    The optimum is the projection of 0 onto X.
    """
    if spec.family != "feasibility":
        raise GenerationError(f"expected family feasibility, got {spec.family!r}")
    rng = rng or RandomSource(spec.seed)
    n = spec.n
    lam = float(spec.knob("lam", 1.0))
    if lam <= 0:
        raise GenerationError("lam must be positive")
    p = spec.m if spec.p is None else spec.p
    if p < 1:
        raise GenerationError("feasibility problems need at least one constraint")

    if spec.knob("contains_origin", False):
        interior = np.zeros(n)
    else:
        interior = rng.normal(n)
    constraints = random_halfspaces(p, n, interior, rng)
    x_star = IntersectionProjector(constraints).project(np.zeros(n), tol=PROJECTION_TOLERANCE)

    logger.info("feasibility: n=%d constraints=%d ||x*||=%.4g", n, p, np.linalg.norm(x_star))
    return StochasticProblem(
        dimension=n,
        losses=[QuadraticNormLoss(lam, n)],
        constraints=constraints,
        x_star=x_star,
        name="feasibility",
        metadata={"interior_point": interior, "seed": spec.seed},
    )
