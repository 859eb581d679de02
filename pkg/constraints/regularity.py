import logging

import numpy as np

from core.errors import AssumptionError
from core.random_source import RandomSource

logger = logging.getLogger(__name__)

# Samples whose mean squared set distance is below this are skipped.
DEGENERATE_DENOMINATOR = 1e-14


def sample_center(problem) -> np.ndarray:
    """
    Feasible point the sampling sphere is centered at.

    A generator may record an interior point in problem.metadata; otherwise
    the known optimum is used, and failing that the projection of x0.
    """
    interior = problem.metadata.get("interior_point")
    if interior is not None:
        return np.asarray(interior, dtype=np.float64)
    if problem.x_star is not None:
        return problem.x_star
    return problem.projector.project(problem.x0)


def estimate_kappa(problem, samples: int, rng: RandomSource, radius: float | None = None,
                   center=None, tol: float = 1e-10) -> float:
    """
    Empirical lower bound on the linear-regularity constant kappa.

    kappa_hat = max over sample points x of dist_X(x)^2 / E[dist_{X_S}(x)^2].
    Samples are uniform on a sphere of radius 2 max(1, ||x0||) (or the given
    radius) around a feasible point.

    Args:
        problem: The StochasticProblem.
        samples: Number of sample points (>= 1).
        rng: Random source owned by this estimate.
        radius: Sphere radius override.
        center: Sphere center override.
        tol: Tolerance of the intersection projection.

    Returns:
        The estimate, a lower bound on the true kappa.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if center is None:
        center = sample_center(problem)
    if radius is None:
        radius = 2.0 * max(1.0, float(np.linalg.norm(problem.x0)))
    weights = problem.constraint_weights
    projector = problem.projector

    best = None
    used = 0
    for _ in range(samples):
        direction = rng.normal(problem.dimension)
        direction /= np.linalg.norm(direction)
        x = center + radius * direction
        denominator = float(np.dot(weights, projector.distances(x) ** 2))
        if denominator < DEGENERATE_DENOMINATOR:
            continue
        numerator = projector.distance(x, tol=tol) ** 2
        ratio = numerator / denominator
        used += 1
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise AssumptionError("every kappa sample was degenerate")
    logger.debug("kappa estimate %.6g from %d/%d samples", best, used, samples)
    return max(best, 1.0)
