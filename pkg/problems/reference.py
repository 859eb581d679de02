import logging

import numpy as np

from core.errors import ConvergenceError

logger = logging.getLogger(__name__)

STEP_TOLERANCE = 1e-11
PROJECTION_TOLERANCE = 1e-12
MAX_ITERATIONS = 200_000


def mean_gradient(losses, weights=None):
    """
    grad F for F the weighted mean of the given loss components.
    """
    if weights is None:
        weights = np.full(len(losses), 1.0 / len(losses))

    def gradient(x):
        return weights @ np.array([loss.gradient(x) for loss in losses])

    return gradient


def reference_solve(gradient, projector, x0, smoothness: float,
                    tol: float = STEP_TOLERANCE, max_iterations: int = MAX_ITERATIONS):
    """
    Deterministic projected gradient x <- P_X(x - grad F(x) / L), run until
    the step falls below tol (relative to max(1, ||x||)).

    Args:
        gradient: Callable returning grad F(x).
        projector: IntersectionProjector onto X.
        x0: Starting point.
        smoothness: A Lipschitz constant of grad F.

    Returns:
        The reference optimum.
    """
    if not smoothness > 0:
        raise ValueError("smoothness must be positive")
    step = 1.0 / smoothness
    x = projector.project(np.array(x0, dtype=np.float64), tol=PROJECTION_TOLERANCE)
    for iteration in range(max_iterations):
        x_next = projector.project(x - step * gradient(x), tol=PROJECTION_TOLERANCE)
        moved = float(np.linalg.norm(x_next - x))
        x = x_next
        if moved <= tol * max(1.0, float(np.linalg.norm(x))):
            logger.debug("reference solve converged after %d iterations", iteration + 1)
            return x
    raise ConvergenceError(
        f"reference solve did not converge within {max_iterations} iterations",
        best_iterate=x,
        iterations=max_iterations,
    )
