import math
import warnings
from dataclasses import dataclass

import numpy as np

from core.errors import HypothesisWarning


@dataclass(frozen=True)
class ConvexBounds:
    suboptimality_upper: float
    suboptimality_lower: float
    feasibility_sq_upper: float


def convex_bounds(c, k: int, schedule) -> ConvexBounds:
    """
    Suboptimality and feasibility estimates for the averaged SPP point
    x_hat^k under bounded subgradients.

    With mu1 = sum_{i<k} mu_i, mu2 = sum_{i<k} mu_i^2 and
    R = mu0 kappa (r0^2 + E[L^2] mu2):

        upper = R / (2 mu0 kappa mu1)
        lower = -kappa E[L^2] (mu2/mu1 + 2 mu0) - sqrt(E[L^2] R / mu1)
        feasibility^2 <= 2 kappa^2 E[L^2] (mu2/mu1 + 2 mu0)^2 + 2 R / mu1
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    c.require("r0", "kappa", "mean_sq_lipschitz")
    mu = schedule.values(k)
    mu0 = schedule.mu0
    mu1 = float(np.sum(mu))
    mu2 = float(np.sum(mu * mu))
    lsq = c.mean_sq_lipschitz
    kappa = c.kappa
    r = mu0 * kappa * (c.r0 ** 2 + lsq * mu2)
    drift = mu2 / mu1 + 2.0 * mu0
    return ConvexBounds(
        suboptimality_upper=r / (2.0 * mu0 * kappa * mu1),
        suboptimality_lower=-kappa * lsq * drift - math.sqrt(lsq * r / mu1),
        feasibility_sq_upper=2.0 * kappa ** 2 * lsq * drift ** 2 + 2.0 * r / mu1,
    )


def constant_step_plan(epsilon: float, c):
    """
    Constant stepsize and iteration count reaching accuracy epsilon for the
    averaged point:

        mu = eps / (E[L^2] (3 kappa + sqrt(2 kappa)))
        K >= E[L^2] r0^2 / eps^2 * max{1, (3 kappa + sqrt(2 kappa))^2}

    Returns:
        (mu, K) with K the smallest integer satisfying the inequality.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    c.require("r0", "kappa", "mean_sq_lipschitz")
    if c.r0 < 1:
        warnings.warn("plan assumes ||x0 - x*|| >= 1", HypothesisWarning, stacklevel=2)
    if c.mean_sq_lipschitz < 2:
        warnings.warn("plan assumes E[L^2] >= 2", HypothesisWarning, stacklevel=2)
    spread = 3.0 * c.kappa + math.sqrt(2.0 * c.kappa)
    mu = epsilon / (c.mean_sq_lipschitz * spread)
    iterations = c.mean_sq_lipschitz * c.r0 ** 2 / epsilon ** 2 * max(1.0, spread ** 2)
    return mu, max(math.ceil(iterations), 1)


@dataclass(frozen=True)
class ConstantStepRates:
    stepsize: float
    suboptimality: float
    suboptimality_lower: float
    feasibility_sq: float


def optimal_constant_stepsize(c, iterations: int) -> ConstantStepRates:
    """
    The constant stepsize sqrt(r0^2 / (K E[L^2])) minimizing the upper
    suboptimality estimate after K iterations, with the rates it yields.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    c.require("r0", "kappa", "mean_sq_lipschitz")
    lsq, r0, kappa = c.mean_sq_lipschitz, c.r0, c.kappa
    rate = math.sqrt(lsq * r0 ** 2 / iterations)
    return ConstantStepRates(
        stepsize=math.sqrt(r0 ** 2 / (iterations * lsq)),
        suboptimality=rate,
        suboptimality_lower=-(3.0 * kappa + math.sqrt(2.0 * kappa)) * rate,
        feasibility_sq=r0 ** 2 / iterations * (18.0 * kappa ** 2 + 4.0 * kappa),
    )
