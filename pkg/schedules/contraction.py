import numpy as np

from core.errors import AssumptionError


def theta(mu: float, sigma: float) -> float:
    """
    Prox contraction factor 1 / (1 + mu sigma).
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    return 1.0 / (1.0 + mu * sigma)


def expected_theta_sq(sigmas, weights, mu: float) -> float:
    """
    E[theta_S(mu)^2] over a finite distribution of sigma values.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    sigmas = np.asarray(sigmas, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    return float(np.dot(weights, 1.0 / (1.0 + mu * sigmas) ** 2))


def theta0(problem, mu0: float) -> float:
    """
    theta_0 = E[1 / (1 + mu0 sigma_{f,S})^2] for the problem's loss distribution.
    """
    sigmas = problem.sigmas
    if not np.any(sigmas > 0):
        raise AssumptionError("all sigma_{f,S} are zero; strong convexity is violated")
    return expected_theta_sq(sigmas, problem.loss_weights, mu0)
