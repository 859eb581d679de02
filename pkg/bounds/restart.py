import math

from core.errors import AssumptionError
from schedules.stepsize import epoch_length, epoch_stepsize

# Cap on the fixed-point refinement of the epoch count.
MAX_REFINEMENTS = 200


def _sum_factor(gamma: float, epochs: int) -> float:
    # Bound on sum_{i <= ceil(T/2)} i^{-gamma}: 1/(1-gamma) below one, the
    # partial harmonic sum 1 + ln ceil(T/2) from one on (tightened by
    # gamma/(gamma-1) above one).
    if gamma < 1:
        return 1.0 / (1.0 - gamma)
    harmonic = 1.0 + math.log(max(math.ceil(epochs / 2), 1))
    if gamma > 1:
        return min(harmonic, gamma / (gamma - 1.0))
    return harmonic


def restart_constant(c, gamma: float, epochs: int = 1) -> float:
    """
    C = psi / (2 ln(1/sqrt(theta0))) + mu_1^2 / (1 - theta0)^2 with mu_1 = mu0.
    """
    theta0 = c.theta0
    if not 0 < theta0 < 1:
        raise AssumptionError("theta0 must lie in (0, 1)")
    return _sum_factor(gamma, epochs) / math.log(1.0 / theta0) + c.mu0 ** 2 / (1.0 - theta0) ** 2


def rspp_plan(epsilon: float, gamma: float, c):
    """
    Number of RSPP epochs guaranteeing E||x^{K_T,T} - x*||^2 <= epsilon:

        T = ceil(max{ln(2 r0^2 / eps) / ln(1/theta0), (2^{g+1} D_r C / eps)^{1/g}})

    and the matching lower bound T^{1+g} / (1+g) on the total number of inner
    iterations. For gamma >= 1 the constant C depends on T and the epoch count
    is the fixed point of the inequality.

    Returns:
        (T, total_iterations_lower_bound)
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    c.require("r0", "mu0", "sigmas")
    theta0 = c.theta0
    if not 0 < theta0 < 1:
        raise AssumptionError("theta0 must lie in (0, 1)")
    d_r = c.cap_d_restart(gamma)
    linear_phase = math.log(2.0 * c.r0 ** 2 / epsilon) / math.log(1.0 / theta0) if c.r0 > 0 else 0.0

    def epochs_for(previous):
        noise_phase = (2.0 ** (gamma + 1) * d_r * restart_constant(c, gamma, previous) / epsilon) ** (1.0 / gamma)
        return max(math.ceil(max(linear_phase, noise_phase)), 1)

    epochs = epochs_for(1)
    if gamma >= 1:
        for _ in range(MAX_REFINEMENTS):
            refined = epochs_for(epochs)
            if refined <= epochs:
                break
            epochs = refined
    return epochs, epochs ** (1.0 + gamma) / (1.0 + gamma)


def rspp_feasibility_bound(c, t: int, gamma: float) -> float:
    """
    Bound on sqrt(E[dist_X(x^{K_t,t})^2]) after t epochs of RSPP with
    mu_t = mu0 / t^gamma and K_t = ceil(t^gamma).
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    c.require("dist0", "kappa", "mu0")
    b = c.cap_b()
    kappa, mu0 = c.kappa, c.mu0
    base = 1.0 - 1.0 / kappa
    lengths = [0] + [epoch_length(i, gamma) for i in range(1, t + 1)]
    lag = t - math.ceil(t / 2)
    all_epochs = sum(lengths[1:]) / 2.0
    recent = sum(lengths[lag:]) / 2.0
    lagged_mu = mu0 if lag == 0 else epoch_stepsize(mu0, lag, gamma)
    return (
        base ** all_epochs * c.dist0
        + 2.0 * base ** recent * mu0 * kappa ** 2 * b
        + 2.0 * lagged_mu * kappa ** 2 * b
    )
