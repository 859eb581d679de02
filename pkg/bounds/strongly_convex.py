import math
from dataclasses import dataclass

from core.errors import AssumptionError, ConvergenceError
from schedules.stepsize import phi

INV_E = math.exp(-1.0)
# Largest iteration count the complexity search will try.
MAX_SEARCH = 2 ** 62


@dataclass(frozen=True)
class ConstantStepEnvelope:
    value: float
    radius: float
    theta_bar: float


def constant_step_envelope(c, mu: float, k: int) -> ConstantStepEnvelope:
    """
    Linear convergence to a noise region for constant-stepsize SPP:

        E||x^k - x*||^2 <= 2 theta^k r0^2 + 2 mu^2 eta^2 / (1 - sqrt(theta))^2

    with theta = E[theta_S(mu)^2]; the region radius is mu eta / (1 - sqrt(theta)).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    c.require("r0", "eta_sq", "sigmas")
    theta_bar = c.theta_bar(mu)
    if theta_bar >= 1:
        raise AssumptionError("E[theta_S(mu)^2] must be below 1")
    radius = mu * c.eta / (1.0 - math.sqrt(theta_bar))
    value = 2.0 * theta_bar ** k * c.r0 ** 2 + 2.0 * radius ** 2
    return ConstantStepEnvelope(value=value, radius=radius, theta_bar=theta_bar)


def strongly_convex_bound(c, k: int, gamma: float, noise_scaled: bool = False) -> float:
    """
    Nonasymptotic bound on E||x^k - x*||^2 for SPP with mu_k = mu0 / k^gamma.

    gamma in (0, 1):
        theta0^{phi_{1-g}(k)} r0^2
        + D theta0^{phi_{1-g}(k) - phi_{1-g}((k+1)/2)} mu0^2 [phi_{1-2g}((k+1)/2) + 2]
        + D mu0^2 4^g / ((1 - theta0) k^g)

    gamma = 1, split on theta0 against 1/e; the noise term is printed without
    D in the closed form, noise_scaled=True multiplies it by D as the
    recursion it comes from does.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    c.require("r0", "mu0", "sigmas")
    theta0 = c.theta0
    if not 0 < theta0 < 1:
        raise AssumptionError("theta0 must lie in (0, 1)")
    mu0, r0 = c.mu0, c.r0

    if gamma < 1:
        d = c.cap_d(gamma)
        head = phi(1.0 - gamma, k)
        half = (k + 1) / 2.0
        transient = theta0 ** head * r0 ** 2
        middle = d * theta0 ** (head - phi(1.0 - gamma, half)) * mu0 ** 2 * (phi(1.0 - 2.0 * gamma, half) + 2.0)
        tail = d * mu0 ** 2 * 4.0 ** gamma / ((1.0 - theta0) * k ** gamma)
        return transient + middle + tail

    log_inv = math.log(1.0 / theta0)
    transient = theta0 ** math.log(k) * r0 ** 2
    if math.isclose(theta0, INV_E, rel_tol=1e-12):
        noise = 2.0 * mu0 ** 2 * math.log(k) / k
    elif theta0 < INV_E:
        noise = 2.0 * mu0 ** 2 / (k * (log_inv - 1.0))
    else:
        noise = (2.0 / k) ** log_inv * mu0 ** 2 / (1.0 - log_inv)
    if noise_scaled:
        noise *= c.cap_d(gamma)
    return transient + noise


def theta0_regime(theta0: float) -> str:
    """
    Which gamma = 1 branch applies: "fast", "boundary" or "slow".
    """
    if math.isclose(theta0, INV_E, rel_tol=1e-12):
        return "boundary"
    return "fast" if theta0 < INV_E else "slow"


def iteration_complexity(epsilon: float, gamma: float, c, noise_scaled: bool = False) -> int:
    """
    Smallest k with strongly_convex_bound(c, k, gamma) <= epsilon.

    theta0 comes from c (its sigmas and mu0). The search doubles k until the
    bound drops below epsilon, then bisects on the bracket.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")

    def below(k):
        return strongly_convex_bound(c, k, gamma, noise_scaled) <= epsilon

    hi = 1
    while not below(hi):
        hi *= 2
        if hi > MAX_SEARCH:
            raise ConvergenceError(
                f"bound does not reach {epsilon:g} within 2^62 iterations", iterations=MAX_SEARCH
            )
    lo = hi // 2
    if lo == 0:
        return 1
    # invariant: below(hi) and not below(lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi


def feasibility_bound(c, k: int, schedule) -> float:
    """
    Bound on sqrt(E[dist_X(x^k)^2]) for nonincreasing stepsizes:

        (1 - 1/kappa)^{k/2} [dist0 + 2 mu0 kappa B] + 2 mu_{k - ceil(k/2)} kappa B
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    c.require("dist0", "kappa")
    b = c.cap_b()
    kappa = c.kappa
    mu0 = schedule.mu0
    contraction = (1.0 - 1.0 / kappa) ** (k / 2.0)
    lagged = schedule.at(k - math.ceil(k / 2))
    return contraction * (c.dist0 + 2.0 * mu0 * kappa * b) + 2.0 * lagged * kappa * b


def boundedness_radius(c) -> float:
    """
    Cap on sqrt(E||x^k - x*||^2) for nonincreasing stepsizes.
    """
    return c.cap_a()
