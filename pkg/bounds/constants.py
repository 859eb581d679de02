import logging
import math
from dataclasses import dataclass, fields

import numpy as np

from constraints.regularity import estimate_kappa
from core.errors import AssumptionError, MissingConstantsError
from core.random_source import RandomSource
from schedules.contraction import expected_theta_sq

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemConstants:
    """
    The constants the convergence bounds are written in.

    Fields left as None are "unknown"; an evaluator that needs one raises
    MissingConstantsError naming every missing field.

    Attributes:
        r0: ||x^0 - x*||.
        kappa: Linear-regularity constant (>= 1).
        mean_sq_lipschitz: E[L_{f,S}^2].
        eta_sq: E[||grad f(x*; S)||^2].
        grad_norm: ||grad F(x*)||.
        sigmas: sigma_{f,S} per component.
        sigma_weights: Probabilities of the components (uniform if None).
        dist0: dist_X(x^0).
        mu0: Initial stepsize.
        gamma: Stepsize exponent.
    """

    r0: float | None = None
    kappa: float | None = None
    mean_sq_lipschitz: float | None = None
    eta_sq: float | None = None
    grad_norm: float | None = None
    sigmas: tuple | None = None
    sigma_weights: tuple | None = None
    dist0: float | None = None
    mu0: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or f.name in ("sigmas", "sigma_weights"):
                continue
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{f.name} must be finite and nonnegative, got {value}")
        if self.kappa is not None and self.kappa < 1:
            raise ValueError("kappa must be at least 1")
        if self.sigmas is not None:
            sigmas = tuple(float(s) for s in self.sigmas)
            if any(s < 0 for s in sigmas):
                raise ValueError("sigmas must be nonnegative")
            object.__setattr__(self, "sigmas", sigmas)
            if self.sigma_weights is not None:
                weights = np.asarray(self.sigma_weights, dtype=np.float64)
                if weights.shape[0] != len(sigmas) or np.any(weights < 0):
                    raise ValueError("sigma_weights must match sigmas")
                object.__setattr__(self, "sigma_weights", tuple(weights / weights.sum()))

    def require(self, *names) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise MissingConstantsError(missing)

    def replace(self, **changes) -> "ProblemConstants":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ProblemConstants(**values)

    @property
    def eta(self) -> float:
        self.require("eta_sq")
        return math.sqrt(self.eta_sq)

    def theta_bar(self, mu: float) -> float:
        """
        E[theta_S(mu)^2].
        """
        self.require("sigmas")
        weights = self.sigma_weights
        if weights is None:
            weights = np.full(len(self.sigmas), 1.0 / len(self.sigmas))
        return expected_theta_sq(self.sigmas, weights, mu)

    @property
    def theta0(self) -> float:
        self.require("mu0", "sigmas")
        return self.theta_bar(self.mu0)

    # Derived aggregates of the strongly convex analysis.

    def cap_a(self) -> float:
        """
        A = max{r0, mu0 eta / (1 - sqrt(theta0))}.
        """
        self.require("r0", "mu0", "eta_sq", "sigmas")
        theta0 = self.theta0
        if theta0 >= 1:
            raise AssumptionError("theta0 must be below 1")
        return max(self.r0, self.mu0 * self.eta / (1.0 - math.sqrt(theta0)))

    def cap_b(self) -> float:
        """
        B = sqrt(2 eta^2) + A sqrt(2 E[L^2]).
        """
        self.require("mean_sq_lipschitz")
        return math.sqrt(2.0 * self.eta_sq) + self.cap_a() * math.sqrt(2.0 * self.mean_sq_lipschitz)

    def _feasibility_term(self, kappa_power: int) -> float:
        # (dist0 + 2 mu0 kappa^p B) / (mu0 ln(kappa / (kappa - 1)))
        self.require("dist0", "kappa", "mu0")
        if self.kappa == 1:
            if self.dist0 > 0:
                raise AssumptionError(
                    "kappa = 1 with an infeasible x0 makes the feasibility term singular"
                )
            return 0.0
        b = self.cap_b()
        log_ratio = math.log(self.kappa / (self.kappa - 1.0))
        return (self.dist0 + 2.0 * self.mu0 * self.kappa ** kappa_power * b) / (self.mu0 * log_ratio)

    def _noise_terms(self) -> float:
        a = self.cap_a()
        eta = self.eta
        lsq = self.mean_sq_lipschitz
        return 2.0 * eta * math.sqrt(2.0 * self.eta_sq + 2.0 * lsq * a * a) + 2.0 * eta * a * math.sqrt(lsq)

    def cap_d(self, gamma: float | None = None) -> float:
        """
        The noise constant D of the decaying-stepsize bound.
        """
        gamma = self.gamma if gamma is None else gamma
        self.require("grad_norm", "mean_sq_lipschitz", "kappa")
        if gamma is None:
            raise MissingConstantsError(["gamma"])
        b = self.cap_b()
        bracket = self._feasibility_term(1) + 3.0 ** gamma * b * self.kappa
        return 4.0 * self.grad_norm * bracket + self._noise_terms()

    def cap_d_restart(self, gamma: float | None = None) -> float:
        """
        D_r, the restarted-scheme analogue of D (kappa^2 in place of kappa).
        """
        gamma = self.gamma if gamma is None else gamma
        self.require("grad_norm", "mean_sq_lipschitz", "kappa")
        if gamma is None:
            raise MissingConstantsError(["gamma"])
        b = self.cap_b()
        bracket = self._feasibility_term(2) + 3.0 ** gamma * b * self.kappa ** 2
        return 4.0 * self.grad_norm * bracket + self._noise_terms()

    @classmethod
    def from_problem(cls, problem, mu0: float, gamma: float | None = None,
                     kappa: float | None = None, samples: int = 200,
                     rng: RandomSource | None = None, x0=None) -> "ProblemConstants":
        """
        Measure every constant available for a problem with a known optimum.

        kappa is estimated with `samples` sample points unless given.
        """
        x0 = problem.x0 if x0 is None else np.asarray(x0, dtype=np.float64)
        values = {
            "sigmas": tuple(problem.sigmas),
            "sigma_weights": tuple(problem.loss_weights),
            "mean_sq_lipschitz": problem.mean_sq_lipschitz,
            "dist0": problem.feasibility_distance(x0),
            "mu0": mu0,
            "gamma": gamma,
        }
        if problem.x_star is not None:
            grads = problem.gradients_at_optimum()
            values["r0"] = float(np.linalg.norm(x0 - problem.x_star))
            values["eta_sq"] = problem.expectation(np.sum(grads ** 2, axis=1))
            values["grad_norm"] = float(np.linalg.norm(problem.loss_weights @ grads))
        if kappa is None:
            kappa = estimate_kappa(problem, samples, rng or RandomSource(0))
            logger.info("kappa_hat (lower bound) = %.6g", kappa)
        values["kappa"] = kappa
        return cls(**values)
