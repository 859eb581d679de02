from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Protocol

import numpy as np

from .errors import AssumptionError, DimensionMismatchError, GenerationError
from .random_source import RandomSource
from .vectors import Vector, as_vector

# Tolerance for the "x* lies in every X_S" check.
FEASIBILITY_TOLERANCE = 1e-9


class LossLike(Protocol):
    """
    What the problem model needs from a loss component.
    """

    dimension: int
    sigma: float
    lipschitz: float

    def value(self, x: Vector) -> float:
        ...

    def gradient(self, x: Vector) -> Vector:
        ...

    def prox(self, x: Vector, mu: float) -> Vector:
        ...


class SetLike(Protocol):
    """
    What the problem model needs from a constraint set.
    """

    dimension: int

    def project(self, x: Vector) -> Vector:
        ...

    def distance(self, x: Vector) -> float:
        ...


def _normalized(weights, count, what):
    if weights is None:
        return None
    p = np.asarray(weights, dtype=np.float64).reshape(-1)
    if p.shape[0] != count or np.any(p < 0) or p.sum() <= 0:
        raise GenerationError(f"invalid {what} probabilities")
    p = p / p.sum()
    p.setflags(write=False)
    return p


@dataclass(frozen=True, eq=False)
class StochasticProblem:
    """
    A finite stochastic constrained problem

        min E[f(x;S)]  s.t.  x in the intersection of all X_S.

    Omega is discrete. With coupling "paired" one draw S = i selects both
    losses[i] and constraints[i]; with "independent" the loss and the set are
    drawn separately, i.e. Omega is the product of the two index sets.
    """

    dimension: int
    losses: tuple
    constraints: tuple
    loss_probabilities: Any = None
    constraint_probabilities: Any = None
    coupling: str = "independent"
    x_star: Any = None
    x0: Any = None
    test_losses: tuple | None = None
    relative_distance: bool = False
    name: str = "problem"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "losses", tuple(self.losses))
        set_(self, "constraints", tuple(self.constraints))
        if not self.losses:
            raise GenerationError("a problem needs at least one loss component")
        if not self.constraints:
            raise GenerationError("a problem needs at least one constraint set")
        for item in self.losses + self.constraints:
            if item.dimension != self.dimension:
                raise DimensionMismatchError(self.dimension, item.dimension, "component")
        if self.coupling not in ("independent", "paired"):
            raise GenerationError(f"unknown coupling {self.coupling!r}")
        if self.coupling == "paired" and len(self.losses) != len(self.constraints):
            raise GenerationError("paired coupling needs as many sets as losses")
        set_(self, "loss_probabilities",
             _normalized(self.loss_probabilities, len(self.losses), "loss"))
        set_(self, "constraint_probabilities",
             _normalized(self.constraint_probabilities, len(self.constraints), "constraint"))
        if self.coupling == "paired" and self.constraint_probabilities is not None:
            raise GenerationError("paired coupling takes its weights from the losses")
        x0 = np.zeros(self.dimension) if self.x0 is None else self.x0
        set_(self, "x0", as_vector(x0, self.dimension))
        if self.x_star is not None:
            x_star = as_vector(self.x_star, self.dimension)
            set_(self, "x_star", x_star)
            worst = max(s.distance(x_star) for s in self.constraints)
            if worst > FEASIBILITY_TOLERANCE:
                raise GenerationError(f"x* violates a constraint by {worst:.3e}")
        if self.test_losses is not None:
            set_(self, "test_losses", tuple(self.test_losses))

    # -- Omega -----------------------------------------------------------------

    @property
    def component_count(self) -> int:
        """
        Size of Omega.
        """
        if self.coupling == "paired":
            return len(self.losses)
        return len(self.losses) * len(self.constraints)

    def component(self, index: int):
        """
        The (LossComponent, ConstraintSet) pair for S = index.
        """
        if not 0 <= index < self.component_count:
            raise IndexError(f"component index {index} out of range")
        if self.coupling == "paired":
            return self.losses[index], self.constraints[index]
        p = len(self.constraints)
        return self.losses[index // p], self.constraints[index % p]

    def sample(self, rng: RandomSource):
        """
        Draw S from the problem distribution.

        Returns:
            (loss index, loss component, constraint set)
        """
        i = rng.choice(len(self.losses), self.loss_probabilities)
        if self.coupling == "paired":
            return i, self.losses[i], self.constraints[i]
        j = rng.choice(len(self.constraints), self.constraint_probabilities)
        return i, self.losses[i], self.constraints[j]

    @property
    def loss_weights(self) -> np.ndarray:
        """
        Marginal probabilities of the loss components.
        """
        if self.loss_probabilities is None:
            return np.full(len(self.losses), 1.0 / len(self.losses))
        return self.loss_probabilities

    @property
    def constraint_weights(self) -> np.ndarray:
        if self.coupling == "paired":
            return self.loss_weights
        if self.constraint_probabilities is None:
            return np.full(len(self.constraints), 1.0 / len(self.constraints))
        return self.constraint_probabilities

    def expectation(self, values) -> float:
        """
        E over the loss marginal of per-component values.
        """
        return float(np.dot(self.loss_weights, np.asarray(values, dtype=np.float64)))

    # -- objective and constants ----------------------------------------------

    def objective(self, x: Vector) -> float:
        """
        F(x), the exact weighted mean over all loss components.
        """
        return self.expectation([loss.value(x) for loss in self.losses])

    def objective_gradient(self, x: Vector) -> Vector:
        grads = np.array([loss.gradient(x) for loss in self.losses])
        return self.loss_weights @ grads

    def reported_objective(self, x: Vector) -> float:
        """
        F_test when a held-out loss list is attached, otherwise F.
        """
        if self.test_losses is None:
            return self.objective(x)
        return float(np.mean([loss.value(x) for loss in self.test_losses]))

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([loss.sigma for loss in self.losses])

    @property
    def sigma_f(self) -> float:
        """
        sigma_F = E[sigma_{f,S}].
        """
        return self.expectation(self.sigmas)

    @property
    def mean_sq_lipschitz(self) -> float:
        """
        E[L_{f,S}^2] over the loss marginal.
        """
        return self.expectation([loss.lipschitz ** 2 for loss in self.losses])

    def require_strong_convexity(self) -> None:
        if self.sigma_f <= 0:
            raise AssumptionError("every component has sigma = 0; sigma_F must be positive")

    def gradients_at_optimum(self) -> np.ndarray:
        """
        Row i holds grad f(x*; S_i).
        """
        if self.x_star is None:
            raise AssumptionError(f"{self.name} has no known optimum")
        return np.array([loss.gradient(self.x_star) for loss in self.losses])

    # -- feasibility -----------------------------------------------------------

    @cached_property
    def projector(self):
        # Imported lazily: the constraints package depends on core.
        from constraints.intersection import IntersectionProjector

        return IntersectionProjector(self.constraints)

    def feasibility_distance(self, x: Vector, tol: float = 1e-10) -> float:
        """
        dist_X(x) for X the intersection of every constraint set.
        """
        return self.projector.distance(x, tol=tol)

    def squared_error(self, x: Vector) -> float:
        """
        ||x - x*||^2, divided by ||x*||^2 for relative-distance problems.
        """
        if self.x_star is None:
            return float("nan")
        diff = x - self.x_star
        error = float(np.dot(diff, diff))
        if self.relative_distance:
            scale = float(np.dot(self.x_star, self.x_star))
            if scale > 0:
                error /= scale
        return error
