import numpy as np

from core.errors import DimensionMismatchError
from core.vectors import Vector


class LossComponent:
    """
    One sampled objective term f(.;S).

    Subclasses implement value, gradient and the Moreau proximal operator
    z_mu(x) = argmin_z f(z) + ||z - x||^2 / (2 mu). The curvature constants
    sigma (restricted strong convexity) and lipschitz (gradient Lipschitz
    modulus) are computed once at construction.
    """

    kind = "abstract"

    def __init__(self, dimension: int, sigma: float, lipschitz: float):
        """
        Initialize the component.
        Args:
            dimension: Dimension n of the decision variable.
            sigma: Strong-convexity constant sigma_{f,S} >= 0.
            lipschitz: Gradient Lipschitz constant L_{f,S}.
        """
        self.dimension = int(dimension)
        self.sigma = max(float(sigma), 0.0)
        self.lipschitz = float(lipschitz)
        if np.isfinite(self.lipschitz) and self.sigma > self.lipschitz:
            # eigen-extremes can cross by rounding only
            self.sigma = self.lipschitz

    def value(self, x: Vector) -> float:
        raise NotImplementedError("value is not implemented.")

    def gradient(self, x: Vector) -> Vector:
        raise NotImplementedError("gradient is not implemented.")

    def prox(self, x: Vector, mu: float) -> Vector:
        raise NotImplementedError("prox is not implemented.")

    def subgradient_bound(self, radius: float) -> float:
        """
        Bound on ||grad f|| over the ball of the given radius around 0.
        """
        raise NotImplementedError("subgradient_bound is not implemented.")

    def moreau_value(self, x: Vector, mu: float) -> float:
        """
        Moreau envelope f_mu(x) = f(z) + ||z - x||^2 / (2 mu), z = prox(x, mu).
        """
        z = self.prox(x, mu)
        diff = z - x
        return self.value(z) + float(np.dot(diff, diff)) / (2.0 * mu)

    def moreau_gradient(self, x: Vector, mu: float) -> Vector:
        """
        Gradient of the Moreau envelope, (x - prox(x, mu)) / mu.
        """
        return (x - self.prox(x, mu)) / mu

    def _check(self, x: Vector) -> Vector:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.dimension:
            raise DimensionMismatchError(self.dimension, x.shape[-1] if x.ndim else 0)
        return x

    @staticmethod
    def _check_mu(mu: float) -> float:
        if not mu > 0:
            raise ValueError(f"prox parameter mu must be positive, got {mu}")
        return float(mu)

    def __repr__(self):
        return (
            f"{type(self).__name__}(n={self.dimension}, "
            f"sigma={self.sigma:.4g}, L={self.lipschitz:.4g})"
        )


def value(component: LossComponent, x: Vector) -> float:
    return component.value(x)


def gradient(component: LossComponent, x: Vector) -> Vector:
    return component.gradient(x)


def prox(component: LossComponent, x: Vector, mu: float) -> Vector:
    return component.prox(x, mu)


def moreau_value(component: LossComponent, x: Vector, mu: float) -> float:
    return component.moreau_value(x, mu)


def moreau_gradient(component: LossComponent, x: Vector, mu: float) -> Vector:
    return component.moreau_gradient(x, mu)
