import numpy as np

from core.vectors import Vector, as_vector

from .component import LossComponent


class LinearResidualLoss(LossComponent):
    """
    Elementary squared residual f(z) = (a^T z - b)^2.

    Rank one, hence sigma = 0 as soon as n > 1.
    """

    kind = "linear-residual-squared"

    def __init__(self, a, b: float):
        self.a = as_vector(a)
        self.b = float(b)
        self.a_sq = float(np.dot(self.a, self.a))
        dimension = self.a.shape[0]
        sigma = 2.0 * self.a_sq if dimension == 1 else 0.0
        super().__init__(dimension, sigma=sigma, lipschitz=2.0 * self.a_sq)

    def residual(self, x: Vector) -> float:
        return float(np.dot(self.a, self._check(x))) - self.b

    def value(self, x: Vector) -> float:
        return self.residual(x) ** 2

    def gradient(self, x: Vector) -> Vector:
        return 2.0 * self.residual(x) * self.a

    def prox(self, x: Vector, mu: float) -> Vector:
        mu = self._check_mu(mu)
        step = 2.0 * mu * self.residual(x) / (1.0 + 2.0 * mu * self.a_sq)
        return x - step * self.a

    def subgradient_bound(self, radius: float) -> float:
        a_norm = np.sqrt(self.a_sq)
        return 2.0 * a_norm * (a_norm * radius + abs(self.b))
