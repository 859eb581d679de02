import numpy as np

from core.vectors import Vector, as_vector

from .component import LossComponent


class QuadraticNormLoss(LossComponent):
    """
    f(x) = (lam / 2) ||x - c||^2, with c = 0 unless a center is given.
    """

    kind = "quadratic-norm"

    def __init__(self, lam: float, dimension: int, center=None):
        if lam < 0:
            raise ValueError("lam must be nonnegative")
        self.lam = float(lam)
        self.center = (
            np.zeros(dimension) if center is None else as_vector(center, dimension)
        )
        super().__init__(dimension, sigma=self.lam, lipschitz=self.lam)

    def value(self, x: Vector) -> float:
        diff = self._check(x) - self.center
        return 0.5 * self.lam * float(np.dot(diff, diff))

    def gradient(self, x: Vector) -> Vector:
        return self.lam * (self._check(x) - self.center)

    def prox(self, x: Vector, mu: float) -> Vector:
        mu = self._check_mu(mu)
        x = self._check(x)
        return (x + mu * self.lam * self.center) / (1.0 + mu * self.lam)

    def subgradient_bound(self, radius: float) -> float:
        return self.lam * (radius + float(np.linalg.norm(self.center)))
