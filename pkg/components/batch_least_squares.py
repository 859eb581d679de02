import numpy as np
from scipy import linalg

from core.errors import ProxError
from core.vectors import Vector, as_vector

from .component import LossComponent

# Distinct mu values whose Cholesky factor is kept.
MAX_CACHED_FACTORS = 8


class BatchLeastSquaresLoss(LossComponent):
    """
    Batched residual f(z) = ||A z - b||^2.

    sigma = 2 lambda_min(A^T A) and L = 2 lambda_max(A^T A), from a dense
    symmetric eigensolve done once.
    """

    kind = "batch-least-squares"

    def __init__(self, A, b):
        A = np.array(A, dtype=np.float64, ndmin=2)
        self.A = A
        self.A.setflags(write=False)
        self.b = as_vector(b, A.shape[0])
        self.gram = A.T @ A
        self.gram.setflags(write=False)
        self.Atb = A.T @ self.b
        eigenvalues = np.linalg.eigvalsh(self.gram)
        self.spectral_norm = float(np.sqrt(max(eigenvalues[-1], 0.0)))
        self._factors = {}
        super().__init__(
            A.shape[1],
            sigma=2.0 * float(eigenvalues[0]),
            lipschitz=2.0 * float(eigenvalues[-1]),
        )

    def value(self, x: Vector) -> float:
        r = self.A @ self._check(x) - self.b
        return float(np.dot(r, r))

    def gradient(self, x: Vector) -> Vector:
        return 2.0 * (self.gram @ self._check(x) - self.Atb)

    def prox(self, x: Vector, mu: float) -> Vector:
        """
        Solve (I + 2 mu A^T A) z = x + 2 mu A^T b by Cholesky.
        """
        mu = self._check_mu(mu)
        x = self._check(x)
        return linalg.cho_solve(
            self.factor(mu), x + 2.0 * mu * self.Atb, check_finite=False
        )

    def factor(self, mu: float):
        """
        Cholesky factor of I + 2 mu A^T A, cached per mu.
        """
        factor = self._factors.get(mu)
        if factor is not None:
            return factor
        system = np.eye(self.dimension) + 2.0 * mu * self.gram
        try:
            factor = linalg.cho_factor(system, check_finite=False)
        except linalg.LinAlgError as e:
            raise ProxError(f"Cholesky factorization failed: {e}") from e
        if len(self._factors) >= MAX_CACHED_FACTORS:
            self._factors.clear()
        self._factors[mu] = factor
        return factor

    def subgradient_bound(self, radius: float) -> float:
        s = self.spectral_norm
        return 2.0 * s * (s * radius + float(np.linalg.norm(self.b)))
