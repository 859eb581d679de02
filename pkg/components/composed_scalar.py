import numpy as np
from scipy import optimize, special

from core.errors import ProxError
from core.vectors import Vector, as_vector

from .component import LossComponent

# Iteration cap of the 1-D prox solve.
MAX_SCALAR_ITERATIONS = 200


class ScalarLoss:
    """
    A convex scalar function l(t) with its derivative.

    curvature_lower / curvature_upper bound l'' from below and above.
    """

    curvature_lower = 0.0
    curvature_upper = np.inf

    def value(self, t: float) -> float:
        raise NotImplementedError("value is not implemented.")

    def derivative(self, t: float) -> float:
        raise NotImplementedError("derivative is not implemented.")


class SquaredScalarLoss(ScalarLoss):
    """
    l(t) = (t - y)^2
    """

    curvature_lower = 2.0
    curvature_upper = 2.0

    def __init__(self, y: float):
        self.y = float(y)

    def value(self, t):
        return (t - self.y) ** 2

    def derivative(self, t):
        return 2.0 * (t - self.y)


class LogisticScalarLoss(ScalarLoss):
    """
    l(t) = log(1 + exp(-y t)) for a label y in {-1, +1}.
    """

    curvature_lower = 0.0

    def __init__(self, y: float):
        self.y = float(y)
        self.curvature_upper = 0.25 * self.y ** 2

    def value(self, t):
        return float(np.logaddexp(0.0, -self.y * t))

    def derivative(self, t):
        return float(-self.y * special.expit(-self.y * t))


class ComposedScalarLoss(LossComponent):
    """
    f(x) = l(a^T x) for a convex scalar loss l.

    The prox reduces to the 1-D problem

        min_t l(t) + (t - a^T x)^2 / (2 mu ||a||^2),

    solved on an exact bracket with scipy's safeguarded Brent method, then
    z = x + ((t* - a^T x) / ||a||^2) a.
    """

    kind = "composed-scalar"

    def __init__(self, a, scalar_loss: ScalarLoss):
        self.a = as_vector(a)
        self.loss = scalar_loss
        self.a_sq = float(np.dot(self.a, self.a))
        dimension = self.a.shape[0]
        sigma = scalar_loss.curvature_lower * self.a_sq if dimension == 1 else 0.0
        super().__init__(
            dimension, sigma=sigma, lipschitz=scalar_loss.curvature_upper * self.a_sq
        )

    def value(self, x: Vector) -> float:
        return float(self.loss.value(float(np.dot(self.a, self._check(x)))))

    def gradient(self, x: Vector) -> Vector:
        return self.loss.derivative(float(np.dot(self.a, self._check(x)))) * self.a

    def prox(self, x: Vector, mu: float) -> Vector:
        mu = self._check_mu(mu)
        x = self._check(x)
        if self.a_sq == 0.0:
            return x.copy()
        s = float(np.dot(self.a, x))
        scale = mu * self.a_sq
        slope = self.loss.derivative(s)
        if slope == 0.0:
            return x.copy()

        def stationarity(t):
            return self.loss.derivative(t) + (t - s) / scale

        # l' is nondecreasing, so the root lies between s - scale * l'(s) and s
        other = s - scale * slope
        lo, hi = min(s, other), max(s, other)
        try:
            t_star, result = optimize.brentq(
                stationarity,
                lo,
                hi,
                xtol=1e-14,
                rtol=4 * np.finfo(float).eps,
                maxiter=MAX_SCALAR_ITERATIONS,
                full_output=True,
                disp=False,
            )
        except ValueError as e:
            raise ProxError(f"1-D prox bracket failed: {e}") from e
        if not result.converged:
            raise ProxError(
                f"1-D prox solver did not converge in {MAX_SCALAR_ITERATIONS} iterations"
            )
        return x + ((t_star - s) / self.a_sq) * self.a

    def subgradient_bound(self, radius: float) -> float:
        a_norm = np.sqrt(self.a_sq)
        t_max = a_norm * radius
        slope = max(abs(self.loss.derivative(t_max)), abs(self.loss.derivative(-t_max)))
        return slope * a_norm
