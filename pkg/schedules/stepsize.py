import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepsizeSchedule:
    """
    Stepsize rule mu_k.

    kind "constant": mu_k = mu0 for every k.
    kind "poly-decay": mu_0 = mu0 and mu_k = mu0 / k^gamma for k >= 1.
    """

    kind: str
    mu0: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "poly-decay"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not self.mu0 > 0:
            raise ValueError("mu0 must be positive")
        if self.kind == "poly-decay" and not self.gamma > 0:
            raise ValueError("gamma must be positive for a poly-decay schedule")

    @classmethod
    def constant(cls, mu: float) -> "StepsizeSchedule":
        return cls("constant", mu)

    @classmethod
    def poly_decay(cls, mu0: float, gamma: float) -> "StepsizeSchedule":
        return cls("poly-decay", mu0, gamma)

    def at(self, k: int) -> float:
        if k < 0:
            raise ValueError("k must be nonnegative")
        if self.kind == "constant" or k == 0:
            return self.mu0
        return self.mu0 / k ** self.gamma

    def values(self, count: int) -> np.ndarray:
        """
        mu_0, ..., mu_{count-1} as an array.
        """
        if self.kind == "constant":
            return np.full(count, self.mu0)
        k = np.arange(count, dtype=np.float64)
        k[0] = 1.0
        return self.mu0 / k ** self.gamma

    def label(self) -> str:
        if self.kind == "constant":
            return f"mu={self.mu0:g}"
        return f"mu0={self.mu0:g}, gamma={self.gamma:g}"


def stepsize_at(schedule: StepsizeSchedule, k: int) -> float:
    return schedule.at(k)


def phi(alpha: float, x: float) -> float:
    """
    (x^alpha - 1) / alpha, and log x at alpha = 0.
    """
    if not x > 0:
        raise ValueError(f"phi needs x > 0, got {x}")
    if alpha == 0:
        return math.log(x)
    # expm1 keeps the small-alpha limit accurate
    return math.expm1(alpha * math.log(x)) / alpha


def epoch_length(t: int, gamma: float) -> int:
    """
    K_t = ceil(t^gamma); powers that land on an integer up to rounding
    (8^(4/3), say) are not bumped to the next integer.
    """
    value = float(t) ** gamma
    nearest = round(value)
    if abs(value - nearest) < 1e-9 * max(1.0, value):
        return max(int(nearest), 1)
    return max(math.ceil(value), 1)


def epoch_stepsize(mu0: float, t: int, gamma: float) -> float:
    """
    mu_t = mu0 / t^gamma for epoch t >= 1.
    """
    return mu0 / float(t) ** gamma
