import numpy as np

from core.errors import DimensionMismatchError, GenerationError
from core.vectors import Vector, as_vector


class ConstraintSet:
    """
    A simple closed convex set with an exact projection [x]_X.
    """

    kind = "abstract"

    def __init__(self, dimension: int):
        self.dimension = int(dimension)

    def project(self, x: Vector) -> Vector:
        raise NotImplementedError("project is not implemented.")

    def inequalities(self):
        """
        (C, d) with the set equal to {x : C x <= d}, or None when the set is
        not a polyhedron.
        """
        return None

    def contains(self, x: Vector, tol: float = 0.0) -> bool:
        return self.distance(x) <= tol

    def distance(self, x: Vector) -> float:
        """
        dist_X(x) = ||x - [x]_X||
        """
        return float(np.linalg.norm(x - self.project(x)))

    def _check(self, x: Vector) -> Vector:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.dimension:
            raise DimensionMismatchError(self.dimension, x.shape[-1] if x.ndim else 0)
        return x


class WholeSpace(ConstraintSet):
    kind = "whole-space"

    def project(self, x: Vector) -> Vector:
        return self._check(x).copy()

    def distance(self, x: Vector) -> float:
        self._check(x)
        return 0.0

    def inequalities(self):
        return np.empty((0, self.dimension)), np.empty(0)


class Halfspace(ConstraintSet):
    """
    {x : c^T x <= d}
    """

    kind = "halfspace"

    def __init__(self, c, d: float):
        self.c = as_vector(c)
        self.d = float(d)
        self.c_sq = float(np.dot(self.c, self.c))
        if self.c_sq <= 0:
            raise GenerationError("halfspace normal must be nonzero")
        super().__init__(self.c.shape[0])

    def violation(self, x: Vector) -> float:
        return float(np.dot(self.c, self._check(x))) - self.d

    def project(self, x: Vector) -> Vector:
        excess = self.violation(x)
        if excess <= 0:
            return x.copy()
        return x - (excess / self.c_sq) * self.c

    def distance(self, x: Vector) -> float:
        return max(self.violation(x), 0.0) / np.sqrt(self.c_sq)

    def inequalities(self):
        return self.c[None, :], np.array([self.d])


class Hyperplane(ConstraintSet):
    """
    {x : c^T x = d}
    """

    kind = "hyperplane"

    def __init__(self, c, d: float):
        self.c = as_vector(c)
        self.d = float(d)
        self.c_sq = float(np.dot(self.c, self.c))
        if self.c_sq <= 0:
            raise GenerationError("hyperplane normal must be nonzero")
        super().__init__(self.c.shape[0])

    def project(self, x: Vector) -> Vector:
        x = self._check(x)
        return x - ((float(np.dot(self.c, x)) - self.d) / self.c_sq) * self.c

    def distance(self, x: Vector) -> float:
        x = self._check(x)
        return abs(float(np.dot(self.c, x)) - self.d) / np.sqrt(self.c_sq)

    def inequalities(self):
        return np.vstack([self.c, -self.c]), np.array([self.d, -self.d])


class Box(ConstraintSet):
    """
    {x : lo <= x <= hi} componentwise; entries may be infinite.
    """

    kind = "box"

    def __init__(self, lo, hi):
        self.lo = np.array(lo, dtype=np.float64).reshape(-1)
        self.hi = np.array(hi, dtype=np.float64).reshape(-1)
        if self.lo.shape != self.hi.shape:
            raise DimensionMismatchError(self.lo.shape[0], self.hi.shape[0], "box bound")
        if np.any(self.lo > self.hi):
            raise GenerationError("box needs lo <= hi componentwise")
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)
        super().__init__(self.lo.shape[0])

    def project(self, x: Vector) -> Vector:
        return np.clip(self._check(x), self.lo, self.hi)

    def inequalities(self):
        eye = np.eye(self.dimension)
        upper = np.isfinite(self.hi)
        lower = np.isfinite(self.lo)
        C = np.vstack([eye[upper], -eye[lower]])
        return C, np.concatenate([self.hi[upper], -self.lo[lower]])


class NonnegativeOrthant(Box):
    kind = "nonneg-orthant"

    def __init__(self, dimension: int):
        super().__init__(np.zeros(dimension), np.full(dimension, np.inf))


def project(constraint: ConstraintSet, x: Vector) -> Vector:
    return constraint.project(x)


def distance(constraint: ConstraintSet, x: Vector) -> float:
    return constraint.distance(x)
