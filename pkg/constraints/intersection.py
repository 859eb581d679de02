import logging

import numpy as np
from scipy import optimize

from core.errors import AssumptionError, ConvergenceError
from core.vectors import Vector

from .sets import Halfspace

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
MAX_CYCLES = 100_000
METHODS = ("auto", "qp", "dykstra")


class IntersectionProjector:
    """
    Exact projection onto the intersection of simple sets.

    When every set is a polyhedron (halfspaces, hyperplanes, boxes, the whole
    space) the projection is the least-distance quadratic program
    min ||y - x|| s.t. C y <= d, solved through its nonnegative least-squares
    dual and then refined on the active rows. Other intersections, and
    polyhedral ones where that solve does not reach tol, go through Dykstra's
    alternating-projection algorithm.

    In Dykstra, halfspaces are stacked into one matrix so that violation
    checks over many of them cost a single matrix-vector product. Within a
    cycle only the working set is visited: sets violated at the start of the
    cycle plus sets carrying a nonzero Dykstra increment. Visiting any other
    set would be a no-op, and termination requires every set to hold within
    tol, so the returned point is the projection onto the full intersection.
    """

    def __init__(self, sets, method: str = "auto"):
        """
        Initialize the projector.
        Args:
            sets: Sequence of ConstraintSet sharing one dimension.
            method: "auto" (quadratic program when polyhedral, else Dykstra),
                "qp" or "dykstra".
        """
        if method not in METHODS:
            raise ValueError(f"unknown projection method {method!r}")
        self.sets = tuple(sets)
        self.dimension = self.sets[0].dimension
        self.halfspace_index = np.array(
            [i for i, s in enumerate(self.sets) if isinstance(s, Halfspace)], dtype=int
        )
        self.other_index = np.array(
            [i for i, s in enumerate(self.sets) if not isinstance(s, Halfspace)], dtype=int
        )
        if self.halfspace_index.size:
            hs = [self.sets[i] for i in self.halfspace_index]
            self.C = np.array([s.c for s in hs])
            self.d = np.array([s.d for s in hs])
            self.c_norm = np.sqrt(np.array([s.c_sq for s in hs]))
        self.polyhedron = self._stack_inequalities()
        if method == "qp" and self.polyhedron is None:
            raise ValueError("the qp method needs every set to be a polyhedron")
        self.method = "dykstra" if self.polyhedron is None else method

    def _stack_inequalities(self):
        rows, rhs = [], []
        for s in self.sets:
            description = s.inequalities()
            if description is None:
                return None
            rows.append(description[0])
            rhs.append(description[1])
        C = np.vstack(rows)
        d = np.concatenate(rhs)
        scale = np.linalg.norm(C, axis=1)
        return C / scale[:, None], d / scale

    def distances(self, x: Vector) -> np.ndarray:
        """
        Per-set distances dist_{X_i}(x), in set order.
        """
        out = np.empty(len(self.sets))
        if self.halfspace_index.size:
            out[self.halfspace_index] = np.maximum(self.C @ x - self.d, 0.0) / self.c_norm
        for i in self.other_index:
            out[i] = self.sets[i].distance(x)
        return out

    def project(self, x: Vector, tol: float = DEFAULT_TOLERANCE,
                max_cycles: int = MAX_CYCLES) -> Vector:
        """
        Projection of x onto the intersection.

        Args:
            x: Point to project.
            tol: Feasibility slack of the result; for Dykstra also the
                per-cycle displacement tolerance.
            max_cycles: Dykstra cycle cap.

        Returns:
            The projected point.

        Raises:
            AssumptionError: the polyhedral sets have no common point.
            ConvergenceError: Dykstra hit max_cycles.
        """
        if tol <= 0:
            raise ValueError("tol must be positive")
        x = np.array(x, dtype=np.float64)
        if len(self.sets) == 1:
            return self.sets[0].project(x)
        if self.method != "dykstra":
            y = self._least_distance(x, tol)
            if y is not None:
                return y
            logger.debug("least-distance solve missed tol=%g; falling back to Dykstra", tol)
        return self._dykstra(x, tol, max_cycles)

    def _least_distance(self, x: np.ndarray, tol: float):
        """
        Lawson-Hanson least-distance programming: with h = (C x - d) / s,
        s the largest violation, the nonnegative least-squares fit u of
        [-C^T; h^T] u ~ e_{n+1} has residual r and the projection is
        x - s r[:n] / r[n]. The rows with u > 0 are then solved as equalities
        to polish the point.

        Returns None when the result violates some row by more than tol (or
        by more than rounding at the scale of x).
        """
        C, d = self.polyhedron
        excess = C @ x - d
        if excess.size == 0 or excess.max() <= 0.0:
            return x
        scale = float(excess.max())
        E = np.vstack([-C.T, excess[None, :] / scale])
        target = np.zeros(self.dimension + 1)
        target[-1] = 1.0
        try:
            u, residual_norm = optimize.nnls(E, target, maxiter=50 * E.shape[1])
        except RuntimeError as e:
            logger.debug("nnls failed: %s", e)
            return None
        if residual_norm <= 1e-12:
            raise AssumptionError("the constraint sets have no common point")
        r = E @ u - target
        y = x - scale * r[:-1] / r[-1]

        slack = max(tol, 1e-14 * (np.linalg.norm(x) + np.abs(d).max()))
        active = u > 1e-12 * u.max()
        if np.any(active):
            Ca = C[active]
            lam = np.linalg.lstsq(Ca @ Ca.T, Ca @ x - d[active], rcond=None)[0]
            polished = x - Ca.T @ lam
            close = np.linalg.norm(polished - y) <= 1e-6 * (1.0 + np.linalg.norm(y - x))
            if close and lam.min() >= -slack and (C @ polished - d).max() <= slack:
                y = polished
        if float((C @ y - d).max()) > slack:
            return None
        return y

    def _dykstra(self, x: np.ndarray, tol: float, max_cycles: int) -> Vector:
        increments = np.zeros((len(self.sets), self.dimension))
        engaged = np.zeros(len(self.sets), dtype=bool)
        for cycle in range(max_cycles):
            x_start = x.copy()
            working = np.flatnonzero(engaged | (self.distances(x) > 0.0))
            if working.size == 0:
                return x
            moved = 0.0
            for i in working:
                y = x + increments[i]
                x = self.sets[i].project(y)
                new_increment = y - x
                moved += float(np.sum((new_increment - increments[i]) ** 2))
                increments[i] = new_increment
                engaged[i] = bool(np.any(new_increment))
            displacement = float(np.linalg.norm(x - x_start))
            if (
                displacement < tol
                and np.sqrt(moved) < tol
                and float(self.distances(x).max()) <= tol
            ):
                logger.debug("Dykstra converged after %d cycles", cycle + 1)
                return x
        raise ConvergenceError(
            f"Dykstra did not converge within {max_cycles} cycles",
            best_iterate=x,
            iterations=max_cycles,
        )

    def distance(self, x: Vector, tol: float = DEFAULT_TOLERANCE) -> float:
        """
        dist_X(x) with X the intersection.
        """
        return float(np.linalg.norm(x - self.project(x, tol=tol)))


def project_intersection(sets, x: Vector, tol: float = DEFAULT_TOLERANCE) -> Vector:
    return IntersectionProjector(sets).project(x, tol=tol)


def dist_intersection(sets, x: Vector, tol: float = DEFAULT_TOLERANCE) -> float:
    """
    Distance from x to the intersection of the given sets.
    """
    return IntersectionProjector(sets).distance(x, tol=tol)
