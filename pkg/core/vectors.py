from typing import TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionMismatchError, NonFiniteError

# Dense float64 vectors and matrices. Vectors are never mutated in place by
# the library; every operation returns a fresh array.
Vector: TypeAlias = NDArray[np.float64]
Matrix: TypeAlias = NDArray[np.float64]


def as_vector(values: ArrayLike, dimension: int | None = None) -> Vector:
    """
    Convert values to a finite, read-only float64 vector.

    Args:
        values: Anything numpy can turn into a 1-D array.
        dimension: Expected dimension (optional).

    Returns:
        A new 1-D float64 array flagged as non-writeable.
    """
    vector = np.array(values, dtype=np.float64).reshape(-1)
    if dimension is not None and vector.shape[0] != dimension:
        raise DimensionMismatchError(dimension, vector.shape[0])
    if not np.all(np.isfinite(vector)):
        raise NonFiniteError("vector has non-finite entries")
    vector.setflags(write=False)
    return vector


def check_dimension(x: Vector, dimension: int, what: str = "vector") -> None:
    if x.ndim != 1 or x.shape[0] != dimension:
        raise DimensionMismatchError(dimension, x.shape[-1] if x.ndim else 0, what)


def dot(a: Vector, b: Vector) -> float:
    """
    Euclidean scalar product of two vectors of equal dimension.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_dimension(b, a.shape[0])
    return float(np.dot(a, b))


def norm(a: Vector) -> float:
    """
    Euclidean norm.
    """
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)))


def squared_distance(a: Vector, b: Vector) -> float:
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.dot(diff, diff))


def is_finite(x: Vector) -> bool:
    return bool(np.all(np.isfinite(x)))
