from .errors import (
    AssumptionError,
    ConfigError,
    ConvergenceError,
    DimensionMismatchError,
    GenerationError,
    HypothesisWarning,
    MissingConstantsError,
    NonFiniteError,
    OptimizationError,
    ProxError,
    ReturnsFormatError,
)
from .problem import StochasticProblem
from .random_source import RandomSource
from .vectors import Matrix, Vector, as_vector, dot, norm, squared_distance

__all__ = [
    "AssumptionError",
    "ConfigError",
    "ConvergenceError",
    "DimensionMismatchError",
    "GenerationError",
    "HypothesisWarning",
    "Matrix",
    "MissingConstantsError",
    "NonFiniteError",
    "OptimizationError",
    "ProxError",
    "RandomSource",
    "ReturnsFormatError",
    "StochasticProblem",
    "Vector",
    "as_vector",
    "dot",
    "norm",
    "squared_distance",
]
