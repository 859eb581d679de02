from .batch_least_squares import BatchLeastSquaresLoss
from .component import (
    LossComponent,
    gradient,
    moreau_gradient,
    moreau_value,
    prox,
    value,
)
from .composed_scalar import (
    ComposedScalarLoss,
    LogisticScalarLoss,
    ScalarLoss,
    SquaredScalarLoss,
)
from .linear_residual import LinearResidualLoss
from .quadratic_norm import QuadraticNormLoss

__all__ = [
    "BatchLeastSquaresLoss",
    "ComposedScalarLoss",
    "LinearResidualLoss",
    "LogisticScalarLoss",
    "LossComponent",
    "QuadraticNormLoss",
    "ScalarLoss",
    "SquaredScalarLoss",
    "gradient",
    "moreau_gradient",
    "moreau_value",
    "prox",
    "value",
]
