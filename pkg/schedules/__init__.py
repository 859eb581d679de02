from .contraction import expected_theta_sq, theta, theta0
from .stepsize import (
    StepsizeSchedule,
    epoch_length,
    epoch_stepsize,
    phi,
    stepsize_at,
)

__all__ = [
    "StepsizeSchedule",
    "epoch_length",
    "epoch_stepsize",
    "expected_theta_sq",
    "phi",
    "stepsize_at",
    "theta",
    "theta0",
]
