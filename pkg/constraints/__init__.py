from .intersection import (
    IntersectionProjector,
    dist_intersection,
    project_intersection,
)
from .regularity import estimate_kappa
from .sets import (
    Box,
    ConstraintSet,
    Halfspace,
    Hyperplane,
    NonnegativeOrthant,
    WholeSpace,
    distance,
    project,
)

__all__ = [
    "Box",
    "ConstraintSet",
    "Halfspace",
    "Hyperplane",
    "IntersectionProjector",
    "NonnegativeOrthant",
    "WholeSpace",
    "dist_intersection",
    "distance",
    "estimate_kappa",
    "project",
    "project_intersection",
]
