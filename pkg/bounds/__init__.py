from .constants import ProblemConstants
from .convex import (
    ConstantStepRates,
    ConvexBounds,
    constant_step_plan,
    convex_bounds,
    optimal_constant_stepsize,
)
from .restart import restart_constant, rspp_feasibility_bound, rspp_plan
from .strongly_convex import (
    ConstantStepEnvelope,
    boundedness_radius,
    constant_step_envelope,
    feasibility_bound,
    iteration_complexity,
    strongly_convex_bound,
    theta0_regime,
)

__all__ = [
    "ConstantStepEnvelope",
    "ConstantStepRates",
    "ConvexBounds",
    "ProblemConstants",
    "boundedness_radius",
    "constant_step_envelope",
    "constant_step_plan",
    "convex_bounds",
    "feasibility_bound",
    "iteration_complexity",
    "optimal_constant_stepsize",
    "restart_constant",
    "rspp_feasibility_bound",
    "rspp_plan",
    "strongly_convex_bound",
    "theta0_regime",
]
