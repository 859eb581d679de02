import logging

import numpy as np

from bounds import constant_step_envelope, strongly_convex_bound
from core.errors import OptimizationError

from .emit import Overlay

logger = logging.getLogger(__name__)


def bound_overlay(constants, cell, k_grid, noise_scaled: bool = True):
    """
    The bound curve matching a cell, or None when no bound covers it.

    SPP with a constant stepsize gets the linear-rate envelope, SPP with
    mu0 / k^gamma (gamma <= 1) the decaying-stepsize bound. Bounds whose
    constants are unknown or whose hypotheses fail are skipped.
    """
    if cell.algorithm != "SPP" or constants is None:
        return None
    schedule = cell.schedule
    k_grid = np.asarray(k_grid, dtype=np.int64)
    try:
        if schedule.kind == "constant":
            values = [constant_step_envelope(constants, schedule.mu0, int(k)).value for k in k_grid]
            label = f"bound mu={schedule.mu0:g}"
        else:
            if schedule.gamma > 1:
                return None
            grid = k_grid[k_grid >= 1]
            c = constants.replace(mu0=schedule.mu0, gamma=schedule.gamma)
            values = [
                strongly_convex_bound(c, int(k), schedule.gamma, noise_scaled=noise_scaled)
                for k in grid
            ]
            k_grid = grid
            label = f"bound {schedule.label()}"
    except OptimizationError as e:
        logger.info("no bound overlay for %s: %s", cell.name, e)
        return None
    return Overlay(label=label, k=k_grid, values=np.asarray(values, dtype=np.float64))
