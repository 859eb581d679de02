import numpy as np

from .spp_solver import SPPSolver


class AveragedSPPSolver(SPPSolver):
    """
    SPP iterates with a running weighted average

        x_hat^k = (sum_{i<k} mu_i x^i) / (sum_{i<k} mu_i),

    whose metrics are recorded (x_hat^0 is taken as x^0).
    """

    algorithm = "A-SPP"

    def start(self, x):
        self.weighted_sum = np.zeros_like(x)
        self.weight = 0.0
        self.previous = x.copy()
        self.average = x.copy()

    def observe(self, x, k):
        # x^{k-1} enters the average with weight mu_{k-1}
        mu = self.schedule.at(k - 1)
        self.weighted_sum += mu * self.previous
        self.weight += mu
        self.average = self.weighted_sum / self.weight
        self.previous = x.copy()

    def output(self, x):
        return self.average

    def finish(self, trace):
        trace.final_average = self.average.copy()


def run_aspp(problem, config, rng=None, trace_listener=None):
    return AveragedSPPSolver(problem, config, trace_listener).run(rng)
