from core.errors import NonFiniteError, ProxError

from .solver import Solver


class SPPSolver(Solver):
    """
    Stochastic proximal point:

        y^k = z_{mu_k}(x^k; S_k),   x^{k+1} = [y^k]_{X_{S_k}}.
    """

    algorithm = "SPP"

    def step(self, x, k, mu, rng):
        _, loss, constraint = self.problem.sample(rng)
        try:
            y = loss.prox(x, mu)
        except ProxError as e:
            raise ProxError(f"prox failed at iteration {k}: {e}") from e
        except FloatingPointError as e:
            raise NonFiniteError(str(e), iteration=k) from e
        return constraint.project(y)


def run_spp(problem, config, rng=None, trace_listener=None):
    return SPPSolver(problem, config, trace_listener).run(rng)
