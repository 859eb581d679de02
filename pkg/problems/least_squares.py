import logging

import numpy as np
from scipy.stats import ortho_group

from components import BatchLeastSquaresLoss, LinearResidualLoss
from constraints import Halfspace, IntersectionProjector, WholeSpace
from core.errors import GenerationError
from core.problem import StochasticProblem
from core.random_source import RandomSource

from .reference import reference_solve
from .spec import GeneratorSpec

logger = logging.getLogger(__name__)

MAX_RETRIES = 100
# Slack below which an inactive constraint counts as accidentally active.
STRICT_SLACK = 1e-6


def covariance(n: int, rng: RandomSource, spectrum: str = "harmonic"):
    """
    H = Q diag(lambda) Q^T with Q Haar-random orthogonal.

    spectrum "harmonic" uses lambda_k = 1/k, "flat" uses lambda_k = 1.
    """
    if spectrum == "harmonic":
        eigenvalues = 1.0 / np.arange(1, n + 1)
    elif spectrum == "flat":
        eigenvalues = np.ones(n)
    else:
        raise GenerationError(f"unknown spectrum rule {spectrum!r}")
    q = ortho_group.rvs(n, random_state=rng.generator)
    return (q * eigenvalues) @ q.T, eigenvalues


def batch_components(A, b, batch_size: int):
    """
    round(m / 2 batch) batch losses over the leading rows, then one elementary
    residual per remaining row, so every row is used exactly once.
    """
    m = A.shape[0]
    batches = max(1, int(round(m / (2 * batch_size))))
    batches = min(batches, m // batch_size)
    losses = [
        BatchLeastSquaresLoss(A[j:j + batch_size], b[j:j + batch_size])
        for j in range(0, batches * batch_size, batch_size)
    ]
    losses.extend(LinearResidualLoss(A[i], b[i]) for i in range(batches * batch_size, m))
    return losses


def _active_rows(gradient, active: int, n: int, rng: RandomSource):
    # Rows c_1..c_a with -grad F(x*) = sum lambda_j c_j, lambda_j > 0, so the
    # KKT conditions hold at x* and x* is the constrained optimum.
    rows = rng.normal((active, n))
    multipliers = rng.uniform(0.5, 1.5, size=active)
    rows[-1] = (-gradient - multipliers[:-1] @ rows[:-1]) / multipliers[-1]
    return rows


def gen_constrained_ls(spec: GeneratorSpec, rng: RandomSource | None = None) -> StochasticProblem:
    """
    Constrained least squares with a planted optimum.

    a_i ~ N(0, H), b_i | a_i ~ N(a_i^T x*, noise^2). Losses are batch and
    elementary squared residuals; the constraints Cx <= d have d = C x* + [0 v]
    with v > 0, so exactly `active` inequalities hold with equality at x*.
    The active rows are chosen so that x* satisfies the KKT conditions of the
    sampled finite sum.
    """
    if spec.family != "constrained-ls":
        raise GenerationError(f"expected family constrained-ls, got {spec.family!r}")
    rng = rng or RandomSource(spec.seed)
    n, m = spec.n, spec.m
    active = int(spec.knob("active", 3))
    noise = float(spec.knob("noise", 1.0))

    H, eigenvalues = covariance(n, rng, spec.knob("spectrum", "harmonic"))
    x_star = rng.normal(n)
    A = rng.generator.multivariate_normal(np.zeros(n), H, size=m)
    b = A @ x_star + noise * rng.normal(m)
    losses = batch_components(A, b, spec.batch_size)

    p = len(losses) if spec.p is None else spec.p
    if not 1 <= active <= min(p, n):
        raise GenerationError("active constraint count must lie in [1, min(p, n)]")
    gradient = np.mean([loss.gradient(x_star) for loss in losses], axis=0)

    for attempt in range(MAX_RETRIES):
        C = np.vstack([_active_rows(gradient, active, n, rng), rng.normal((p - active, n))])
        v = rng.uniform(0.0, 1.0, size=p - active)
        if v.size == 0 or v.min() > STRICT_SLACK:
            break
        logger.debug("regenerating slack vector (attempt %d)", attempt + 1)
    else:
        raise GenerationError(f"no strictly feasible slack after {MAX_RETRIES} retries")
    d = C @ x_star + np.concatenate([np.zeros(active), v])
    constraints = [Halfspace(C[j], d[j]) for j in range(p)]

    logger.info("constrained-ls: n=%d m=%d components=%d constraints=%d",
                n, m, len(losses), p)
    return StochasticProblem(
        dimension=n,
        losses=losses,
        constraints=constraints,
        coupling=spec.knob("coupling", "independent"),
        x_star=x_star,
        name="constrained-ls",
        metadata={
            "covariance": H,
            "eigenvalues": eigenvalues,
            "active_constraints": list(range(active)),
            "seed": spec.seed,
        },
    )


def gen_random_ls_polyhedron(spec: GeneratorSpec,
                             rng: RandomSource | None = None) -> StochasticProblem:
    """
    min (1/m) sum (a_i^T x - b_i)^2 over a random polyhedron {Cx <= d}.

    The optimum has no planted structure; it is computed by projected gradient
    and errors are reported relative to ||x*||^2. p = 0 gives the whole space.
    """
    if spec.family != "random-ls-polyhedron":
        raise GenerationError(f"expected family random-ls-polyhedron, got {spec.family!r}")
    rng = rng or RandomSource(spec.seed)
    n, m = spec.n, spec.m
    p = m if spec.p is None else spec.p

    A = rng.normal((m, n))
    b = A @ rng.normal(n) + float(spec.knob("noise", 1.0)) * rng.normal(m)
    losses = [LinearResidualLoss(A[i], b[i]) for i in range(m)]

    interior = rng.normal(n)
    if p == 0:
        constraints = [WholeSpace(n)]
    else:
        C = rng.normal((p, n))
        d = C @ interior + rng.uniform(0.0, 1.0, size=p)
        constraints = [Halfspace(C[j], d[j]) for j in range(p)]

    projector = IntersectionProjector(constraints)
    smoothness = 2.0 * np.linalg.norm(A, 2) ** 2 / m
    x_star = reference_solve(
        lambda x: 2.0 * A.T @ (A @ x - b) / m, projector, interior, smoothness
    )
    logger.info("random-ls-polyhedron: n=%d m=%d constraints=%d", n, m, p)
    return StochasticProblem(
        dimension=n,
        losses=losses,
        constraints=constraints,
        coupling=spec.knob("coupling", "independent"),
        x_star=x_star,
        relative_distance=True,
        name="random-ls-polyhedron",
        metadata={"interior_point": interior, "data": (A, b), "seed": spec.seed},
    )
