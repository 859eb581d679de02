import logging

import numpy as np

from components import LinearResidualLoss
from constraints import Halfspace, NonnegativeOrthant
from core.errors import GenerationError
from core.problem import StochasticProblem
from core.random_source import RandomSource

from .returns import ReturnsTable, load_returns_csv, split_train_test, synthetic_returns
from .spec import GeneratorSpec

logger = logging.getLogger(__name__)


def target_return(a_av: np.ndarray, b_policy) -> float:
    """
    The desired return b: "mean" gives mean(a_av), a number is used as is.
    """
    if b_policy == "mean":
        return float(np.mean(a_av))
    try:
        return float(b_policy)
    except (TypeError, ValueError):
        raise GenerationError(f"unknown target-return policy {b_policy!r}") from None


def build_markowitz(table: ReturnsTable, b_policy="mean", rng: RandomSource | None = None,
                    train_fraction: float = 0.9) -> StochasticProblem:
    """
    min E[(a_S^T x - b)^2]  s.t.  x >= 0, e^T x <= 1, a_av^T x >= b

    with the expectation over the training periods. a_av is the mean return
    of the training periods. The loss row and the constraint set are drawn
    independently, the set uniformly from the three. The held-out periods
    define F_test, which is what the problem reports as its objective.
    """
    rng = rng or RandomSource(0)
    train, test = split_train_test(table, rng, train_fraction)
    if train.size == 0:
        raise GenerationError("the training split is empty")
    rows = table.returns[train]
    n = table.asset_count
    a_av = rows.mean(axis=0)
    b = target_return(a_av, b_policy)

    losses = [LinearResidualLoss(row, b) for row in rows]
    test_losses = [LinearResidualLoss(row, b) for row in table.returns[test]] or None
    if np.allclose(a_av, 0.0):
        raise GenerationError("mean returns vanish; the return constraint is degenerate")
    constraints = [
        NonnegativeOrthant(n),
        Halfspace(np.ones(n), 1.0),
        Halfspace(-a_av, -b),
    ]
    logger.info("markowitz: %d train / %d test periods, %d assets, b=%.6g",
                train.size, test.size, n, b)
    return StochasticProblem(
        dimension=n,
        losses=losses,
        constraints=constraints,
        test_losses=test_losses,
        name="markowitz",
        metadata={
            "assets": table.assets,
            "mean_returns": a_av,
            "target_return": b,
            "train_index": train,
            "test_index": test,
            "interior_point": np.full(n, 1.0 / n),
        },
    )


def gen_markowitz(spec: GeneratorSpec, rng: RandomSource | None = None) -> StochasticProblem:
    """
    Markowitz problem over the CSV named by the `csv` knob, or over synthetic
    returns with m periods and n assets.
    """
    if spec.family != "markowitz":
        raise GenerationError(f"expected family markowitz, got {spec.family!r}")
    rng = rng or RandomSource(spec.seed)
    path = spec.knob("csv", None)
    if path:
        table = load_returns_csv(path)
    else:
        table = synthetic_returns(spec.m, spec.n, rng.spawn(1))
    return build_markowitz(
        table,
        spec.knob("b_policy", "mean"),
        rng,
        float(spec.knob("train_fraction", 0.9)),
    )
