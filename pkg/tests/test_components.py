import numpy as np
import pytest
from scipy import optimize

from components import (
    BatchLeastSquaresLoss,
    ComposedScalarLoss,
    LinearResidualLoss,
    LogisticScalarLoss,
    QuadraticNormLoss,
    SquaredScalarLoss,
    moreau_gradient,
    moreau_value,
    prox,
    value,
)
from core import DimensionMismatchError


def test_values():
    assert value(QuadraticNormLoss(1.0, 2), np.array([3.0, 4.0])) == pytest.approx(12.5)
    assert value(LinearResidualLoss([1.0, 0.0], 1.0), np.array([3.0, 2.0])) == pytest.approx(4.0)
    batch = BatchLeastSquaresLoss(np.eye(2), [1.0, 1.0])
    assert value(batch, np.zeros(2)) == pytest.approx(2.0)


def test_gradients():
    np.testing.assert_allclose(QuadraticNormLoss(2.0, 2).gradient(np.ones(2)), [2.0, 2.0])
    residual = LinearResidualLoss([1.0, 0.0], 0.0)
    np.testing.assert_allclose(residual.gradient(np.array([2.0, 5.0])), [4.0, 0.0])


def test_prox_closed_forms():
    np.testing.assert_allclose(prox(QuadraticNormLoss(1.0, 2), np.array([2.0, 0.0]), 1.0), [1.0, 0.0])
    residual = LinearResidualLoss([1.0, 0.0], 0.0)
    np.testing.assert_allclose(prox(residual, np.array([2.0, 1.0]), 0.5), [1.0, 1.0])
    batch = BatchLeastSquaresLoss(np.eye(2), [0.0, 0.0])
    np.testing.assert_allclose(prox(batch, np.array([4.0, 2.0]), 0.5), [2.0, 1.0])


def test_moreau_envelope():
    loss = QuadraticNormLoss(1.0, 2)
    x = np.array([2.0, 0.0])
    assert moreau_value(loss, x, 1.0) == pytest.approx(1.0)
    np.testing.assert_allclose(moreau_gradient(loss, x, 1.0), [1.0, 0.0])


def test_prox_rejects_nonpositive_mu():
    loss = QuadraticNormLoss(1.0, 2)
    with pytest.raises(ValueError):
        loss.prox(np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        loss.prox(np.zeros(2), -1.0)


def test_dimension_is_checked():
    with pytest.raises(DimensionMismatchError):
        QuadraticNormLoss(1.0, 2).value(np.zeros(3))


def test_batch_curvature_constants():
    batch = BatchLeastSquaresLoss(np.diag([1.0, 2.0]), [0.0, 0.0])
    assert batch.sigma == pytest.approx(2.0)
    assert batch.lipschitz == pytest.approx(8.0)
    assert LinearResidualLoss([3.0, 4.0], 1.0).sigma == 0.0
    assert LinearResidualLoss([3.0, 4.0], 1.0).lipschitz == pytest.approx(50.0)


def test_subgradient_bound_quadratic():
    loss = QuadraticNormLoss(2.0, 2, center=[3.0, 4.0])
    assert loss.subgradient_bound(1.0) == pytest.approx(12.0)


def test_batch_prox_solves_normal_equations():
    rng = np.random.default_rng(0)
    A, b, x = rng.standard_normal((6, 4)), rng.standard_normal(6), rng.standard_normal(4)
    mu = 0.3
    z = BatchLeastSquaresLoss(A, b).prox(x, mu)
    expected = np.linalg.solve(np.eye(4) + 2 * mu * A.T @ A, x + 2 * mu * A.T @ b)
    np.testing.assert_allclose(z, expected, atol=1e-12)


def test_residual_prox_is_stationary():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, x = rng.standard_normal(5), rng.standard_normal(5)
        loss = LinearResidualLoss(a, rng.standard_normal())
        mu = rng.uniform(0.01, 10.0)
        z = loss.prox(x, mu)
        assert np.linalg.norm(z - x + mu * loss.gradient(z)) < 1e-10


def test_composed_squared_matches_linear_residual():
    rng = np.random.default_rng(2)
    a, x = rng.standard_normal(4), rng.standard_normal(4)
    composed = ComposedScalarLoss(a, SquaredScalarLoss(0.7))
    residual = LinearResidualLoss(a, 0.7)
    np.testing.assert_allclose(composed.prox(x, 0.4), residual.prox(x, 0.4), atol=1e-10)
    assert composed.lipschitz == pytest.approx(residual.lipschitz)


@pytest.mark.parametrize("label", [1.0, -1.0])
def test_logistic_prox_is_stationary(label):
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, x = rng.standard_normal(3), 3.0 * rng.standard_normal(3)
        loss = ComposedScalarLoss(a, LogisticScalarLoss(label))
        mu = rng.uniform(0.05, 20.0)
        z = loss.prox(x, mu)
        assert np.linalg.norm(z - x + mu * loss.gradient(z)) < 1e-9


def test_prox_contracts_by_theta():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((8, 3))
    loss = BatchLeastSquaresLoss(A, rng.standard_normal(8))
    for _ in range(200):
        x, y = rng.standard_normal(3), rng.standard_normal(3)
        mu = rng.uniform(0.01, 5.0)
        theta = 1.0 / (1.0 + mu * loss.sigma)
        lhs = np.linalg.norm(loss.prox(x, mu) - loss.prox(y, mu))
        assert lhs <= theta * np.linalg.norm(x - y) + 1e-9


def test_moreau_gradient_is_dominated_by_gradient():
    rng = np.random.default_rng(5)
    for _ in range(50):
        loss = LinearResidualLoss(rng.standard_normal(4), rng.standard_normal())
        x = rng.standard_normal(4)
        mu = rng.uniform(0.01, 5.0)
        assert np.linalg.norm(loss.moreau_gradient(x, mu)) <= np.linalg.norm(loss.gradient(x)) + 1e-12


def _random_component(rng, n):
    kind = rng.integers(5)
    if kind == 0:
        return QuadraticNormLoss(rng.uniform(0.1, 3.0), n, center=rng.standard_normal(n))
    if kind == 1:
        return LinearResidualLoss(rng.standard_normal(n), rng.standard_normal())
    if kind == 2:
        return BatchLeastSquaresLoss(rng.standard_normal((4, n)), rng.standard_normal(4))
    if kind == 3:
        return ComposedScalarLoss(rng.standard_normal(n), SquaredScalarLoss(rng.standard_normal()))
    return ComposedScalarLoss(rng.standard_normal(n), LogisticScalarLoss(rng.choice([-1.0, 1.0])))


def _central_difference(f, x, h=1e-6):
    steps = h * np.eye(x.shape[0])
    return np.array([(f(x + e) - f(x - e)) / (2.0 * h) for e in steps])


def test_envelope_properties_on_random_triples():
    rng = np.random.default_rng(6)
    for _ in range(10_000):
        n = int(rng.integers(1, 6))
        loss = _random_component(rng, n)
        x, y = rng.standard_normal(n), rng.standard_normal(n)
        mu = float(np.exp(rng.uniform(np.log(0.01), np.log(10.0))))
        theta = 1.0 / (1.0 + mu * loss.sigma)
        gap = np.linalg.norm(x - y)

        assert np.linalg.norm(loss.prox(x, mu) - loss.prox(y, mu)) <= theta * gap + 1e-9
        assert loss.moreau_value(x, mu) <= loss.value(x) + 1e-9 * (1.0 + loss.value(x))
        gx, gy = loss.moreau_gradient(x, mu), loss.moreau_gradient(y, mu)
        assert np.linalg.norm(gx) <= np.linalg.norm(loss.gradient(x)) + 1e-9
        assert np.linalg.norm(gx - gy) <= gap / mu + 1e-9


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(1_000):
        n = int(rng.integers(1, 6))
        loss = _random_component(rng, n)
        x = rng.standard_normal(n)
        expected = _central_difference(loss.value, x)
        np.testing.assert_allclose(
            loss.gradient(x), expected, atol=1e-5 * (1.0 + np.linalg.norm(expected))
        )


def test_moreau_gradient_matches_finite_differences():
    rng = np.random.default_rng(8)
    for _ in range(1_000):
        n = int(rng.integers(1, 6))
        loss = _random_component(rng, n)
        x = rng.standard_normal(n)
        mu = rng.uniform(0.05, 5.0)
        expected = _central_difference(lambda z: loss.moreau_value(z, mu), x)
        np.testing.assert_allclose(
            loss.moreau_gradient(x, mu),
            expected,
            atol=1e-5 * (1.0 + np.linalg.norm(expected)),
        )


def _line_search_prox(loss, x, mu):
    # the prox of l(a^T z) moves x along a only
    a = loss.a
    a_sq = float(np.dot(a, a))

    def objective(t):
        return loss.value(x + t * a) + t * t * a_sq / (2.0 * mu)

    reach = mu * np.linalg.norm(loss.gradient(x)) / np.sqrt(a_sq) + 1.0
    grid = np.linspace(-reach, reach, 401)
    j = int(np.argmin([objective(t) for t in grid]))
    j = min(max(j, 1), grid.shape[0] - 2)
    result = optimize.minimize_scalar(
        objective, bounds=(grid[j - 1], grid[j + 1]), method="bounded",
        options={"xatol": 1e-12},
    )
    return x + result.x * a


@pytest.mark.parametrize(
    "make_scalar",
    [
        lambda rng: None,
        lambda rng: SquaredScalarLoss(rng.standard_normal()),
        lambda rng: LogisticScalarLoss(rng.choice([-1.0, 1.0])),
    ],
    ids=["linear-residual", "composed-squared", "composed-logistic"],
)
def test_rank_one_prox_matches_brute_force(make_scalar):
    rng = np.random.default_rng(9)
    for _ in range(1_000):
        n = int(rng.integers(1, 5))
        a, x = rng.standard_normal(n), rng.standard_normal(n)
        scalar = make_scalar(rng)
        if scalar is None:
            loss = LinearResidualLoss(a, rng.standard_normal())
        else:
            loss = ComposedScalarLoss(a, scalar)
        mu = rng.uniform(0.01, 2.0)
        np.testing.assert_allclose(loss.prox(x, mu), _line_search_prox(loss, x, mu), atol=1e-6)


def test_batch_factor_is_reused_per_mu():
    rng = np.random.default_rng(10)
    A, b = rng.standard_normal((6, 3)), rng.standard_normal(6)
    loss = BatchLeastSquaresLoss(A, b)
    assert loss.factor(0.3) is loss.factor(0.3)
    assert loss.factor(0.3) is not loss.factor(0.6)
    for mu in [0.3, 0.6, 0.3, 1.2, 0.6] + [0.1 * (k + 1) for k in range(12)]:
        x = rng.standard_normal(3)
        expected = np.linalg.solve(np.eye(3) + 2 * mu * A.T @ A, x + 2 * mu * A.T @ b)
        np.testing.assert_allclose(loss.prox(x, mu), expected, atol=1e-12)
