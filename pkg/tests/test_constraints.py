import itertools

import numpy as np
import pytest
from scipy import optimize

from components import QuadraticNormLoss
from constraints import (
    Box,
    ConstraintSet,
    Halfspace,
    Hyperplane,
    IntersectionProjector,
    NonnegativeOrthant,
    WholeSpace,
    dist_intersection,
    estimate_kappa,
    project_intersection,
)
from core import AssumptionError, ConvergenceError, RandomSource, StochasticProblem
from problems import GeneratorSpec, gen_constrained_ls
from schedules import StepsizeSchedule
from solvers import SolverConfig, run_spp


def test_halfspace_projection():
    h = Halfspace([1.0, 0.0], 0.0)
    np.testing.assert_allclose(h.project(np.array([2.0, 3.0])), [0.0, 3.0])
    assert h.distance(np.array([2.0, 3.0])) == pytest.approx(2.0)
    np.testing.assert_array_equal(h.project(np.array([-1.0, 3.0])), [-1.0, 3.0])


def test_box_and_orthant_projection():
    box = Box([0.0, 0.0], [1.0, 1.0])
    np.testing.assert_allclose(box.project(np.array([2.0, -1.0])), [1.0, 0.0])
    orthant = NonnegativeOrthant(3)
    np.testing.assert_allclose(orthant.project(np.array([-1.0, 2.0, -3.0])), [0.0, 2.0, 0.0])


def test_hyperplane_projection():
    plane = Hyperplane([1.0, 1.0], 0.0)
    np.testing.assert_allclose(plane.project(np.array([1.0, 1.0])), [0.0, 0.0])
    assert plane.distance(np.array([1.0, 1.0])) == pytest.approx(np.sqrt(2.0))


def test_orthant_corner_distance():
    sets = [Halfspace([-1.0, 0.0], 0.0), Halfspace([0.0, -1.0], 0.0)]
    assert dist_intersection(sets, np.array([-1.0, -1.0])) == pytest.approx(np.sqrt(2.0))


def test_single_set_reduces_to_its_projection():
    h = Halfspace([1.0, 2.0], 1.0)
    x = np.array([3.0, 3.0])
    np.testing.assert_allclose(project_intersection([h], x), h.project(x))


def _brute_force_projection(C, d, x):
    """
    Nearest feasible point among x, the face projections and the vertices.
    """

    def feasible(y):
        return np.all(C @ y <= d + 1e-9)

    candidates = [x] if feasible(x) else []
    for c, di in zip(C, d):
        candidates.append(x - (c @ x - di) / (c @ c) * c)
    for i, j in itertools.combinations(range(len(d)), 2):
        M = C[[i, j]]
        if abs(np.linalg.det(M)) > 1e-12:
            candidates.append(np.linalg.solve(M, d[[i, j]]))
    candidates = [y for y in candidates if feasible(y)]
    return min(candidates, key=lambda y: np.linalg.norm(y - x))


@pytest.mark.parametrize("method", ["auto", "dykstra"])
def test_projection_matches_brute_force_in_the_plane(method):
    rng = np.random.default_rng(7)
    for _ in range(50):
        count = rng.integers(2, 5)
        z = rng.standard_normal(2)
        C = rng.standard_normal((count, 2))
        d = C @ z + rng.uniform(0.1, 1.0, count)
        x = z + 3.0 * rng.standard_normal(2)
        sets = [Halfspace(c, di) for c, di in zip(C, d)]
        projected = IntersectionProjector(sets, method=method).project(x, tol=1e-13)
        np.testing.assert_allclose(projected, _brute_force_projection(C, d, x), atol=1e-8)


def test_dykstra_reports_best_iterate_on_cycle_cap():
    sets = [Halfspace([1.0, 0.0], 0.0), Halfspace([1.0, 1.0], 0.0)]
    with pytest.raises(ConvergenceError) as info:
        IntersectionProjector(sets, method="dykstra").project(
            np.array([5.0, 5.0]), max_cycles=1
        )
    assert info.value.best_iterate is not None


def test_projector_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        IntersectionProjector([WholeSpace(2), WholeSpace(2)]).project(np.zeros(2), tol=0.0)


class _Ball(ConstraintSet):
    kind = "ball"

    def __init__(self, center, radius):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        super().__init__(self.center.shape[0])

    def project(self, x):
        offset = self._check(x) - self.center
        norm = np.linalg.norm(offset)
        if norm <= self.radius:
            return x.copy()
        return self.center + offset * (self.radius / norm)


def test_inequality_descriptions():
    C, d = Halfspace([1.0, 2.0], 3.0).inequalities()
    np.testing.assert_array_equal(C, [[1.0, 2.0]])
    np.testing.assert_array_equal(d, [3.0])
    C, d = Hyperplane([1.0, -1.0], 2.0).inequalities()
    np.testing.assert_array_equal(C, [[1.0, -1.0], [-1.0, 1.0]])
    np.testing.assert_array_equal(d, [2.0, -2.0])
    C, d = Box([0.0, -np.inf], [1.0, 2.0]).inequalities()
    np.testing.assert_array_equal(C, [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_array_equal(d, [1.0, 2.0, 0.0])
    C, d = WholeSpace(3).inequalities()
    assert C.shape == (0, 3) and d.shape == (0,)
    assert _Ball(np.zeros(2), 1.0).inequalities() is None


def test_projector_method_selection():
    polyhedral = [Halfspace([1.0, 0.0], 0.0), Box([-1.0, -1.0], [1.0, 1.0])]
    assert IntersectionProjector(polyhedral).method == "auto"
    curved = [Halfspace([1.0, 0.0], 0.0), _Ball(np.zeros(2), 1.0)]
    assert IntersectionProjector(curved).method == "dykstra"
    with pytest.raises(ValueError):
        IntersectionProjector(curved, method="qp")
    with pytest.raises(ValueError):
        IntersectionProjector(polyhedral, method="newton")


def test_curved_intersection_goes_through_dykstra():
    sets = [Halfspace([1.0, 0.0], 0.0), _Ball(np.zeros(2), 1.0)]
    projected = IntersectionProjector(sets).project(np.array([2.0, 2.0]), tol=1e-12)
    np.testing.assert_allclose(projected, [0.0, 1.0], atol=1e-8)


def test_hyperplane_and_box_intersection():
    sets = [Hyperplane([1.0, 1.0], 1.0), Box([0.0, 0.0], [0.25, 1.0])]
    projected = IntersectionProjector(sets, method="qp").project(np.array([2.0, 0.0]))
    np.testing.assert_allclose(projected, [0.25, 0.75], atol=1e-8)


def test_empty_polyhedral_intersection_is_reported():
    sets = [Halfspace([1.0, 0.0], -1.0), Halfspace([-1.0, 0.0], -1.0)]
    with pytest.raises(AssumptionError):
        IntersectionProjector(sets).project(np.zeros(2))


def test_projections_are_firmly_nonexpansive():
    rng = np.random.default_rng(11)
    for i in range(10_000):
        n = int(rng.integers(1, 6))
        if i % 3 == 0:
            s = Halfspace(rng.standard_normal(n), rng.standard_normal())
        elif i % 3 == 1:
            s = Hyperplane(rng.standard_normal(n), rng.standard_normal())
        else:
            lo = rng.standard_normal(n)
            hi = lo + rng.exponential(size=n)
            lo[rng.random(n) < 0.2] = -np.inf
            s = Box(lo, hi)
        x, y = 3.0 * rng.standard_normal(n), 3.0 * rng.standard_normal(n)
        diff = s.project(x) - s.project(y)
        assert diff @ diff <= diff @ (x - y) + 1e-9


@pytest.fixture(scope="module")
def desk_instance():
    return gen_constrained_ls(GeneratorSpec(n=20, m=2000, seed=0))


def _slsqp_projection(sets, x):
    C = np.vstack([s.inequalities()[0] for s in sets])
    d = np.concatenate([s.inequalities()[1] for s in sets])
    result = optimize.minimize(
        lambda y: float((y - x) @ (y - x)),
        x,
        jac=lambda y: 2.0 * (y - x),
        constraints=[{"type": "ineq", "fun": lambda y: d - C @ y, "jac": lambda y: -C}],
        method="SLSQP",
        options={"ftol": 1e-12, "maxiter": 500},
    )
    return result.x, C, d


def test_many_halfspace_projection_matches_a_qp_solver(desk_instance):
    x0 = desk_instance.x0
    projected = desk_instance.projector.project(x0)
    expected, C, d = _slsqp_projection(desk_instance.constraints, x0)
    assert len(desk_instance.constraints) > 1000
    np.testing.assert_allclose(projected, expected, atol=1e-6)
    assert np.linalg.norm(projected) == pytest.approx(4.965554, rel=1e-5)
    assert (C @ projected - d).max() <= 1e-9


def test_feasibility_is_recorded_on_many_halfspaces(desk_instance):
    config = SolverConfig("SPP", StepsizeSchedule.constant(1.0), iterations=1)
    trace = run_spp(desk_instance, config)
    nearest = desk_instance.projector.project(desk_instance.x0)
    assert trace.feasibility[0] == pytest.approx(np.linalg.norm(nearest))
    assert np.isfinite(trace.feasibility[1])


def _problem(sets, x_star):
    return StochasticProblem(
        dimension=2,
        losses=[QuadraticNormLoss(1.0, 2, center=x_star)],
        constraints=sets,
        x_star=x_star,
    )


def test_kappa_of_repeated_halfspace_is_one():
    h = Halfspace([1.0, 0.0], 0.0)
    problem = _problem([h, h], [-1.0, 0.0])
    assert estimate_kappa(problem, 100, RandomSource(0)) == pytest.approx(1.0, abs=1e-9)


def test_kappa_of_crossing_hyperplanes_is_two():
    sets = [Hyperplane([1.0, 0.0], 0.0), Hyperplane([0.0, 1.0], 0.0)]
    problem = _problem(sets, [0.0, 0.0])
    assert estimate_kappa(problem, 50, RandomSource(1)) == pytest.approx(2.0, abs=1e-8)


def test_kappa_fails_when_every_sample_is_feasible():
    problem = _problem([WholeSpace(2)], [0.0, 0.0])
    with pytest.raises(AssumptionError):
        estimate_kappa(problem, 10, RandomSource(2))


def test_kappa_is_at_least_one(small_ls):
    kappa = estimate_kappa(small_ls, 20, RandomSource(3))
    assert kappa >= 1.0
