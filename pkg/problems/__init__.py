from core.random_source import RandomSource

from .feasibility import gen_feasibility
from .finite_sum import gen_finite_sum
from .least_squares import gen_constrained_ls, gen_random_ls_polyhedron
from .markowitz import build_markowitz, gen_markowitz
from .reference import reference_solve
from .returns import ReturnsTable, load_returns_csv, split_train_test, synthetic_returns
from .spec import FAMILIES, GeneratorSpec

GENERATORS = {
    "constrained-ls": gen_constrained_ls,
    "random-ls-polyhedron": gen_random_ls_polyhedron,
    "markowitz": gen_markowitz,
    "feasibility": gen_feasibility,
    "finite-sum": gen_finite_sum,
}


def generate(spec: GeneratorSpec, rng: RandomSource | None = None):
    """
    Build the problem a GeneratorSpec describes.
    """
    return GENERATORS[spec.family](spec, rng)


__all__ = [
    "FAMILIES",
    "GENERATORS",
    "GeneratorSpec",
    "ReturnsTable",
    "build_markowitz",
    "gen_constrained_ls",
    "gen_feasibility",
    "gen_finite_sum",
    "gen_markowitz",
    "gen_random_ls_polyhedron",
    "generate",
    "load_returns_csv",
    "reference_solve",
    "split_train_test",
    "synthetic_returns",
]
