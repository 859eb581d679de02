from dataclasses import dataclass, field

from core.errors import GenerationError

FAMILIES = (
    "constrained-ls",
    "random-ls-polyhedron",
    "markowitz",
    "feasibility",
    "finite-sum",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """
    What to generate.

    Attributes:
        family: One of FAMILIES.
        n: Dimension.
        m: Number of observations (rows, components or returns periods).
        batch: Rows per batch component (defaults to n).
        p: Number of constraint sets (family default when None).
        seed: Generation seed.
        knobs: Family-specific settings, e.g. spectrum, noise, active, lam.
    """

    family: str = "constrained-ls"
    n: int = 20
    m: int = 2000
    batch: int | None = None
    p: int | None = None
    seed: int = 0
    knobs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GenerationError(f"unknown problem family {self.family!r}")
        if self.n < 2:
            raise GenerationError("n must be at least 2")
        if self.m < self.n:
            raise GenerationError("m must be at least n")
        if self.batch is not None and not 1 <= self.batch <= self.m:
            raise GenerationError("batch size must lie in [1, m]")
        if self.p is not None and self.p < 0:
            raise GenerationError("constraint count must be nonnegative")

    @property
    def batch_size(self) -> int:
        return self.n if self.batch is None else self.batch

    def knob(self, name, default):
        return self.knobs.get(name, default)
