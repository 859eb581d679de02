import numpy as np
from numpy.typing import ArrayLike


class RandomSource:
    """
    Seeded random stream used by solvers, generators and estimators.

    Two sources built from the same seed produce bit-identical draws. The
    source is single-owner: parallel Monte-Carlo runs each build their own
    (seed = base_seed + run_index).
    """

    def __init__(self, seed: int):
        """
        Initialize the source.
        Args:
            seed: A 64-bit integer seed.
        """
        self.seed = int(seed)
        self.position = 0
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    def integer(self, m: int) -> int:
        """
        Uniform draw from {0, ..., m-1}.
        """
        if m < 1:
            raise ValueError("m must be at least 1")
        self.position += 1
        return int(self.generator.integers(0, m))

    def choice(self, m: int, probabilities: ArrayLike | None = None) -> int:
        """
        Draw an index from {0, ..., m-1}, uniformly or with the given weights.
        """
        if probabilities is None:
            return self.integer(m)
        self.position += 1
        return int(self.generator.choice(m, p=probabilities))

    def normal(self, size=None):
        """
        Standard normal draws.
        """
        self.position += 1 if size is None else int(np.prod(size))
        return self.generator.standard_normal(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        self.position += 1 if size is None else int(np.prod(size))
        return self.generator.uniform(low, high, size)

    def permutation(self, m: int):
        self.position += m
        return self.generator.permutation(m)

    def spawn(self, offset: int) -> "RandomSource":
        """
        Independent source for the run with the given index.
        """
        return RandomSource(self.seed + offset)

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, position={self.position})"
