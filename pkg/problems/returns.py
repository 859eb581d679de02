import logging
import re
from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.errors import ReturnsFormatError
from core.random_source import RandomSource

logger = logging.getLogger(__name__)

_TOKENIZER_LINE = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")


@dataclass(frozen=True, eq=False)
class ReturnsTable:
    """
    Per-period asset returns.

    Attributes:
        assets: Asset names, one per column.
        returns: T x n matrix; row t holds the returns of period t.
    """

    assets: tuple
    returns: np.ndarray

    def __post_init__(self):
        returns = np.array(self.returns, dtype=np.float64)
        if returns.ndim != 2:
            raise ReturnsFormatError("returns must be a T x n matrix")
        if returns.shape[0] < 2:
            raise ReturnsFormatError(f"need at least 2 periods, got {returns.shape[0]}")
        if len(self.assets) != returns.shape[1]:
            raise ReturnsFormatError("one asset name per column is required")
        if not np.all(np.isfinite(returns)):
            raise ReturnsFormatError("returns contain missing or non-finite entries")
        returns.setflags(write=False)
        object.__setattr__(self, "assets", tuple(str(a) for a in self.assets))
        object.__setattr__(self, "returns", returns)

    @property
    def periods(self) -> int:
        return self.returns.shape[0]

    @property
    def asset_count(self) -> int:
        return self.returns.shape[1]

    @property
    def mean_returns(self) -> np.ndarray:
        """
        a_av, the per-asset mean return.
        """
        return self.returns.mean(axis=0)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_returns_csv(path) -> ReturnsTable:
    """
    Read a comma-separated returns file with a header row.

    A leading column whose cells are all non-numeric (dates, labels) is
    dropped. Row order is preserved.

    Raises:
        ReturnsFormatError: On ragged rows, empty or non-numeric cells, or
            fewer than two periods. Line numbers count the header as line 1.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.ParserError as e:
        match = _TOKENIZER_LINE.search(str(e))
        line = int(match.group(2)) if match else None
        raise ReturnsFormatError(f"ragged row in {path}", line=line) from e
    except pd.errors.EmptyDataError as e:
        raise ReturnsFormatError(f"{path} is empty", line=1) from e

    if frame.shape[1] > 1:
        first = frame.iloc[:, 0]
        if len(first) and not any(_is_number(cell) for cell in first):
            frame = frame.iloc[:, 1:]

    values = np.empty(frame.shape, dtype=np.float64)
    for j, column in enumerate(frame.columns):
        for i, cell in enumerate(frame[column]):
            line = i + 2
            if pd.isna(cell) or str(cell).strip() == "":
                raise ReturnsFormatError("missing value", line=line, column=column)
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise ReturnsFormatError(
                    f"non-numeric value {cell!r}", line=line, column=column
                ) from None
    if values.shape[0] < 2:
        raise ReturnsFormatError(
            f"need at least 2 periods, got {values.shape[0]}", line=values.shape[0] + 1
        )
    logger.info("loaded %d periods x %d assets from %s", values.shape[0], values.shape[1], path)
    return ReturnsTable(assets=tuple(frame.columns), returns=values)


def synthetic_returns(periods: int = 1276, assets: int = 25,
                      rng: RandomSource | None = None) -> ReturnsTable:
    """
    Daily-like returns from a one-factor model with Student-t shocks
    (default shape matches a 25-stock, 1276-day export).
    """
    rng = rng or RandomSource(0)
    g = rng.generator
    drift = g.normal(5e-4, 2e-4, size=assets)
    beta = g.uniform(0.5, 1.5, size=assets)
    volatility = g.uniform(0.01, 0.03, size=assets)
    market = 0.01 * g.standard_t(5, size=periods)
    shocks = g.standard_t(5, size=(periods, assets)) * volatility * np.sqrt(3.0 / 5.0)
    returns = drift + np.outer(market, beta) + shocks
    names = tuple(f"A{j + 1:03d}" for j in range(assets))
    return ReturnsTable(assets=names, returns=returns)


def split_train_test(table: ReturnsTable, rng: RandomSource, train_fraction: float = 0.9):
    """
    Random train/test partition of the periods.

    Returns:
        (train_index, test_index), sorted, of sizes floor(train_fraction T)
        and the remainder.
    """
    if not 0 < train_fraction <= 1:
        raise ValueError("train_fraction must lie in (0, 1]")
    order = rng.permutation(table.periods)
    cut = int(np.floor(train_fraction * table.periods))
    return np.sort(order[:cut]), np.sort(order[cut:])
