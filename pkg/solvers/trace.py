from dataclasses import dataclass, field

import numpy as np

from schedules.stepsize import StepsizeSchedule

ALGORITHMS = ("SPP", "A-SPP", "SGD", "RSPP")


@dataclass(frozen=True)
class SolverConfig:
    """
    One solver run: algorithm, stepsize rule, budget and trace options.

    iterations is the budget K for SPP, A-SPP and SGD. RSPP runs `epochs`
    epochs when given, otherwise as many full epochs as fit in `iterations`.
    """

    algorithm: str
    schedule: StepsizeSchedule
    iterations: int = 1
    epochs: int | None = None
    seed: int = 0
    stride: int = 1
    feasibility_tol: float = 1e-10
    record_feasibility: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.stride < 1:
            raise ValueError("stride must be at least 1")
        if self.algorithm == "RSPP":
            if self.schedule.kind != "poly-decay":
                raise ValueError("RSPP needs a poly-decay schedule (mu0, gamma)")
            if self.epochs is not None and self.epochs < 1:
                raise ValueError("epochs must be at least 1")
        if (self.epochs is None or self.algorithm != "RSPP") and self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not self.feasibility_tol > 0:
            raise ValueError("feasibility_tol must be positive")

    @property
    def label(self) -> str:
        return f"{self.algorithm} ({self.schedule.label()})"


@dataclass(frozen=True)
class TraceRecord:
    k: int
    sqdist: float
    feasibility: float
    objective: float
    stepsize: float


@dataclass
class RunTrace:
    """
    Per-record metrics of one run, in recording order.

    For A-SPP the metrics describe the weighted average x_hat^k; for RSPP
    they describe the epoch outputs and k counts inner iterations.
    """

    algorithm: str
    seed: int
    k: list = field(default_factory=list)
    sqdist: list = field(default_factory=list)
    feasibility: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    stepsize: list = field(default_factory=list)
    final_iterate: np.ndarray | None = None
    final_average: np.ndarray | None = None
    epoch_boundaries: list = field(default_factory=list)
    epoch_stepsizes: list = field(default_factory=list)
    epoch_lengths: list = field(default_factory=list)
    diverged: bool = False
    diverged_at: int | None = None

    def append(self, record: TraceRecord) -> None:
        self.k.append(record.k)
        self.sqdist.append(record.sqdist)
        self.feasibility.append(record.feasibility)
        self.objective.append(record.objective)
        self.stepsize.append(record.stepsize)

    def __len__(self):
        return len(self.k)

    def records(self):
        for values in zip(self.k, self.sqdist, self.feasibility, self.objective, self.stepsize):
            yield TraceRecord(*values)

    def as_arrays(self) -> dict:
        return {
            "k": np.asarray(self.k, dtype=np.int64),
            "sqdist": np.asarray(self.sqdist, dtype=np.float64),
            "feasibility": np.asarray(self.feasibility, dtype=np.float64),
            "objective": np.asarray(self.objective, dtype=np.float64),
            "stepsize": np.asarray(self.stepsize, dtype=np.float64),
        }
