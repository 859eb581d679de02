from dataclasses import dataclass, field

import numpy as np
import pandas as pd

METRICS = ("sqdist", "feasibility", "objective")
CSV_COLUMNS = ["k", "mean_sqdist", "se_sqdist", "mean_feas", "se_feas", "mean_obj", "se_obj", "stepsize"]


@dataclass
class AggregateTrace:
    """
    Mean and standard error of every metric across the runs of one cell.

    A k recorded by only some runs (a diverged SGD run stops early) is
    aggregated over the runs that reached it.
    """

    name: str
    label: str
    algorithm: str
    frame: pd.DataFrame
    runs: int
    divergence_count: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def k(self) -> np.ndarray:
        return self.frame["k"].to_numpy()

    def mean(self, metric: str) -> np.ndarray:
        return self.frame[f"mean_{_short(metric)}"].to_numpy()

    def standard_error(self, metric: str) -> np.ndarray:
        return self.frame[f"se_{_short(metric)}"].to_numpy()

    def __len__(self):
        return len(self.frame)


def _short(metric: str) -> str:
    return {"sqdist": "sqdist", "feasibility": "feas", "objective": "obj"}[metric]


def run_frame(trace) -> pd.DataFrame:
    """
    One run's records as a frame with the trace columns.
    """
    arrays = trace.as_arrays()
    return pd.DataFrame({name: arrays[name] for name in ("k",) + METRICS + ("stepsize",)})


def aggregate(traces, name: str, label: str) -> AggregateTrace:
    """
    Reduce the RunTraces of one cell, in run-index order.

    Standard errors use the sample standard deviation (ddof = 1) and are 0
    when a k was reached by a single run.
    """
    if not traces:
        raise ValueError("nothing to aggregate")
    frames = [run_frame(trace).assign(run=i) for i, trace in enumerate(traces)]
    stacked = pd.concat(frames, ignore_index=True)
    grouped = stacked.groupby("k", sort=True)
    out = pd.DataFrame({"k": np.array(sorted(stacked["k"].unique()), dtype=np.int64)})
    for metric in METRICS:
        short = _short(metric)
        out[f"mean_{short}"] = grouped[metric].mean().to_numpy()
        out[f"se_{short}"] = grouped[metric].sem(ddof=1).fillna(0.0).to_numpy()
    out["stepsize"] = grouped["stepsize"].first().to_numpy()
    return AggregateTrace(
        name=name,
        label=label,
        algorithm=traces[0].algorithm,
        frame=out[CSV_COLUMNS],
        runs=len(traces),
        divergence_count=sum(1 for trace in traces if trace.diverged),
    )
