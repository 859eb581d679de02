import json
import logging
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from .aggregate import CSV_COLUMNS, run_frame  # noqa: E402

logger = logging.getLogger(__name__)

# Text is written as paths so the SVG needs no external fonts; a fixed salt
# keeps element ids stable between reruns.
matplotlib.rcParams["svg.fonttype"] = "path"
matplotlib.rcParams["svg.hashsalt"] = "spp"

FLOAT_FORMAT = "%.17g"

METRIC_LABELS = {
    "sqdist": r"$E\|x^k - x^*\|^2$",
    "relative": r"$E\|x^k - x^*\|^2 / \|x^*\|^2$",
    "feasibility": r"$E[\mathrm{dist}_X(x^k)]$",
    "objective": r"$F_{test}(x^k)$",
}


@dataclass(frozen=True)
class Overlay:
    """
    A theoretical bound evaluated on a k grid, drawn dashed.
    """

    label: str
    k: np.ndarray
    values: np.ndarray


def emit_csv(trace, path) -> None:
    """
    Write an AggregateTrace (or None for an empty one) as
    k,mean_sqdist,se_sqdist,mean_feas,se_feas,mean_obj,se_obj,stepsize
    with 17 significant digits.
    """
    frame = pd.DataFrame(columns=CSV_COLUMNS) if trace is None else trace.frame
    _write(frame, path)


def emit_run_csv(run_trace, path) -> None:
    """
    Write one run's raw records (k, sqdist, feasibility, objective, stepsize).
    """
    _write(run_frame(run_trace), path)


def _write(frame: pd.DataFrame, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    logger.debug("wrote %s (%d rows)", path, len(frame))


def read_csv(path) -> pd.DataFrame:
    """
    Parse a file written by emit_csv back into a frame.
    """
    return pd.read_csv(path, float_precision="round_trip")


def emit_metadata(trace, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "name": trace.name,
        "label": trace.label,
        "algorithm": trace.algorithm,
        "runs": trace.runs,
        "divergence_count": trace.divergence_count,
        **trace.metadata,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True, default=_jsonable)
        handle.write("\n")


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def build_figure(traces, overlays=(), metric: str = "sqdist", title: str | None = None):
    """
    Log-y figure with one solid line per trace and one dashed line per overlay.

    Each line carries a gid ("trace-<i>" or "overlay-<i>") that becomes the id
    of its group in the SVG output.
    """
    column = "sqdist" if metric == "relative" else metric
    fig, ax = plt.subplots(figsize=(7.5, 5.0))
    for i, trace in enumerate(traces):
        (line,) = ax.plot(trace.k, trace.mean(column), label=trace.label, linewidth=1.4)
        line.set_gid(f"trace-{i}")
    for i, overlay in enumerate(overlays):
        (line,) = ax.plot(overlay.k, overlay.values, linestyle="--", linewidth=1.0,
                          label=overlay.label)
        line.set_gid(f"overlay-{i}")
    ax.set_yscale("log", nonpositive="mask")
    ax.set_xlabel("k")
    ax.set_ylabel(METRIC_LABELS.get(metric, metric))
    if title:
        ax.set_title(title)
    ax.legend(fontsize="small")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def emit_svg(traces, overlays, path, metric: str = "sqdist", title: str | None = None) -> None:
    """
    Render traces and dashed bound overlays to a self-contained SVG file.
    """
    if not traces:
        raise ValueError("emit_svg needs at least one trace")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig = build_figure(traces, overlays, metric, title)
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.debug("wrote %s", path)
