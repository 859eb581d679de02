import numpy as np


def loglog_slope(k, values) -> float:
    """
    Least-squares slope of ln(values) against ln(k) over the last decade of
    recorded k (k >= k_max / 10, k >= 1, positive values).
    """
    k = np.asarray(k, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if k.size == 0:
        raise ValueError("no records to fit")
    mask = (k >= max(1.0, k.max() / 10.0)) & (values > 0) & np.isfinite(values)
    if np.count_nonzero(mask) < 2:
        raise ValueError("need at least two positive records in the last decade")
    slope, _ = np.polyfit(np.log(k[mask]), np.log(values[mask]), 1)
    return float(slope)
