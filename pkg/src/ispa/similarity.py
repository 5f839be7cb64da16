"""Unconstrained dynamic time warping with squared-difference local cost.

No warping window and no path-length normalization: the pipeline compares
short variable-length segments where the full alignment lattice is cheap,
and only the argmin over shapelets matters.  DTW is not a metric; the
triangle inequality is neither used nor guaranteed.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

EXCEEDED = math.inf  # marker returned by the bounded search variant


@njit(cache=True, nogil=True)
def _dtw_rows(a, b, bound):
    """Row-by-row DP over the alignment lattice.

    Classic three-predecessor pattern (match, insert, delete) with unit
    weights.  A row whose running minimum exceeds ``bound`` can never
    recover because local costs are nonnegative, so the scan stops there.
    """
    n = a.shape[0]
    m = b.shape[0]
    row = np.empty(m, dtype=np.float64)
    d = a[0] - b[0]
    row[0] = d * d
    row_min = row[0]
    for j in range(1, m):
        d = a[0] - b[j]
        row[j] = row[j - 1] + d * d
        if row[j] < row_min:
            row_min = row[j]
    if row_min > bound:
        return math.inf
    for i in range(1, n):
        diag = row[0]
        d = a[i] - b[0]
        row[0] = row[0] + d * d
        row_min = row[0]
        for j in range(1, m):
            up = row[j]
            best = diag
            if up < best:
                best = up
            if row[j - 1] < best:
                best = row[j - 1]
            d = a[i] - b[j]
            row[j] = best + d * d
            diag = up
            if row[j] < row_min:
                row_min = row[j]
        if row_min > bound:
            return math.inf
    return row[m - 1]


def _as_series(x, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d sequence")
    return arr


def dtw_distance(a, b) -> float:
    """Minimum sum of squared differences over all warping paths."""
    a = _as_series(a, "a")
    b = _as_series(b, "b")
    return float(_dtw_rows(a, b, math.inf))


def dtw_distance_bounded(a, b, bound: float) -> float:
    """Exact DTW distance if it is <= bound, else the EXCEEDED marker.

    Useful for nearest-neighbor search with the best-so-far distance as
    the bound: the argmin is unchanged while hopeless candidates abandon
    after a partial scan.
    """
    a = _as_series(a, "a")
    b = _as_series(b, "b")
    if not bound >= 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    dist = float(_dtw_rows(a, b, bound))
    return dist if dist <= bound else EXCEEDED
