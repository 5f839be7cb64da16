"""Per-series normalization: z-scoring and the positive shift required by
the trading-based segmenter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import _freeze


@dataclass(frozen=True)
class NormalizedSeries:
    """A z-normalized series shifted so that its minimum is 1."""

    values: np.ndarray
    offset: float
    mean: float
    stddev: float

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values))


def z_normalize(x) -> tuple[np.ndarray, float, float]:
    """Scale to zero mean and unit population standard deviation.

    Uses the population variance mean(x^2) - mean(x)^2.  A constant series
    has zero variance; the divisor is then taken as 1 so the output is all
    zeros instead of an error (all-zero country rows must still flow
    through the pipeline).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size < 1:
        raise ValueError("cannot normalize an empty series")
    mu = float(x.mean())
    var = float((x * x).mean() - mu * mu)
    sigma = np.sqrt(var) if var > 0.0 else 1.0
    return (x - mu) / sigma, mu, float(sigma)


def normalize_for_trading(x) -> NormalizedSeries:
    """z-normalize, then shift up so every value is at least 1.

    The shift is |min| + 1 of the z-scored series, which makes the minimum
    land on 1 (up to roundoff) for any non-constant input.  The transform
    is affine per series, so value ordering and the positions of local
    extrema are untouched.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two samples")
    z, mu, sigma = z_normalize(x)
    offset = abs(float(z.min())) + 1.0
    return NormalizedSeries(values=z + offset, offset=offset, mean=mu, stddev=sigma)
