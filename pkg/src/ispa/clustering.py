"""K-means++ seeding and Lloyd iteration over full-length series.

Distances are plain Euclidean on the raw (N, T) matrix.  Seeding draws
the usual D^2-weighted sample and stops early once every remaining series
sits exactly on a seed, so duplicate-heavy datasets start with fewer than
k_max seeds.  Lloyd runs until the assignment stabilizes (or an iteration
cap); clusters that end up empty are discarded only then, which is how the
returned K can fall below k_max.

Randomness comes from numpy's seedable PCG64 generator, so a run is fully
reproducible from (dataset, hyperparameters).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .model import Dataset, Hyperparameters, TimeSeries


@dataclass(frozen=True)
class ClusterModel:
    """Result of clustering: discarded-empties centroids, assignments and
    the squared-distance cost, with the per-iteration cost trace kept for
    diagnostics."""

    centroids: tuple[TimeSeries, ...]
    assignments: np.ndarray
    cost: float
    cost_trace: tuple[float, ...]
    n_iterations: int

    def __post_init__(self):
        arr = np.array(self.assignments, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "assignments", arr)
        object.__setattr__(self, "centroids", tuple(self.centroids))

    @property
    def K(self) -> int:
        return len(self.centroids)

    def centroid_matrix(self) -> np.ndarray:
        return np.stack([c.values for c in self.centroids])


def seed_kmeanspp(dataset: Dataset, k_max: int, rng_seed: int) -> np.ndarray:
    """Draw up to k_max seed series, D^2-weighted after a uniform first pick.

    Returns the seeds as a (n_seeds, T) array.  Stops with fewer seeds
    when every candidate has zero distance to an existing seed.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    X = dataset.matrix()
    rng = np.random.default_rng(rng_seed)
    chosen = [int(rng.integers(X.shape[0]))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k_max:
        total = d2.sum()
        if total <= 0.0:
            break
        idx = int(rng.choice(X.shape[0], p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _assign(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin returns the lowest index on ties, the documented tie-break
    return cdist(X, centroids, "sqeuclidean").argmin(axis=1)


def _cost(X: np.ndarray, centroids: np.ndarray, assignment: np.ndarray) -> float:
    return float(((X - centroids[assignment]) ** 2).sum())


def _update(X: np.ndarray, centroids: np.ndarray, assignment: np.ndarray) -> np.ndarray:
    updated = centroids.copy()  # empty clusters keep their stale centroid
    for k in np.unique(assignment):
        updated[k] = X[assignment == k].mean(axis=0)
    return updated


def lloyd_cluster(dataset: Dataset, seeds: np.ndarray, max_iters: int = 100) -> ClusterModel:
    """Alternate nearest-centroid assignment and mean updates to a fixed point.

    The recorded cost trace is non-increasing.  Empty clusters survive the
    iteration untouched and are dropped from the final model, with
    assignments renumbered in centroid order.
    """
    seeds = np.asarray(seeds, dtype=np.float64)
    if seeds.ndim != 2 or seeds.shape[0] < 1:
        raise ValueError("seeds must be a nonempty (K, T) array")
    X = dataset.matrix()
    centroids = seeds.copy()
    assignment = _assign(X, centroids)
    trace = [_cost(X, centroids, assignment)]
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        centroids = _update(X, centroids, assignment)
        new_assignment = _assign(X, centroids)
        trace.append(_cost(X, centroids, new_assignment))
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
    # restore the members-mean property in case the cap cut the loop short
    centroids = _update(X, centroids, assignment)

    counts = np.bincount(assignment, minlength=centroids.shape[0])
    keep = counts > 0
    renumber = np.cumsum(keep) - 1
    assignment = renumber[assignment]
    centroids = centroids[keep]
    final_cost = _cost(X, centroids, assignment)
    return ClusterModel(
        centroids=tuple(
            TimeSeries(id=f"C{k}", values=centroids[k]) for k in range(centroids.shape[0])
        ),
        assignments=assignment,
        cost=final_cost,
        cost_trace=tuple(trace),
        n_iterations=iterations,
    )


def cluster(dataset: Dataset, hyper: Hyperparameters, max_iters: int = 100) -> ClusterModel:
    """Seed with k-means++ and run Lloyd; deterministic given the seed."""
    seeds = seed_kmeanspp(dataset, hyper.resolve_k_max(dataset.N), hyper.rng_seed)
    return lloyd_cluster(dataset, seeds, max_iters=max_iters)
