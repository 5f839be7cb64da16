"""Scikit-learn style front end.

``SeriesSummarizer`` learns the shapelet alphabet on ``fit`` and then maps
any equal-length series to label words (``transform``) or extension
trajectories (``predict``).  Because words and trajectories vary in length
per series, both methods return lists of 1-d arrays rather than a single
rectangular array.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .model import Dataset, Hyperparameters, SummarizationResult, TimeSeries, dataset_checksum
from .pipeline import build_alphabet, label_series, predict_series, summarize_records


def _as_dataset(X: np.ndarray, ids=None) -> Dataset:
    if ids is None:
        ids = [str(i) for i in range(X.shape[0])]
    elif len(ids) != X.shape[0]:
        raise ValueError(f"got {len(ids)} ids for {X.shape[0]} rows")
    return Dataset(tuple(TimeSeries(id=str(i), values=row) for i, row in zip(ids, X)))


class SeriesSummarizer(BaseEstimator):
    """Summarize a set of related equal-length series over a learned
    shapelet alphabet.

    Parameters mirror the pipeline hyperparameters; ``k_max=None`` uses
    the number of training series as the cluster bound and
    ``random_state`` seeds the k-means++ draw.

    Attributes after ``fit``: ``alphabet_``, ``cluster_centers_``,
    ``labels_`` (cluster assignment per training series), ``inertia_``,
    ``n_clusters_`` and ``n_iter_``.
    """

    def __init__(
        self,
        k_max: int | None = None,
        s_max: int = 10,
        dtau_min: int = 5,
        d_epsilon: float = 0.01,
        z_normalize: bool = False,
        max_iters: int = 100,
        random_state: int = 0,
    ):
        self.k_max = k_max
        self.s_max = s_max
        self.dtau_min = dtau_min
        self.d_epsilon = d_epsilon
        self.z_normalize = z_normalize
        self.max_iters = max_iters
        self.random_state = random_state

    def _hyper(self) -> Hyperparameters:
        return Hyperparameters(
            k_max=self.k_max,
            s_max=self.s_max,
            dtau_min=self.dtau_min,
            d_epsilon=self.d_epsilon,
            z_normalize=self.z_normalize,
            rng_seed=self.random_state,
        )

    def _validate(self, X, *, fitting: bool) -> np.ndarray:
        X = check_array(X, dtype=np.float64, ensure_min_features=2)
        if fitting:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} samples per series, expected {self.n_features_in_}"
            )
        return X

    def _fit_dataset(self, dataset: Dataset):
        alphabet, model = build_alphabet(dataset, self._hyper(), max_iters=self.max_iters)
        self.alphabet_ = alphabet
        self.cluster_centers_ = model.centroid_matrix()
        self.labels_ = np.asarray(model.assignments)
        self.inertia_ = model.cost
        self.n_clusters_ = model.K
        self.n_iter_ = model.n_iterations
        return alphabet, model

    def fit(self, X, y=None):
        """Cluster the rows of X and segment the centroids into shapelets."""
        X = self._validate(X, fitting=True)
        self._fit_dataset(_as_dataset(X))
        return self

    def transform(self, X):
        """Label words for each row of X, as a list of int arrays."""
        check_is_fitted(self, "alphabet_")
        X = self._validate(X, fitting=False)
        hyper = self._hyper()
        words = []
        for i, row in enumerate(X):
            _, labels = label_series(TimeSeries(id=str(i), values=row), self.alphabet_, hyper)
            words.append(np.array(labels, dtype=np.int64))
        return words

    def predict(self, X):
        """Extension trajectories for each row of X, anchored at the last
        observed value, as a list of float arrays of varying length."""
        check_is_fitted(self, "alphabet_")
        X = self._validate(X, fitting=False)
        hyper = self._hyper()
        trajectories = []
        for i, row in enumerate(X):
            series = TimeSeries(id=str(i), values=row)
            seg, labels = label_series(series, self.alphabet_, hyper)
            trajectories.append(predict_series(series, labels, seg, self.alphabet_).values)
        return trajectories

    def fit_summarize(self, X, ids=None) -> SummarizationResult:
        """Full pipeline on X, returning the complete result object.

        Equivalent to fitting on X and summarizing the same rows, with the
        clustering pass shared between the two.
        """
        X = self._validate(X, fitting=True)
        dataset = _as_dataset(X, ids)
        alphabet, model = self._fit_dataset(dataset)
        hyper = self._hyper()
        records = summarize_records(dataset, hyper, alphabet, model.assignments)
        return SummarizationResult(
            records=records,
            alphabet=alphabet,
            hyper=hyper,
            dataset_checksum=dataset_checksum(dataset),
        )
