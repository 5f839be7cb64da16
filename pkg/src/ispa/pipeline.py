"""Orchestration of the three pipeline phases.

Phase A clusters the dataset and segments every centroid, producing the
shapelet alphabet.  Phase B segments each individual series and assigns
the nearest shapelet (unconstrained DTW) to every segment, yielding its
label word.  Phase C completes the word: the segment after the last
matched shapelet, re-anchored at the series' final observation, becomes
the prediction.  A constant last-value baseline is provided for
comparison.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .clustering import ClusterModel, cluster
from .model import (
    Alphabet,
    Dataset,
    Hyperparameters,
    Label,
    Segmentation,
    SeriesSummary,
    SummarizationResult,
    TimeSeries,
    _freeze,
    dataset_checksum,
    decode_label,
    encode_label,
)
from .preprocess import z_normalize
from .segmentation import apts_segment
from .similarity import dtw_distance_bounded


@dataclass(frozen=True)
class Prediction:
    """A short trajectory anchored at the last observed value.

    ``label`` is the shapelet whose shape was attached; it is None for the
    baseline predictor, which has no alphabet behind it.  ``clamped``
    marks predictions that had to reuse the final centroid segment because
    no next segment exists.
    """

    values: np.ndarray
    horizon: int
    label: Label | None
    clamped: bool

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values))
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.values.size != self.horizon + 1:
            raise ValueError("prediction length must equal horizon + 1")


def _z_normalized(dataset: Dataset) -> tuple[Dataset, np.ndarray, np.ndarray]:
    series, means, sigmas = [], [], []
    for s in dataset.series:
        z, mu, sigma = z_normalize(s.values)
        series.append(TimeSeries(id=s.id, values=z))
        means.append(mu)
        sigmas.append(sigma)
    return Dataset(tuple(series)), np.array(means), np.array(sigmas)


def build_alphabet(
    dataset: Dataset, hyper: Hyperparameters, max_iters: int = 100
) -> tuple[Alphabet, ClusterModel]:
    """Phase A: cluster, then segment every centroid into shapelets."""
    work = _z_normalized(dataset)[0] if hyper.z_normalize else dataset
    model = cluster(work, hyper, max_iters=max_iters)
    segmentations = tuple(
        apts_segment(c.values, hyper.s_max, hyper.dtau_min, hyper.d_epsilon)
        for c in model.centroids
    )
    alphabet = Alphabet(
        centroids=model.centroids,
        centroid_segmentations=segmentations,
        s_max=hyper.s_max,
    )
    return alphabet, model


def nearest_shapelet(segment, alphabet: Alphabet) -> tuple[int, int, float]:
    """DTW argmin over all shapelets; ties go to the lowest (k, q).

    The best-so-far distance bounds each candidate scan, which abandons
    hopeless alignments early without changing the argmin.
    """
    segment = np.asarray(segment, dtype=np.float64)
    if segment.size == 0:
        raise ValueError("segment must be nonempty")
    if alphabet.K == 0:
        raise ValueError("alphabet is empty")
    best = (0, 0, np.inf)
    for k, q, shapelet in alphabet.shapelets():
        dist = dtw_distance_bounded(segment, shapelet, best[2])
        if dist < best[2]:
            best = (k, q, dist)
    return best


def label_series(
    series: TimeSeries, alphabet: Alphabet, hyper: Hyperparameters
) -> tuple[Segmentation, tuple[Label, ...]]:
    """Phase B for one series: segment it, then label every segment."""
    if len(series) != alphabet.T:
        raise ValueError(f"series length {len(series)} != alphabet length {alphabet.T}")
    seg = apts_segment(series.values, hyper.s_max, hyper.dtau_min, hyper.d_epsilon)
    labels = []
    for start, end in seg.segments():
        k, q, _ = nearest_shapelet(series.values[start : end + 1], alphabet)
        labels.append(encode_label(k, q, hyper.s_max))
    return seg, tuple(labels)


def predict_series(
    series: TimeSeries,
    labels,
    segmentation: Segmentation,
    alphabet: Alphabet,
    *,
    anchor: float | None = None,
    scale: float = 1.0,
) -> Prediction:
    """Phase C for one series: attach the centroid segment after the last
    matched shapelet to the final observation.

    The shape is applied as differences from its own first sample, so the
    prediction starts exactly at the anchor.  When the matched shapelet is
    already its centroid's last segment there is no next segment; the
    match itself is reused and the prediction marked clamped, keeping the
    predicted label at the last assigned one.  ``anchor`` and ``scale``
    let the caller re-express the trajectory in another value space (used
    when the pipeline clustered z-normalized data).
    """
    if not labels:
        raise ValueError("need at least one assigned label")
    last = labels[-1]
    k, q_star = decode_label(last, alphabet.s_max)
    q_count = alphabet.segment_count(k)
    q_next = q_star + 1
    if q_next + 1 <= q_count:
        source_q, predicted_label, clamped = q_next, last + 1, False
    else:
        source_q, predicted_label, clamped = q_star, last, True
    bounds = alphabet.centroid_segmentations[k].boundaries
    shape = alphabet.centroids[k].values[bounds[source_q] : bounds[source_q + 1] + 1]
    if anchor is None:
        anchor = float(series.values[-1])
    values = anchor + scale * (shape - shape[0])
    return Prediction(
        values=values,
        horizon=int(bounds[source_q + 1] - bounds[source_q]),
        label=predicted_label,
        clamped=clamped,
    )


def martingale_predict(series: TimeSeries, horizon: int = 10) -> Prediction:
    """Constant baseline: repeat the last observed value."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    values = np.full(horizon + 1, float(series.values[-1]))
    return Prediction(values=values, horizon=horizon, label=None, clamped=False)


def summarize_records(
    dataset: Dataset,
    hyper: Hyperparameters,
    alphabet: Alphabet,
    assignments,
    *,
    threads: int = 1,
) -> tuple[SeriesSummary, ...]:
    """Phases B and C over every series, against an existing alphabet.

    Per-series work shares only the immutable alphabet, so it can fan out
    over ``threads`` without affecting the result.  Record trajectories
    are always in raw units: if clustering ran on z-normalized data, the
    attached shapes are mapped back per series.
    """
    if hyper.z_normalize:
        work, _, sigmas = _z_normalized(dataset)
    else:
        work, sigmas = dataset, np.ones(dataset.N)

    def summarize_one(i: int) -> SeriesSummary:
        raw = dataset.series[i]
        seg, labels = label_series(work.series[i], alphabet, hyper)
        prediction = predict_series(
            work.series[i],
            labels,
            seg,
            alphabet,
            anchor=float(raw.values[-1]),
            scale=float(sigmas[i]),
        )
        return SeriesSummary(
            id=raw.id,
            values=raw.values,
            segmentation=seg,
            labels=labels,
            cluster=int(assignments[i]),
            prediction=prediction.values,
            predicted_label=prediction.label,
            horizon=prediction.horizon,
            clamped=prediction.clamped,
        )

    indices = range(dataset.N)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return tuple(pool.map(summarize_one, indices))
    return tuple(summarize_one(i) for i in indices)


def run_ispa(
    dataset: Dataset,
    hyper: Hyperparameters,
    *,
    threads: int = 1,
    max_iters: int = 100,
) -> SummarizationResult:
    """Run all three phases over a dataset; a pure function of its inputs."""
    alphabet, model = build_alphabet(dataset, hyper, max_iters=max_iters)
    records = summarize_records(dataset, hyper, alphabet, model.assignments, threads=threads)
    return SummarizationResult(
        records=records,
        alphabet=alphabet,
        hyper=hyper,
        dataset_checksum=dataset_checksum(dataset),
    )
