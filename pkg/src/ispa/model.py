"""Shared domain types and the shapelet label codec.

All types are immutable value objects: dataclasses are frozen and numpy
buffers are marked read-only, so instances can be shared freely between
threads.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

Label = int  # shapelet address: cluster * s_max + segment index


class InvariantError(RuntimeError):
    """An internal consistency check failed (a bug, not a user error)."""


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def encode_label(k: int, q: int, s_max: int) -> Label:
    """Pack cluster index k and segment index q into a single label."""
    if k < 0:
        raise ValueError(f"cluster index must be nonnegative, got {k}")
    if not 0 <= q < s_max:
        raise ValueError(f"segment index {q} outside [0, {s_max})")
    return k * s_max + q


def decode_label(label: Label, s_max: int) -> tuple[int, int]:
    """Inverse of :func:`encode_label`: label -> (cluster, segment)."""
    if label < 0:
        raise ValueError(f"label must be nonnegative, got {label}")
    return divmod(label, s_max)


@dataclass(frozen=True)
class TimeSeries:
    """One named, equally sampled series of real values."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values))
        if self.values.ndim != 1 or self.values.size < 2:
            raise ValueError(f"series {self.id!r} must be 1-d with length >= 2")
        if not np.isfinite(self.values).all():
            raise ValueError(f"series {self.id!r} contains non-finite values")

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Dataset:
    """A set of equal-length series with unique ids."""

    series: tuple[TimeSeries, ...]
    T: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        if not self.series:
            raise ValueError("dataset must contain at least one series")
        lengths = {len(s) for s in self.series}
        if len(lengths) != 1:
            raise ValueError(f"series lengths differ: {sorted(lengths)}")
        ids = [s.id for s in self.series]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate series ids: {dupes[:5]}")
        object.__setattr__(self, "T", lengths.pop())

    @property
    def N(self) -> int:
        return len(self.series)

    def matrix(self) -> np.ndarray:
        """Stack all series into an (N, T) float array."""
        return np.stack([s.values for s in self.series])

    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.series)


@dataclass(frozen=True)
class Hyperparameters:
    """Knobs of the summarization pipeline.

    ``k_max=None`` means "use the dataset size" (the largest possible
    number of clusters).  ``s_max`` must exceed 2 or the transaction-cost
    sweep in the segmenter is not guaranteed to terminate.
    """

    k_max: int | None = None
    s_max: int = 10
    dtau_min: int = 5
    d_epsilon: float = 0.01
    z_normalize: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        if self.k_max is not None and self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if self.s_max <= 2:
            raise ValueError(f"s_max must be > 2, got {self.s_max}")
        if self.dtau_min < 1:
            raise ValueError(f"dtau_min must be >= 1, got {self.dtau_min}")
        if self.d_epsilon <= 0:
            raise ValueError(f"d_epsilon must be > 0, got {self.d_epsilon}")

    def resolve_k_max(self, n_series: int) -> int:
        return n_series if self.k_max is None else self.k_max


@dataclass(frozen=True)
class Segmentation:
    """Strictly increasing boundary time indices, first one pinned at 0."""

    boundaries: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple(int(b) for b in self.boundaries)
        object.__setattr__(self, "boundaries", bounds)
        if len(bounds) < 2:
            raise ValueError("segmentation needs at least two boundaries")
        if bounds[0] != 0:
            raise ValueError(f"first boundary must be 0, got {bounds[0]}")
        if any(b >= c for b, c in zip(bounds, bounds[1:])):
            raise ValueError(f"boundaries not strictly increasing: {bounds}")

    @property
    def num_segments(self) -> int:
        return len(self.boundaries) - 1

    def segments(self):
        """Yield (start, end) index pairs; adjacent segments share a sample."""
        return zip(self.boundaries, self.boundaries[1:])

    def validate(self, T: int, s_max: int, dtau_min: int) -> None:
        """Check the full contract for a segmentation of a length-T series."""
        if self.boundaries[-1] != T - 1:
            raise InvariantError(f"last boundary {self.boundaries[-1]} != T-1 = {T - 1}")
        if not 1 <= self.num_segments < s_max:
            raise InvariantError(f"segment count {self.num_segments} outside [1, {s_max})")
        final_len = self.boundaries[-1] - self.boundaries[-2]
        if final_len < dtau_min:
            raise InvariantError(f"final segment length {final_len} < dtau_min={dtau_min}")


@dataclass(frozen=True)
class Alphabet:
    """Cluster centroids plus their segmentations; shapelets are the
    centroid stretches between consecutive boundaries, addressed by
    ``label = k * s_max + q``."""

    centroids: tuple[TimeSeries, ...]
    centroid_segmentations: tuple[Segmentation, ...]
    s_max: int

    def __post_init__(self):
        object.__setattr__(self, "centroids", tuple(self.centroids))
        object.__setattr__(self, "centroid_segmentations", tuple(self.centroid_segmentations))
        if not self.centroids:
            raise ValueError("alphabet needs at least one centroid")
        if len(self.centroids) != len(self.centroid_segmentations):
            raise ValueError("one segmentation per centroid required")
        lengths = {len(c) for c in self.centroids}
        if len(lengths) != 1:
            raise ValueError("centroids must share one length")
        for k, seg in enumerate(self.centroid_segmentations):
            if seg.num_segments >= self.s_max:
                raise ValueError(f"centroid {k} has {seg.num_segments} segments >= s_max")

    @property
    def K(self) -> int:
        return len(self.centroids)

    @property
    def T(self) -> int:
        return len(self.centroids[0])

    def segment_count(self, k: int) -> int:
        return self.centroid_segmentations[k].num_segments

    def shapelet(self, k: int, q: int) -> np.ndarray:
        """Centroid k restricted to segment q, boundary samples inclusive."""
        bounds = self.centroid_segmentations[k].boundaries
        return self.centroids[k].values[bounds[q] : bounds[q + 1] + 1]

    def shapelets(self):
        """Yield (k, q, values) over the whole alphabet in label order."""
        for k in range(self.K):
            for q in range(self.segment_count(k)):
                yield k, q, self.shapelet(k, q)


@dataclass(frozen=True)
class SeriesSummary:
    """Everything the pipeline produced for one series."""

    id: str
    values: np.ndarray
    segmentation: Segmentation
    labels: tuple[Label, ...]
    cluster: int
    prediction: np.ndarray
    predicted_label: Label
    horizon: int
    clamped: bool

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values))
        object.__setattr__(self, "prediction", _freeze(self.prediction))
        object.__setattr__(self, "labels", tuple(int(l) for l in self.labels))
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.prediction.size != self.horizon + 1:
            raise ValueError("prediction length must equal horizon + 1")


@dataclass(frozen=True)
class SummarizationResult:
    """Output of a full pipeline run: per-series records plus the alphabet
    and the run manifest data (hyperparameters and input checksum)."""

    records: tuple[SeriesSummary, ...]
    alphabet: Alphabet
    hyper: Hyperparameters
    dataset_checksum: str

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    def record(self, series_id: str) -> SeriesSummary:
        for rec in self.records:
            if rec.id == series_id:
                return rec
        raise LookupError(f"unknown series id: {series_id!r}")

    def assignments(self) -> dict[str, int]:
        return {rec.id: rec.cluster for rec in self.records}


def dataset_checksum(dataset: Dataset) -> str:
    """SHA-256 over ids and raw values; identifies the exact input data."""
    digest = hashlib.sha256()
    for s in dataset.series:
        digest.update(s.id.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(np.ascontiguousarray(s.values).tobytes())
    return digest.hexdigest()


def results_equal(a: SummarizationResult, b: SummarizationResult) -> bool:
    """Field-by-field equality, exact on all floats."""
    if a.hyper != b.hyper or a.dataset_checksum != b.dataset_checksum:
        return False
    if a.alphabet.s_max != b.alphabet.s_max or a.alphabet.K != b.alphabet.K:
        return False
    for ca, cb in zip(a.alphabet.centroids, b.alphabet.centroids):
        if ca.id != cb.id or not np.array_equal(ca.values, cb.values):
            return False
    if any(
        sa.boundaries != sb.boundaries
        for sa, sb in zip(a.alphabet.centroid_segmentations, b.alphabet.centroid_segmentations)
    ):
        return False
    if len(a.records) != len(b.records):
        return False
    for ra, rb in zip(a.records, b.records):
        same = (
            ra.id == rb.id
            and ra.segmentation.boundaries == rb.segmentation.boundaries
            and ra.labels == rb.labels
            and ra.cluster == rb.cluster
            and ra.predicted_label == rb.predicted_label
            and ra.horizon == rb.horizon
            and ra.clamped == rb.clamped
            and np.array_equal(ra.values, rb.values)
            and np.array_equal(ra.prediction, rb.prediction)
        )
        if not same:
            return False
    return True
