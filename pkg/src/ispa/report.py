"""Quantitative side formulas and result serialization.

The summary document is JSON with a versioned schema committed next to
the code; floats round-trip exactly through Python's shortest-repr
encoding.  Plot exports are plain CSV, one file per series, carrying the
observed values, both prediction trajectories and a boundary flag column
for drawing segment separators.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources

from .model import (
    Alphabet,
    Hyperparameters,
    Segmentation,
    SeriesSummary,
    SummarizationResult,
    TimeSeries,
)
from .pipeline import martingale_predict

SCHEMA_VERSION = 1
DEFAULT_MARTINGALE_HORIZON = 10


@dataclass(frozen=True)
class EpiParams:
    """Inputs of the geometric infection-accumulation formula."""

    r0: float
    serial_interval: float
    horizon_days: int

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError(f"r0 must be > 0, got {self.r0}")
        if self.serial_interval <= 0:
            raise ValueError(f"serial interval must be > 0, got {self.serial_interval}")
        if self.horizon_days < 1:
            raise ValueError(f"horizon must be >= 1 day, got {self.horizon_days}")


def accumulated_infections(params: EpiParams) -> float:
    """Sum of r0^(t / serial_interval) for t = 0 .. horizon_days - 1.

    Evaluated in closed form as a geometric series.  The exclusive upper
    bound is what reproduces the published totals (628.4e6 at 98 days,
    18750.7e9 at 152 days for r0=2.25, serial interval 4.25).
    """
    ratio = params.r0 ** (1.0 / params.serial_interval)
    if ratio == 1.0:
        return float(params.horizon_days)
    return (ratio**params.horizon_days - 1.0) / (ratio - 1.0)


def load_schema() -> dict:
    """The JSON schema the summary document is validated against."""
    text = resources.files("ispa.schema").joinpath("summary.schema.json").read_text("utf-8")
    return json.loads(text)


def export_summary(result: SummarizationResult) -> bytes:
    """Serialize a result to the JSON summary document (UTF-8 bytes)."""
    hyper = result.hyper
    doc = {
        "schema_version": SCHEMA_VERSION,
        "manifest": {
            "hyperparameters": {
                "k_max": hyper.k_max,
                "s_max": hyper.s_max,
                "dtau_min": hyper.dtau_min,
                "d_epsilon": hyper.d_epsilon,
                "z_normalize": hyper.z_normalize,
                "rng_seed": hyper.rng_seed,
            },
            "dataset_checksum": result.dataset_checksum,
        },
        "alphabet": {
            "K": result.alphabet.K,
            "s_max": result.alphabet.s_max,
            "centroids": [
                {"id": c.id, "values": c.values.tolist()} for c in result.alphabet.centroids
            ],
            "segmentations": [
                list(seg.boundaries) for seg in result.alphabet.centroid_segmentations
            ],
        },
        "series": [
            {
                "id": rec.id,
                "values": rec.values.tolist(),
                "cluster": rec.cluster,
                "boundaries": list(rec.segmentation.boundaries),
                "labels": list(rec.labels),
                "predicted_label": rec.predicted_label,
                "horizon": rec.horizon,
                "clamped": rec.clamped,
                "prediction": rec.prediction.tolist(),
            }
            for rec in result.records
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False).encode("utf-8")


def import_summary(data: bytes) -> SummarizationResult:
    """Rebuild a result from :func:`export_summary` output, losslessly."""
    doc = json.loads(data.decode("utf-8"))
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version: {doc.get('schema_version')!r}")
    hp = doc["manifest"]["hyperparameters"]
    hyper = Hyperparameters(
        k_max=hp["k_max"],
        s_max=hp["s_max"],
        dtau_min=hp["dtau_min"],
        d_epsilon=hp["d_epsilon"],
        z_normalize=hp["z_normalize"],
        rng_seed=hp["rng_seed"],
    )
    alphabet = Alphabet(
        centroids=tuple(
            TimeSeries(id=c["id"], values=c["values"]) for c in doc["alphabet"]["centroids"]
        ),
        centroid_segmentations=tuple(
            Segmentation(tuple(b)) for b in doc["alphabet"]["segmentations"]
        ),
        s_max=doc["alphabet"]["s_max"],
    )
    records = tuple(
        SeriesSummary(
            id=rec["id"],
            values=rec["values"],
            segmentation=Segmentation(tuple(rec["boundaries"])),
            labels=tuple(rec["labels"]),
            cluster=rec["cluster"],
            prediction=rec["prediction"],
            predicted_label=rec["predicted_label"],
            horizon=rec["horizon"],
            clamped=rec["clamped"],
        )
        for rec in doc["series"]
    )
    return SummarizationResult(
        records=records,
        alphabet=alphabet,
        hyper=hyper,
        dataset_checksum=doc["manifest"]["dataset_checksum"],
    )


def export_plot_series(
    result: SummarizationResult,
    series_id: str,
    *,
    martingale_horizon: int | None = None,
) -> bytes:
    """CSV for one series: observed values, both predictions, boundary flags.

    Rows run from t=0 to the end of the longer prediction; the anchor row
    t = T-1 is the only one where the observed value and both predictions
    are all present.  The baseline horizon defaults to the pipeline
    prediction's own horizon, so the file has T + horizon rows.
    """
    rec = result.record(series_id)
    T = rec.values.size
    horizon = rec.horizon
    mh = horizon if martingale_horizon is None else martingale_horizon
    baseline = martingale_predict(
        TimeSeries(id=rec.id, values=rec.values), horizon=mh
    ).values
    boundaries = set(rec.segmentation.boundaries)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", "observed", "ispa_prediction", "martingale_prediction", "is_boundary"])
    for t in range(T + max(horizon, mh)):
        observed = repr(rec.values[t].item()) if t < T else ""
        ispa_col = ""
        if T - 1 <= t <= T - 1 + horizon:
            ispa_col = repr(rec.prediction[t - (T - 1)].item())
        martingale_col = ""
        if T - 1 <= t <= T - 1 + mh:
            martingale_col = repr(baseline[t - (T - 1)].item())
        writer.writerow([t, observed, ispa_col, martingale_col, int(t in boundaries)])
    return buffer.getvalue().encode("utf-8")
