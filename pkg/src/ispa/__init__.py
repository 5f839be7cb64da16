"""ispa: summarize a set of related equal-length time series into label
words over a learned shapelet alphabet, and extend each series with a
segment-level prediction.

The pipeline clusters the series (k-means++ with empty-cluster discard),
segments every centroid with a trading-inspired changepoint detector, and
assigns each series segment the nearest shapelet under unconstrained DTW.
Completing the last label yields a short prediction trajectory.
"""

from .clustering import ClusterModel, cluster, lloyd_cluster, seed_kmeanspp
from .estimator import SeriesSummarizer
from .ingest import (
    CsvParseError,
    CumulativeTable,
    EmptyDatasetError,
    build_daily_deaths,
    build_net_infections,
    build_raw_daily,
    crop_dates,
    daily_diff,
    parse_cumulative_csv,
    synchronize,
)
from .model import (
    Alphabet,
    Dataset,
    Hyperparameters,
    InvariantError,
    Label,
    Segmentation,
    SeriesSummary,
    SummarizationResult,
    TimeSeries,
    dataset_checksum,
    decode_label,
    encode_label,
    results_equal,
)
from .pipeline import (
    Prediction,
    build_alphabet,
    label_series,
    martingale_predict,
    nearest_shapelet,
    predict_series,
    run_ispa,
)
from .preprocess import NormalizedSeries, normalize_for_trading, z_normalize
from .report import (
    EpiParams,
    accumulated_infections,
    export_plot_series,
    export_summary,
    import_summary,
    load_schema,
)
from .segmentation import TradeState, TradeTrajectory, apts_segment, optimal_trade, replay_trade
from .similarity import EXCEEDED, dtw_distance, dtw_distance_bounded

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ClusterModel",
    "CsvParseError",
    "CumulativeTable",
    "Dataset",
    "EXCEEDED",
    "EmptyDatasetError",
    "EpiParams",
    "Hyperparameters",
    "InvariantError",
    "Label",
    "NormalizedSeries",
    "Prediction",
    "Segmentation",
    "SeriesSummarizer",
    "SeriesSummary",
    "SummarizationResult",
    "TimeSeries",
    "TradeState",
    "TradeTrajectory",
    "accumulated_infections",
    "apts_segment",
    "build_alphabet",
    "build_daily_deaths",
    "build_net_infections",
    "build_raw_daily",
    "cluster",
    "crop_dates",
    "daily_diff",
    "dataset_checksum",
    "decode_label",
    "dtw_distance",
    "dtw_distance_bounded",
    "encode_label",
    "export_plot_series",
    "export_summary",
    "import_summary",
    "label_series",
    "lloyd_cluster",
    "load_schema",
    "martingale_predict",
    "nearest_shapelet",
    "normalize_for_trading",
    "optimal_trade",
    "parse_cumulative_csv",
    "predict_series",
    "replay_trade",
    "results_equal",
    "run_ispa",
    "seed_kmeanspp",
    "synchronize",
    "z_normalize",
]
