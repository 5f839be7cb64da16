"""Command-line front door: ``ispa summarize | predict | stats``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation.  Identical invocations with the same --seed write byte
identical output files.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from pathlib import Path

from .ingest import (
    CsvParseError,
    EmptyDatasetError,
    build_daily_deaths,
    build_net_infections,
    build_raw_daily,
    crop_dates,
    parse_cumulative_csv,
)
from .model import Dataset, Hyperparameters, InvariantError, SummarizationResult
from .pipeline import run_ispa
from .report import (
    DEFAULT_MARTINGALE_HORIZON,
    EpiParams,
    accumulated_infections,
    export_plot_series,
    export_summary,
    import_summary,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

OUT_DIR_ENV = "ISPA_OUT_DIR"


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_with_message(message))

    def exit_with_message(self, message) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _k_max(token: str):
    if token == "N":
        return None
    try:
        value = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or the literal 'N', got {token!r}")
    return value


def _default_out() -> str:
    return os.environ.get(OUT_DIR_ENV, "ispa-out")


def _add_hyper_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("pipeline hyperparameters")
    group.add_argument(
        "--kmax",
        type=_k_max,
        default=None,
        metavar="K|N",
        help="cluster upper bound; the literal N means the dataset size (default: N)",
    )
    group.add_argument("--smax", type=int, default=10, help="segment budget per series (default: 10)")
    group.add_argument(
        "--dtau-min", type=int, default=5, help="minimum final-segment length (default: 5)"
    )
    group.add_argument(
        "--d-epsilon", type=float, default=0.01, help="transaction-cost sweep step (default: 0.01)"
    )
    group.add_argument(
        "--z-normalize",
        action="store_true",
        help="z-normalize series before clustering (off by default; strongly scaled "
        "count data clusters better without it)",
    )
    group.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    group.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="parallel workers for per-series labeling (default: all cores)",
    )


def _add_input_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("dataset construction")
    group.add_argument(
        "--mode",
        choices=("net-infections", "daily-deaths", "raw-daily"),
        required=True,
        help="net-infections: diff(--confirmed) - diff(--recovered); "
        "daily-deaths: diff(--deaths); raw-daily: --input columns used as-is",
    )
    group.add_argument("--confirmed", type=Path, help="cumulative confirmed-cases CSV")
    group.add_argument("--recovered", type=Path, help="cumulative recoveries CSV")
    group.add_argument("--deaths", type=Path, help="cumulative deaths CSV")
    group.add_argument("--input", type=Path, help="daily-values CSV for raw-daily mode")
    group.add_argument("--start-date", help="first date column to keep (e.g. 1/22/20)")
    group.add_argument("--end-date", help="last date column to keep (e.g. 4/27/20)")


def _hyper_from_args(args) -> Hyperparameters:
    return Hyperparameters(
        k_max=args.kmax,
        s_max=args.smax,
        dtau_min=args.dtau_min,
        d_epsilon=args.d_epsilon,
        z_normalize=args.z_normalize,
        rng_seed=args.seed,
    )


def _load_table(parser: _Parser, path: Path | None, flag: str):
    if path is None:
        parser.error(f"{flag} is required for this mode")
    return parse_cumulative_csv(path.read_bytes())


def _build_dataset(args, parser: _Parser) -> Dataset:
    def prepare(path, flag):
        table = _load_table(parser, path, flag)
        if args.start_date or args.end_date:
            table = crop_dates(table, args.start_date, args.end_date)
        return table

    if args.mode == "net-infections":
        confirmed = prepare(args.confirmed, "--confirmed")
        recovered = prepare(args.recovered, "--recovered")
        return build_net_infections(confirmed, recovered)
    if args.mode == "daily-deaths":
        return build_daily_deaths(prepare(args.deaths, "--deaths"))
    return build_raw_daily(prepare(args.input, "--input"))


def _safe_name(index: int, series_id: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9._-]+", "_", series_id).strip("_") or "series"
    return f"{index:04d}_{slug}.csv"


def _write_plots(result: SummarizationResult, out: Path, series_ids, martingale_horizon):
    plots = out / "plots"
    plots.mkdir(parents=True, exist_ok=True)
    index = {rec.id: i for i, rec in enumerate(result.records)}
    for series_id in series_ids:
        data = export_plot_series(result, series_id, martingale_horizon=martingale_horizon)
        (plots / _safe_name(index[series_id], series_id)).write_bytes(data)


def _cmd_summarize(args, parser: _Parser) -> int:
    dataset = _build_dataset(args, parser)
    hyper = _hyper_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    result = run_ispa(dataset, hyper, threads=max(1, args.threads))
    elapsed = time.perf_counter() - started
    (out / "summary.json").write_bytes(export_summary(result))
    _write_plots(result, out, [rec.id for rec in result.records], None)
    print(f"N={dataset.N} T={dataset.T} K={result.alphabet.K} runtime={elapsed:.2f}s")
    return EXIT_OK


def _cmd_predict(args, parser: _Parser) -> int:
    if args.summary is not None:
        result = import_summary(Path(args.summary).read_bytes())
    else:
        if args.mode is None:
            parser.error("either --summary or --mode with input CSVs is required")
        result = run_ispa(_build_dataset(args, parser), _hyper_from_args(args),
                          threads=max(1, args.threads))
    known = {rec.id for rec in result.records}
    series_ids = args.series or sorted(known)
    for series_id in series_ids:
        if series_id not in known:
            raise LookupError(f"unknown series id: {series_id!r}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_plots(result, out, series_ids, args.martingale_horizon)
    print(f"wrote {len(series_ids)} plot file(s) to {out / 'plots'}")
    return EXIT_OK


def _cmd_stats(args, parser: _Parser) -> int:
    params = EpiParams(r0=args.r0, serial_interval=args.serial, horizon_days=args.days)
    print(f"{accumulated_infections(params):.10e}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ispa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    summarize = sub.add_parser(
        "summarize",
        help="build a dataset, run the pipeline, write summary.json and per-series plot CSVs",
    )
    _add_input_flags(summarize)
    _add_hyper_flags(summarize)
    summarize.add_argument(
        "--out",
        default=_default_out(),
        help=f"output directory (default: ${OUT_DIR_ENV} or ispa-out)",
    )
    summarize.set_defaults(func=_cmd_summarize)

    predict = sub.add_parser(
        "predict", help="emit plot CSVs with pipeline and last-value baseline trajectories"
    )
    predict.add_argument("--summary", type=Path, help="reuse a saved summary.json")
    group = predict.add_argument_group("dataset construction (when no --summary)")
    group.add_argument(
        "--mode", choices=("net-infections", "daily-deaths", "raw-daily"), default=None
    )
    group.add_argument("--confirmed", type=Path)
    group.add_argument("--recovered", type=Path)
    group.add_argument("--deaths", type=Path)
    group.add_argument("--input", type=Path)
    group.add_argument("--start-date")
    group.add_argument("--end-date")
    _add_hyper_flags(predict)
    predict.add_argument("--series", action="append", help="series id to export (repeatable; default all)")
    predict.add_argument(
        "--martingale-horizon",
        type=int,
        default=DEFAULT_MARTINGALE_HORIZON,
        help="baseline horizon in days (default: 10)",
    )
    predict.add_argument("--out", default=_default_out())
    predict.set_defaults(func=_cmd_predict)

    stats = sub.add_parser("stats", help="print the accumulated-infections total H")
    stats.add_argument("--r0", type=float, default=2.25, help="basic reproduction number (default: 2.25)")
    stats.add_argument("--serial", type=float, default=4.25, help="serial interval in days (default: 4.25)")
    stats.add_argument("--days", type=int, required=True, help="horizon in days")
    stats.set_defaults(func=_cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, parser)
    except SystemExit as exc:
        code = exc.code
        return EXIT_OK if code is None else int(code)
    except CsvParseError as exc:
        print(f"ispa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EmptyDatasetError, LookupError, OSError) as exc:
        print(f"ispa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"ispa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"ispa: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entrypoint():  # console_scripts hook
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
