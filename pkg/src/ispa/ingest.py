"""Ingestion of cumulative-count CSV files in the Johns Hopkins global
layout (Province/State, Country/Region, Lat, Long, then one column per
day), differencing into daily series and key-synchronizing files into
datasets.

Values are used as delivered: empty cells count as zero, downward
corrections stay negative after differencing, and no imputation happens.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .model import Dataset, TimeSeries

HEADER_PREFIX = ("Province/State", "Country/Region", "Lat", "Long")


class CsvParseError(ValueError):
    """Malformed input file; the message carries the offending line."""


class EmptyDatasetError(ValueError):
    """No series left after joining/building."""


@dataclass(frozen=True)
class CumulativeTable:
    """Rows of cumulative counts keyed by "province|country"."""

    keys: tuple[str, ...]
    values: np.ndarray
    dates: tuple[str, ...]

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("values must be a 2-d (rows, dates) array")
        if arr.shape != (len(self.keys), len(self.dates)):
            raise ValueError("keys/dates do not match the values shape")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "keys", tuple(self.keys))
        object.__setattr__(self, "dates", tuple(self.dates))

    @property
    def n_rows(self) -> int:
        return len(self.keys)


def parse_cumulative_csv(content) -> CumulativeTable:
    """Parse CSV bytes (or text, or a readable) into a cumulative table.

    RFC-4180 quoting is honored, so country names containing commas stay
    intact.  The region key is "province|country" with both parts
    whitespace-trimmed; the province is often empty.
    """
    if hasattr(content, "read"):
        content = content.read()
    if isinstance(content, bytes):
        text = content.decode("utf-8-sig")
    else:
        text = content
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvParseError("line 1: empty file, expected a header row") from None
    if tuple(h.strip() for h in header[:4]) != HEADER_PREFIX:
        raise CsvParseError(
            "line 1: expected header starting with "
            + ",".join(HEADER_PREFIX)
            + f", got {','.join(header[:4])!r}"
        )
    dates = tuple(h.strip() for h in header[4:])

    keys: list[str] = []
    rows: list[list[float]] = []
    for number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise CsvParseError(
                f"line {number}: expected {len(header)} fields, got {len(row)}"
            )
        key = f"{row[0].strip()}|{row[1].strip()}"
        parsed = []
        for column, cell in zip(dates, row[4:]):
            cell = cell.strip()
            if not cell:
                parsed.append(0.0)
                continue
            try:
                value = float(cell)
            except ValueError:
                raise CsvParseError(
                    f"line {number}: non-numeric value {cell!r} in column {column!r}"
                ) from None
            if not np.isfinite(value):
                raise CsvParseError(
                    f"line {number}: non-finite value {cell!r} in column {column!r}"
                )
            parsed.append(value)
        keys.append(key)
        rows.append(parsed)
    values = np.array(rows, dtype=np.float64).reshape(len(keys), len(dates))
    return CumulativeTable(keys=tuple(keys), values=values, dates=dates)


def daily_diff(cumulative) -> np.ndarray:
    """First difference: output[t] = cumulative[t+1] - cumulative[t].

    Negative outputs are preserved; source data contains corrections.
    """
    arr = np.asarray(cumulative, dtype=np.float64)
    if arr.shape[-1] < 2:
        raise ValueError("need at least two cumulative values to difference")
    return np.diff(arr, axis=-1)


def synchronize(a: CumulativeTable, b: CumulativeTable) -> tuple[CumulativeTable, CumulativeTable]:
    """Inner join on region key; row order follows table a.

    Rows present in only one table are dropped.  An empty join is allowed
    here and caught by the dataset builders.
    """
    b_index = {}
    for i, key in enumerate(b.keys):
        b_index.setdefault(key, i)
    a_rows = [i for i, key in enumerate(a.keys) if key in b_index]
    keys = tuple(a.keys[i] for i in a_rows)
    a_out = CumulativeTable(keys=keys, values=a.values[a_rows], dates=a.dates)
    b_rows = [b_index[key] for key in keys]
    b_out = CumulativeTable(keys=keys, values=b.values[b_rows], dates=b.dates)
    return a_out, b_out


def crop_dates(table: CumulativeTable, start: str | None, end: str | None) -> CumulativeTable:
    """Restrict to the inclusive date-label window [start, end]."""
    lo = 0 if start is None else _date_index(table, start)
    hi = len(table.dates) - 1 if end is None else _date_index(table, end)
    if hi < lo:
        raise ValueError(f"end date {table.dates[hi]!r} precedes start date {table.dates[lo]!r}")
    return CumulativeTable(
        keys=table.keys, values=table.values[:, lo : hi + 1], dates=table.dates[lo : hi + 1]
    )


def _date_index(table: CumulativeTable, label: str) -> int:
    try:
        return table.dates.index(label)
    except ValueError:
        raise LookupError(f"date label {label!r} not found in the table") from None


def build_net_infections(confirmed: CumulativeTable, recovered: CumulativeTable) -> Dataset:
    """Daily new confirmed minus daily new recovered, per joined region."""
    if confirmed.dates != recovered.dates:
        raise ValueError("confirmed and recovered tables cover different date columns")
    conf, rec = synchronize(confirmed, recovered)
    if conf.n_rows == 0:
        raise EmptyDatasetError("no region keys shared between the two tables")
    net = daily_diff(conf.values) - daily_diff(rec.values)
    return Dataset(tuple(TimeSeries(id=key, values=net[i]) for i, key in enumerate(conf.keys)))


def build_daily_deaths(deaths: CumulativeTable) -> Dataset:
    """Daily deaths from one cumulative table."""
    if deaths.n_rows == 0:
        raise EmptyDatasetError("deaths table has no rows")
    daily = daily_diff(deaths.values)
    return Dataset(tuple(TimeSeries(id=key, values=daily[i]) for i, key in enumerate(deaths.keys)))


def build_raw_daily(table: CumulativeTable) -> Dataset:
    """Use the date columns directly as daily values, no differencing."""
    if table.n_rows == 0:
        raise EmptyDatasetError("table has no rows")
    return Dataset(
        tuple(TimeSeries(id=key, values=table.values[i]) for i, key in enumerate(table.keys))
    )
