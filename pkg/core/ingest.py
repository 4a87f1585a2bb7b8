"""
JHU CSSE wide-format ingestion.

Parses ``time_series_covid19_recovered_global.csv`` style files into a
region table, aggregates the regions into one global cumulative curve and
converts between cumulative and day-over-day views of that curve.
"""
import csv
import logging
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from typing import List, Optional, Sequence, TextIO, Tuple

import numpy as np
import pandas as pd

from core.errors import (
    EmptyTable,
    InvalidCoordinate,
    MalformedHeader,
    NonNumericCount,
    RaggedRow,
    SeriesTooShort,
)

# --- Constants ---
METADATA_COLUMNS = ("Province/State", "Country/Region", "Lat", "Long")
JHU_DATE_FORMAT = "%m/%d/%y"
COUNT_PATTERN = re.compile(r"[+-]?[0-9]+")
INT64_BOUNDS = (int(np.iinfo(np.int64).min), int(np.iinfo(np.int64).max))

# --- Logging Setup ---
logger = logging.getLogger(__name__)


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RegionRecord:
    province: Optional[str]
    country: str
    latitude: Optional[float]
    longitude: Optional[float]
    counts: np.ndarray  # cumulative recoveries, int64, read-only

    @property
    def label(self) -> str:
        return f"{self.province}, {self.country}" if self.province else self.country


@dataclass(frozen=True)
class RegionSeriesTable:
    regions: Tuple[RegionRecord, ...]
    dates: Tuple[date, ...]

    def __post_init__(self):
        for offset, (prev, cur) in enumerate(zip(self.dates, self.dates[1:])):
            if cur - prev != timedelta(days=1):
                raise MalformedHeader(
                    f"date columns not contiguous at position {offset + 1}: {prev} -> {cur}"
                )
        for region in self.regions:
            if len(region.counts) != len(self.dates):
                raise MalformedHeader(
                    f"region '{region.label}' has {len(region.counts)} counts "
                    f"for {len(self.dates)} dates"
                )

    def count_matrix(self) -> np.ndarray:
        """Regions x dates matrix of cumulative counts."""
        if not self.regions:
            return np.zeros((0, len(self.dates)), dtype=np.int64)
        return np.vstack([r.counts for r in self.regions])

    def to_frame(self) -> pd.DataFrame:
        """Wide frame with the JHU metadata columns and ISO-dated count columns."""
        meta = pd.DataFrame(
            {
                "province": [r.province for r in self.regions],
                "country": [r.country for r in self.regions],
                "latitude": [r.latitude for r in self.regions],
                "longitude": [r.longitude for r in self.regions],
            }
        )
        counts = pd.DataFrame(
            self.count_matrix(), columns=[d.isoformat() for d in self.dates]
        )
        return pd.concat([meta, counts], axis=1)

    def country_series(self) -> pd.DataFrame:
        """Cumulative recoveries per country (rows, alphabetical) by ISO date (columns)."""
        frame = self.to_frame()
        date_columns = [d.isoformat() for d in self.dates]
        return frame.groupby("country", sort=True)[date_columns].sum()

    def country_totals(self) -> pd.DataFrame:
        """Latest cumulative recoveries per country, highest first."""
        if not self.dates:
            raise EmptyTable("table has no dates")
        frame = self.to_frame()
        last = self.dates[-1].isoformat()
        totals = (
            frame.groupby("country", sort=True)[last]
            .sum()
            .sort_values(ascending=False, kind="mergesort")
            .reset_index()
            .rename(columns={last: "total_recovered"})
        )
        totals.insert(0, "rank", np.arange(1, len(totals) + 1))
        return totals


@dataclass(frozen=True)
class CumulativeSeries:
    dates: Tuple
    values: np.ndarray  # float64

    def __post_init__(self):
        if len(self.values) != len(self.dates):
            raise ValueError(
                f"{len(self.values)} values for {len(self.dates)} dates"
            )

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DeltaSeries:
    dates: Tuple
    values: np.ndarray  # float64, may hold negative corrections

    def __post_init__(self):
        if len(self.values) != len(self.dates):
            raise ValueError(
                f"{len(self.values)} values for {len(self.dates)} dates"
            )

    def __len__(self) -> int:
        return len(self.values)


# --- Parsing ---
def _parse_date_column(name: str) -> date:
    try:
        return datetime.strptime(name.strip(), JHU_DATE_FORMAT).date()
    except ValueError:
        raise MalformedHeader(f"unparsable date column: {name!r}") from None


def _parse_degrees(cell: str, line_number: int, column: str) -> Optional[float]:
    text = cell.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        raise InvalidCoordinate(line_number, column, cell) from None
    if not np.isfinite(value):
        raise InvalidCoordinate(line_number, column, cell)
    return value


def _parse_count(cell: str, line_number: int, column: str) -> int:
    """Plain decimal integer within int64; anything else is ``NonNumericCount``."""
    text = cell.strip()
    if not COUNT_PATTERN.fullmatch(text):
        raise NonNumericCount(line_number, column, cell)
    value = int(text)
    if not INT64_BOUNDS[0] <= value <= INT64_BOUNDS[1]:
        raise NonNumericCount(line_number, column, cell)
    return value


def _parse_header(header: Sequence[str]) -> List[date]:
    names = [h.strip().lstrip("\ufeff") for h in header]
    if len(names) < len(METADATA_COLUMNS) or tuple(names[:4]) != METADATA_COLUMNS:
        raise MalformedHeader(
            f"expected leading columns {', '.join(METADATA_COLUMNS)}; got {names[:4]}"
        )
    if len(names) == len(METADATA_COLUMNS):
        raise MalformedHeader("no date columns after the metadata columns")
    return [_parse_date_column(n) for n in names[4:]]


def parse_jhu_csv(raw: TextIO) -> RegionSeriesTable:
    """Parse a JHU CSSE wide-format recovered-cases CSV stream.

    Blank Lat/Long cells become ``None``; counts must be plain decimal
    integers in int64 range. Either returns a complete table or raises a
    ``DataError`` naming the offending line.
    """
    reader = csv.reader(raw)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedHeader("empty input: no header row") from None

    dates = _parse_header(header)
    width = len(header)
    date_names = [h.strip() for h in header[4:]]
    regions: List[RegionRecord] = []
    negative_rows = 0

    for row in reader:
        line_number = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != width:
            raise RaggedRow(line_number, width, len(row))

        counts = [
            _parse_count(cell, line_number, column)
            for column, cell in zip(date_names, row[4:])
        ]
        if any(c < 0 for c in counts):
            negative_rows += 1

        province = row[0].strip() or None
        regions.append(
            RegionRecord(
                province=province,
                country=row[1].strip(),
                latitude=_parse_degrees(row[2], line_number, "Lat"),
                longitude=_parse_degrees(row[3], line_number, "Long"),
                counts=_frozen(counts, np.int64),
            )
        )

    if negative_rows:
        logger.warning(f"{negative_rows} region rows contain negative counts.")
    logger.info(
        f"Parsed {len(regions)} regions over {len(dates)} days "
        f"({dates[0].isoformat()} .. {dates[-1].isoformat()})."
    )
    return RegionSeriesTable(regions=tuple(regions), dates=tuple(dates))


# --- Series transforms ---
def aggregate_global(table: RegionSeriesTable) -> CumulativeSeries:
    """Sum every region row into one global cumulative curve."""
    if not table.regions:
        raise EmptyTable("table has no regions to aggregate")
    values = table.count_matrix().astype(np.float64).sum(axis=0)
    return CumulativeSeries(dates=tuple(table.dates), values=_frozen(values, np.float64))


def to_daily_deltas(series: CumulativeSeries) -> DeltaSeries:
    """Day-over-day changes. Negative corrections are kept as they are."""
    if len(series) < 2:
        raise SeriesTooShort(
            f"need at least 2 cumulative values for deltas, got {len(series)}"
        )
    values = np.diff(np.asarray(series.values, dtype=np.float64))
    negatives = int(np.count_nonzero(values < 0))
    if negatives:
        logger.warning(f"{negatives} negative daily deltas retained (upstream corrections).")
    return DeltaSeries(dates=tuple(series.dates[1:]), values=_frozen(values, np.float64))


def reconstruct_cumulative(base: float, deltas: DeltaSeries) -> CumulativeSeries:
    """Running sum of ``deltas`` starting from ``base``; inverse of ``to_daily_deltas``."""
    steps = np.concatenate(([float(base)], np.asarray(deltas.values, dtype=np.float64)))
    values = np.cumsum(steps)[1:]
    return CumulativeSeries(dates=tuple(deltas.dates), values=_frozen(values, np.float64))


def load_jhu_csv(path) -> RegionSeriesTable:
    """Open ``path`` as UTF-8 (BOM tolerated) and parse it."""
    with open(path, "r", encoding="utf-8-sig", newline="") as handle:
        return parse_jhu_csv(handle)
