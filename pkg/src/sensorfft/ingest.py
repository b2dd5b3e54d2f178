"""Reading sensor CSV logs and gridding them for the transform.

The input format is a header row followed by one reading per line::

    timestamp,co2_ppm,humidity_pct,temperature_c
    1700000000,415.2,41.0,21.5
    1700000900,,40.8,21.6

Any subset of the channel columns may be present; ``timestamp`` is required.
An empty field means the channel was not measured for that row.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InsufficientDataError, ParameterError, RowError

# CSV column name -> SampleRecord attribute
CHANNEL_COLUMNS = {
    "co2_ppm": "co2",
    "humidity_pct": "humidity",
    "temperature_c": "temperature",
}


@dataclass(frozen=True, slots=True)
class SampleRecord:
    timestamp: int
    co2: float | None = None
    humidity: float | None = None
    temperature: float | None = None

    def value(self, channel: str) -> float | None:
        return getattr(self, channel_field(channel))


@dataclass(frozen=True)
class UniformSeries:
    """Real signal on a fixed grid: sample ``i`` was taken at ``start + i * interval``."""

    start: int
    interval: int
    values: np.ndarray
    channel: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2:
            raise InsufficientDataError(f"series needs at least 2 samples, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ParameterError("series values must be finite")
        if int(self.interval) != self.interval or self.interval <= 0:
            raise ParameterError(f"interval must be a positive integer, got {self.interval!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "interval", int(self.interval))
        object.__setattr__(self, "start", int(self.start))

    def __len__(self) -> int:
        return self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    def timestamps(self) -> np.ndarray:
        return self.start + self.interval * np.arange(self.values.size, dtype=np.int64)


def channel_field(channel: str) -> str:
    """Accept either a CSV column name (``co2_ppm``) or a record field (``co2``)."""
    if channel in CHANNEL_COLUMNS:
        return CHANNEL_COLUMNS[channel]
    if channel in CHANNEL_COLUMNS.values():
        return channel
    raise ParameterError(f"unknown channel {channel!r}")


def _parse_value(text: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def parse_records(text: str) -> list[SampleRecord]:
    """Parse a CSV document into records, one per data row, in file order.

    Channel fields that are empty or not numeric become ``None``. Columns
    other than ``timestamp`` and the known channels are ignored.
    """
    reader = csv.reader(io.StringIO(text, newline=""))
    header = None
    for header in reader:
        if any(cell.strip() for cell in header):
            break
    else:
        raise FormatError("empty document")
    columns = [cell.strip() for cell in header]
    if "timestamp" not in columns:
        raise FormatError("header has no 'timestamp' column")
    ts_col = columns.index("timestamp")
    channels = {i: CHANNEL_COLUMNS[c] for i, c in enumerate(columns) if c in CHANNEL_COLUMNS}
    if not channels:
        raise FormatError(
            "header names no channel column (expected one of "
            + ", ".join(CHANNEL_COLUMNS) + ")"
        )

    records = []
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        line = reader.line_num
        try:
            ts = int(row[ts_col].strip())
        except (IndexError, ValueError):
            raise RowError(line, "timestamp is not an integer") from None
        if ts < 0:
            raise RowError(line, "timestamp is negative")
        fields = {
            name: _parse_value(row[i]) if i < len(row) else None
            for i, name in channels.items()
        }
        records.append(SampleRecord(ts, **fields))
    return records


def available_channels(text: str) -> list[str]:
    """Channel columns named in the header of a CSV document."""
    header = next(csv.reader(io.StringIO(text, newline="")), [])
    return [c.strip() for c in header if c.strip() in CHANNEL_COLUMNS]


def clean_sort(records: list[SampleRecord], channel: str) -> list[SampleRecord]:
    """Drop records missing ``channel``, sort by time, keep the last record per timestamp."""
    field = channel_field(channel)
    latest: dict[int, SampleRecord] = {}
    for rec in records:
        if getattr(rec, field) is not None:
            latest[rec.timestamp] = rec
    if len(latest) < 2:
        raise InsufficientDataError(
            f"only {len(latest)} record(s) with a {channel} value; need at least 2"
        )
    return [latest[t] for t in sorted(latest)]


def resample_uniform(records: list[SampleRecord], interval: int, channel: str) -> UniformSeries:
    """Linearly interpolate cleaned records onto ``first, first + interval, ...``.

    The grid stops at or before the last record. Grid points that coincide
    with a record take its value unchanged.
    """
    if int(interval) != interval or interval <= 0:
        raise ParameterError(f"interval must be a positive integer number of seconds, got {interval!r}")
    interval = int(interval)
    field = channel_field(channel)
    times = np.array([r.timestamp for r in records], dtype=np.int64)
    values = np.array([getattr(r, field) for r in records], dtype=np.float64)
    if times.size < 2:
        raise InsufficientDataError("need at least 2 records to resample")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("records must be sorted with distinct timestamps; run clean_sort first")

    n = (int(times[-1]) - int(times[0])) // interval + 1
    if n < 2:
        raise InsufficientDataError(
            f"span of {times[-1] - times[0]} s holds fewer than 2 samples at {interval} s"
        )
    grid = times[0] + interval * np.arange(n, dtype=np.int64)

    right = np.searchsorted(times, grid, side="left")
    exact = times[np.minimum(right, times.size - 1)] == grid
    hi = np.clip(right, 1, times.size - 1)
    lo = hi - 1
    t0, t1 = times[lo], times[hi]
    v0, v1 = values[lo], values[hi]
    w = (grid - t0) / (t1 - t0)
    out = v0 + w * (v1 - v0)
    # rounding must not push a value outside its bracket
    out = np.clip(out, np.minimum(v0, v1), np.maximum(v0, v1))
    out = np.where(exact, values[np.minimum(right, times.size - 1)], out)
    return UniformSeries(int(times[0]), interval, out, channel)


def format_csv(rows: list[list[object]], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def series_to_csv(series: UniformSeries) -> str:
    """Render a series in the ingest format so it can be fed back in."""
    column = series.channel if series.channel in CHANNEL_COLUMNS else "co2_ppm"
    rows = [[int(t), repr(float(v))] for t, v in zip(series.timestamps(), series.values)]
    return format_csv(rows, ["timestamp", column])
