"""Irradiance time-series ingestion and representative-day averaging.

Input files are UTF-8 CSV with rows ``YYYY-MM-DDTHH:MM,<irradiance W/m^2>``.
A header row is optional and is recognised by a non-numeric second field.
Time-of-day is taken verbatim; no timezone arithmetic is applied.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from pathlib import Path

import numpy as np

from .errors import DataError

logger = logging.getLogger(__name__)

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M"


@dataclass(frozen=True)
class IrradianceSample:
    timestamp: datetime
    irradiance: float

    def __post_init__(self):
        if not self.irradiance >= 0:
            raise DataError(f"negative irradiance {self.irradiance} at {self.timestamp}")


@dataclass(frozen=True, eq=False)
class IrradianceSeries:
    """Timestamped irradiance samples on a regular intra-day grid.

    Parameters
    ----------
    timestamps : array of datetime64[m]
        Strictly increasing sample times.
    irradiance : array of float
        Non-negative irradiance values in W/m^2.
    step_minutes : int
        Sampling interval. Within a calendar day consecutive samples must be
        exactly this far apart; day-to-day discontinuities are allowed.
    filled : tuple of int
        Indices of samples created by single-gap interpolation.
    """

    timestamps: np.ndarray
    irradiance: np.ndarray
    step_minutes: int
    filled: tuple = field(default=())

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype="datetime64[m]")
        irr = np.asarray(self.irradiance, dtype=np.float64)
        if self.step_minutes <= 0:
            raise DataError("step_minutes must be positive")
        if ts.shape != irr.shape or ts.ndim != 1:
            raise DataError("timestamps and irradiance must be 1-d and equally long")
        if len(ts) < 2:
            raise DataError("a series needs at least 2 samples")
        if np.any(~np.isfinite(irr)) or np.any(irr < 0):
            raise DataError("irradiance must be finite and non-negative")
        gaps = np.diff(ts).astype(np.int64)
        if np.any(gaps <= 0):
            raise DataError("timestamps must be strictly increasing")
        same_day = ts[1:].astype("datetime64[D]") == ts[:-1].astype("datetime64[D]")
        if np.any(gaps[same_day] != self.step_minutes):
            raise DataError(f"intra-day sampling is not regular at {self.step_minutes} min")
        ts.flags.writeable = False
        irr.flags.writeable = False
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "irradiance", irr)
        object.__setattr__(self, "filled", tuple(int(i) for i in self.filled))

    def __len__(self):
        return len(self.irradiance)

    @property
    def samples(self):
        return [
            IrradianceSample(t.astype(datetime), float(v))
            for t, v in zip(self.timestamps, self.irradiance)
        ]

    def days(self):
        """Return ``{date: (minute_of_day array, irradiance array)}`` in date order."""
        day_index = self.timestamps.astype("datetime64[D]")
        minutes = (self.timestamps - day_index).astype(np.int64)
        out = {}
        for d in np.unique(day_index):
            mask = day_index == d
            out[d.astype(date)] = (minutes[mask], self.irradiance[mask])
        return out


@dataclass(frozen=True, eq=False)
class RepresentativeDay:
    """Per-slot mean irradiance across the days of a series."""

    slot_minutes: int
    values: np.ndarray
    day_count: int
    window_start: time = time(0, 0)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or len(values) == 0:
            raise DataError("a representative day needs at least one slot")
        if np.any(values < 0):
            raise DataError("representative-day values must be non-negative")
        if self.slot_minutes <= 0 or self.day_count <= 0:
            raise DataError("slot_minutes and day_count must be positive")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, RepresentativeDay):
            return NotImplemented
        return (
            self.slot_minutes == other.slot_minutes
            and self.day_count == other.day_count
            and self.window_start == other.window_start
            and np.array_equal(self.values, other.values)
        )

    @property
    def window_end(self):
        return minutes_to_time(time_to_minutes(self.window_start) + len(self) * self.slot_minutes)

    def as_series(self, day=date(2000, 1, 1)):
        """Replay the averaged values as a single-day series."""
        start = np.datetime64(datetime.combine(day, self.window_start), "m")
        ts = start + np.arange(len(self)) * np.timedelta64(self.slot_minutes, "m")
        return IrradianceSeries(ts, self.values.copy(), self.slot_minutes)


def time_to_minutes(t):
    return t.hour * 60 + t.minute


def minutes_to_time(m):
    return time(m // 60, m % 60)


def parse_time_of_day(text):
    """Parse ``HH:MM``."""
    text = text.strip()
    try:
        return datetime.strptime(text, "%H:%M").time()
    except ValueError:
        raise DataError(f"invalid time of day {text!r}, expected HH:MM") from None


def format_time_of_day(t):
    return f"{t.hour:02d}:{t.minute:02d}"


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def parse_csv(path, step_minutes=5):
    """Read and validate an irradiance CSV file.

    Rows must already be in timestamp order; out-of-order rows are reported,
    never re-sorted. An isolated missing sample inside a day is filled by
    linear interpolation of its neighbours, longer gaps are an error.

    Raises
    ------
    DataError
        On malformed rows (with line number), negative irradiance, duplicate
        or non-increasing timestamps, or a gap of two or more samples.
    """
    path = Path(path)
    if step_minutes <= 0:
        raise DataError("step_minutes must be positive")
    times = []
    values = []
    lines = []
    with path.open(newline="", encoding="utf-8") as fh:
        first = True
        reader = csv.reader(fh)
        for row in reader:
            lineno = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if first:
                first = False
                if len(row) == 2 and not _is_number(row[1].strip()):
                    continue
            if len(row) != 2:
                raise DataError(f"expected 2 fields, got {len(row)}", line=lineno)
            try:
                ts = datetime.strptime(row[0].strip(), TIMESTAMP_FORMAT)
            except ValueError:
                raise DataError(f"bad timestamp {row[0]!r}", line=lineno) from None
            try:
                value = float(row[1])
            except ValueError:
                raise DataError(f"bad irradiance {row[1]!r}", line=lineno) from None
            if not math.isfinite(value):
                raise DataError(f"non-finite irradiance {row[1]!r}", line=lineno)
            if value < 0:
                raise DataError(f"negative irradiance {value}", line=lineno)
            if times:
                if ts == times[-1]:
                    raise DataError(f"duplicate timestamp {row[0].strip()}", line=lineno)
                if ts < times[-1]:
                    raise DataError(
                        f"non-increasing timestamps: {row[0].strip()} follows "
                        f"{times[-1].strftime(TIMESTAMP_FORMAT)}",
                        line=lineno,
                    )
            times.append(ts)
            values.append(value)
            lines.append(lineno)
    if len(times) < 2:
        raise DataError(f"{path}: need at least 2 samples, found {len(times)}")
    return _fill_gaps(times, values, lines, step_minutes)


def _fill_gaps(times, values, lines, step_minutes):
    step = timedelta(minutes=step_minutes)
    out_t = [times[0]]
    out_v = [values[0]]
    filled = []
    for k in range(1, len(times)):
        prev, cur = times[k - 1], times[k]
        if prev.date() == cur.date():
            gap = cur - prev
            if gap == 2 * step:
                filled.append(len(out_t))
                out_t.append(prev + step)
                out_v.append(0.5 * (values[k - 1] + values[k]))
            elif gap > 2 * step and gap % step == timedelta(0):
                missing = gap // step - 1
                raise DataError(f"{missing} consecutive missing samples before {cur}", line=lines[k])
            elif gap != step:
                raise DataError(
                    f"irregular sampling interval {gap} (expected {step_minutes} min)", line=lines[k]
                )
        out_t.append(cur)
        out_v.append(values[k])
    return IrradianceSeries(
        np.array(out_t, dtype="datetime64[m]"), np.array(out_v), step_minutes, tuple(filled)
    )


def window_slots(window_start, window_end, slot_minutes):
    """Minute-of-day of every slot in ``[window_start, window_end)``."""
    lo, hi = time_to_minutes(window_start), time_to_minutes(window_end)
    if lo >= hi:
        raise DataError(f"empty window {format_time_of_day(window_start)}-{format_time_of_day(window_end)}")
    if (hi - lo) % slot_minutes:
        raise DataError(f"window length {hi - lo} min is not a multiple of {slot_minutes} min")
    return np.arange(lo, hi, slot_minutes)


def daily_windows(series, window_start, window_end):
    """Per-day irradiance restricted to a time-of-day window.

    Days that do not contain a sample at every slot of the window are
    skipped (with a log message).

    Returns
    -------
    list of (date, ndarray)
    """
    slots = window_slots(window_start, window_end, series.step_minutes)
    out = []
    for day, (minutes, values) in series.days().items():
        idx = np.searchsorted(minutes, slots)
        ok = np.all(idx < len(minutes)) and np.array_equal(minutes[np.minimum(idx, len(minutes) - 1)], slots)
        if not ok:
            logger.info("skipping %s: does not cover the window", day)
            continue
        out.append((day, values[idx]))
    return out


def representative_day(series, window_start, window_end):
    """Average irradiance per time-of-day slot over all complete days."""
    days = daily_windows(series, window_start, window_end)
    if not days:
        raise DataError("no day in the series covers the requested window")
    stacked = np.vstack([v for _, v in days])
    return RepresentativeDay(
        slot_minutes=series.step_minutes,
        values=stacked.mean(axis=0),
        day_count=len(days),
        window_start=window_start,
    )
