"""Four-level solar state space and threshold discretization."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import time

import numpy as np

from .ingest import format_time_of_day, minutes_to_time, time_to_minutes


class SolarState(enum.IntEnum):
    LOW = 1
    MEDIUM = 2
    HIGH = 3
    VERY_HIGH = 4

    @property
    def label(self):
        return _LABELS[self]

    @property
    def display_name(self):
        return _NAMES[self]

    @classmethod
    def parse(cls, text):
        """Accept a code (``"2"``), label (``"M"``) or name (``"Medium"``)."""
        key = str(text).strip().lower().replace("_", "").replace("-", "").replace(" ", "")
        try:
            return _LOOKUP[key]
        except KeyError:
            raise ValueError(f"unknown solar state {text!r}") from None


_LABELS = {SolarState.LOW: "L", SolarState.MEDIUM: "M", SolarState.HIGH: "H", SolarState.VERY_HIGH: "VH"}
_NAMES = {
    SolarState.LOW: "Low",
    SolarState.MEDIUM: "Medium",
    SolarState.HIGH: "High",
    SolarState.VERY_HIGH: "VeryHigh",
}
_LOOKUP = {}
for _s in SolarState:
    _LOOKUP[str(int(_s))] = _s
    _LOOKUP[_LABELS[_s].lower()] = _s
    _LOOKUP[_NAMES[_s].lower()] = _s

STATES = tuple(SolarState)


@dataclass(frozen=True)
class ThresholdConfig:
    """Upper bounds (inclusive) of the Low, Medium and High bands, in W/m^2."""

    lr: float
    mr: float
    max: float

    def __post_init__(self):
        if not (0 < self.lr < self.mr < self.max):
            raise ValueError(f"thresholds must satisfy 0 < lr < mr < max, got {self}")

    @property
    def edges(self):
        return np.array([self.lr, self.mr, self.max], dtype=np.float64)


DEFAULT_THRESHOLDS = ThresholdConfig(lr=200.0, mr=450.0, max=500.0)
THRESHOLD_PRESETS = {"default": DEFAULT_THRESHOLDS}


def classify(values, cfg=DEFAULT_THRESHOLDS):
    """Vectorised state codes (1..4) for an array of irradiance values.

    A value equal to a threshold belongs to the lower state.
    """
    values = np.asarray(values, dtype=np.float64)
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise ValueError("irradiance must be non-negative")
    return np.searchsorted(cfg.edges, values, side="left").astype(np.int64) + 1


def to_state(irradiance, cfg=DEFAULT_THRESHOLDS):
    return SolarState(int(classify([irradiance], cfg)[0]))


@dataclass(frozen=True, eq=False)
class StateSequence:
    """Solar states on a regular time-of-day grid.

    ``codes`` holds the integer state codes 1..4; slot ``k`` starts at
    ``window_start + k * slot_minutes``.
    """

    codes: np.ndarray
    slot_minutes: int = 5
    window_start: time = time(0, 0)

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64)
        if codes.ndim != 1 or len(codes) == 0:
            raise ValueError("a state sequence must be a non-empty 1-d array")
        if np.any((codes < 1) | (codes > 4)):
            raise ValueError("state codes must lie in 1..4")
        if self.slot_minutes <= 0:
            raise ValueError("slot_minutes must be positive")
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_states(cls, states, slot_minutes=5, window_start=time(0, 0)):
        codes = [SolarState.parse(s) if isinstance(s, str) else SolarState(s) for s in states]
        return cls(np.array(codes, dtype=np.int64), slot_minutes, window_start)

    def __len__(self):
        return len(self.codes)

    def __getitem__(self, k):
        return SolarState(int(self.codes[k]))

    def __eq__(self, other):
        if not isinstance(other, StateSequence):
            return NotImplemented
        return (
            self.slot_minutes == other.slot_minutes
            and self.window_start == other.window_start
            and np.array_equal(self.codes, other.codes)
        )

    @property
    def states(self):
        return [SolarState(int(c)) for c in self.codes]

    def slot_time(self, k):
        return minutes_to_time(time_to_minutes(self.window_start) + k * self.slot_minutes)

    def times(self):
        return [format_time_of_day(self.slot_time(k)) for k in range(len(self))]

    def same_grid(self, other):
        return (
            len(self) == len(other)
            and self.slot_minutes == other.slot_minutes
            and self.window_start == other.window_start
        )


def discretize_day(day, cfg=DEFAULT_THRESHOLDS):
    """Map each slot of a representative day to its solar state."""
    return StateSequence(classify(day.values, cfg), day.slot_minutes, day.window_start)


def discretize_days(days, slot_minutes, window_start, cfg=DEFAULT_THRESHOLDS):
    """Discretize ``(date, values)`` pairs from :func:`ingest.daily_windows`."""
    return [StateSequence(classify(values, cfg), slot_minutes, window_start) for _, values in days]
