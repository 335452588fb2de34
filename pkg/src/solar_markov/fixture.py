"""Synthetic summer month with known per-segment transition matrices.

Each day starts Low at 04:30 and follows ``FIXTURE_MATRICES`` through the
``summer-paper`` plan: a rise to VeryHigh before midday and a fall back to
Low in the evening. Irradiance for a state is drawn uniformly from a band
well inside that state's range under the default thresholds, so
discretization recovers the sampled states exactly. Outside the window the
irradiance is zero.

The bundled file ``data/summer_fixture.csv`` is ``write_fixture_csv`` with
the default arguments; regenerate it with ``python -m solar_markov.fixture``.
"""

from __future__ import annotations

import sys
from datetime import date, datetime, timedelta
from importlib import resources

import numpy as np

FIXTURE_SEED = 7
FIXTURE_DAYS = 31
FIXTURE_START = date(2013, 7, 1)
FIXTURE_PRESET = "summer-paper"
STEP_MINUTES = 5
WINDOW_START_MIN = 4 * 60 + 30
WINDOW_SLOTS = 180
SEGMENT_SLOTS = 36

# rows of unreachable states are zero
FIXTURE_MATRICES = (
    np.array([[0.93, 0.07, 0, 0], [0.02, 0.98, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    np.array([[0, 1, 0, 0], [0, 0.95, 0.05, 0], [0, 0, 0.93, 0.07], [0, 0, 0, 1]]),
    np.array([[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 1]]),
    np.array([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0.06, 0.94, 0], [0, 0, 0.04, 0.96]]),
    np.array([[1, 0, 0, 0], [0.08, 0.92, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]),
)

IRRADIANCE_BANDS = ((20.0, 180.0), (215.0, 435.0), (455.0, 495.0), (520.0, 900.0))


def sample_fixture_states(seed=FIXTURE_SEED, days=FIXTURE_DAYS):
    """State codes (1..4), one row of 180 window slots per day."""
    rng = np.random.default_rng(seed)
    paths = np.empty((days, WINDOW_SLOTS), dtype=np.int64)
    for d in range(days):
        cur = 0
        paths[d, 0] = 1
        for k in range(1, WINDOW_SLOTS):
            row = FIXTURE_MATRICES[(k - 1) // SEGMENT_SLOTS][cur]
            cur = int(rng.choice(4, p=row))
            paths[d, k] = cur + 1
    return paths, rng


def fixture_rows(seed=FIXTURE_SEED, days=FIXTURE_DAYS, start=FIXTURE_START):
    """Yield ``(timestamp string, irradiance)`` for every 5-minute sample."""
    paths, rng = sample_fixture_states(seed, days)
    per_day = 24 * 60 // STEP_MINUTES
    first_slot = WINDOW_START_MIN // STEP_MINUTES
    for d in range(days):
        day0 = datetime.combine(start + timedelta(days=d), datetime.min.time())
        for i in range(per_day):
            k = i - first_slot
            if 0 <= k < WINDOW_SLOTS:
                lo, hi = IRRADIANCE_BANDS[paths[d, k] - 1]
                value = round(float(rng.uniform(lo, hi)), 1)
            else:
                value = 0.0
            ts = day0 + timedelta(minutes=i * STEP_MINUTES)
            yield ts.strftime("%Y-%m-%dT%H:%M"), value


def write_fixture_csv(path, seed=FIXTURE_SEED, days=FIXTURE_DAYS, start=FIXTURE_START):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("timestamp,irradiance_wm2\n")
        for ts, value in fixture_rows(seed, days, start):
            fh.write(f"{ts},{value:.1f}\n")


def fixture_path():
    """Path of the bundled fixture CSV."""
    return resources.files("solar_markov") / "data" / "summer_fixture.csv"


if __name__ == "__main__":
    write_fixture_csv(sys.argv[1] if len(sys.argv) > 1 else fixture_path())
