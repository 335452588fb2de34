"""Comparison of synthetic against observed state traces."""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass

import numpy as np

from .discretize import SolarState, StateSequence
from .errors import DataError, GridMismatchError
from .ingest import format_time_of_day, parse_time_of_day, time_to_minutes


def state_sigma(seq):
    """Population standard deviation of the state codes 1..4."""
    codes = seq.codes if isinstance(seq, StateSequence) else np.asarray(seq, dtype=np.float64)
    if len(codes) == 0:
        raise ValueError("state_sigma of an empty sequence")
    return float(np.std(codes))


@dataclass(frozen=True)
class EvaluationReport:
    sigma_real: float
    sigma_synth: float
    match_fraction: float
    length: int

    @property
    def sigma_gap(self):
        return abs(self.sigma_synth - self.sigma_real)

    def to_dict(self):
        return {**asdict(self), "sigma_gap": self.sigma_gap}


def _check_grid(real, synth):
    if len(real) != len(synth):
        raise GridMismatchError(f"trace lengths differ: {len(real)} vs {len(synth)}")
    if real.slot_minutes != synth.slot_minutes or real.window_start != synth.window_start:
        raise GridMismatchError(
            f"slot grids differ: {real.slot_minutes} min from {format_time_of_day(real.window_start)} "
            f"vs {synth.slot_minutes} min from {format_time_of_day(synth.window_start)}"
        )


def compare(real, synth):
    _check_grid(real, synth)
    return EvaluationReport(
        sigma_real=state_sigma(real),
        sigma_synth=state_sigma(synth),
        match_fraction=float(np.mean(real.codes == synth.codes)),
        length=len(real),
    )


def trace_diff(a, b):
    """Slot indices at which two equally gridded traces disagree."""
    _check_grid(a, b)
    return [int(k) for k in np.flatnonzero(a.codes != b.codes)]


def write_trace_csv(path, seq):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_of_day", "state_code", "state_name"])
        for t, code in zip(seq.times(), seq.codes):
            writer.writerow([t, int(code), SolarState(int(code)).display_name])


def read_trace_csv(path):
    """Read any CSV with ``time_of_day`` and ``state_code`` columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"time_of_day", "state_code"} <= set(reader.fieldnames):
            raise DataError(f"{path}: needs time_of_day and state_code columns")
        times, codes = [], []
        for row in reader:
            try:
                times.append(parse_time_of_day(row["time_of_day"]))
                codes.append(int(row["state_code"]))
            except (ValueError, TypeError):
                raise DataError(f"{path}: bad row {row}", line=reader.line_num) from None
    if not codes:
        raise DataError(f"{path}: empty trace")
    minutes = np.array([time_to_minutes(t) for t in times])
    if len(minutes) > 1:
        steps = np.diff(minutes)
        if steps[0] <= 0 or np.any(steps != steps[0]):
            raise DataError(f"{path}: time_of_day column is not a regular grid")
        slot = int(steps[0])
    else:
        slot = 5
    try:
        return StateSequence(np.array(codes), slot, times[0])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_overlay_csv(path, real, synth):
    """Two columns (time, state) per series, one row per slot."""
    _check_grid(real, synth)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["real_time", "real_state", "synthetic_time", "synthetic_state"])
        for t_r, c_r, t_s, c_s in zip(real.times(), real.codes, synth.times(), synth.codes):
            writer.writerow([t_r, int(c_r), t_s, int(c_s)])
