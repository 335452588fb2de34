"""Multiple-segment Markov chain fitting and synthetic state generation.

Slot ``k`` of a plan starts at ``window_start + k * slot_minutes``. The
transition from slot ``k`` to ``k + 1`` belongs to the segment containing
slot ``k``, both when fitting and when generating, so the step out of the
last slot of a segment uses that segment's matrix.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from datetime import time

import numpy as np

from . import kernels
from .discretize import DEFAULT_THRESHOLDS, SolarState, StateSequence, ThresholdConfig
from .errors import DataError
from .ingest import format_time_of_day, parse_time_of_day, time_to_minutes
from .markov import (
    N_STATES,
    argmax_state,
    check_distribution,
    check_transition_matrix,
    count_transitions,
    cumulative_rows,
    is_degenerate,
    one_hot,
    propagate,
    to_probabilities,
)

CARRY_MODES = ("distribution", "state")


@dataclass(frozen=True)
class Segment:
    start: time
    end: time
    slots: int


@dataclass(frozen=True)
class SegmentationPlan:
    """Contiguous time-of-day segments sharing one slot length."""

    segments: tuple
    slot_minutes: int = 5

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a plan needs at least one segment")
        if self.slot_minutes <= 0:
            raise ValueError("slot_minutes must be positive")
        for a, b in zip(segs, segs[1:]):
            if a.end != b.start:
                raise ValueError(f"segments are not contiguous at {format_time_of_day(a.end)}")
        for s in segs:
            span = time_to_minutes(s.end) - time_to_minutes(s.start)
            if span <= 0:
                raise ValueError(f"segment {format_time_of_day(s.start)} must end after it starts")
            if span % self.slot_minutes or span // self.slot_minutes != s.slots:
                raise ValueError(
                    f"segment {format_time_of_day(s.start)}-{format_time_of_day(s.end)} "
                    f"does not hold {s.slots} slots of {self.slot_minutes} min"
                )
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_boundaries(cls, boundaries, slot_minutes=5):
        """Build a plan from ``[t0, t1, ..., tS]`` (``time`` or ``"HH:MM"``)."""
        ts = [parse_time_of_day(b) if isinstance(b, str) else b for b in boundaries]
        if len(ts) < 2:
            raise ValueError("need at least two boundaries")
        segs = []
        for a, b in zip(ts, ts[1:]):
            span = time_to_minutes(b) - time_to_minutes(a)
            segs.append(Segment(a, b, span // slot_minutes if span > 0 else 0))
        return cls(tuple(segs), slot_minutes)

    @property
    def boundaries(self):
        return [s.start for s in self.segments] + [self.segments[-1].end]

    @property
    def window_start(self):
        return self.segments[0].start

    @property
    def window_end(self):
        return self.segments[-1].end

    @property
    def total_slots(self):
        return sum(s.slots for s in self.segments)

    def slot_ranges(self):
        """Half-open ``(lo, hi)`` slot index range of every segment."""
        edges = np.concatenate([[0], np.cumsum([s.slots for s in self.segments])])
        return [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:])]

    def segment_of_slot(self):
        return np.repeat(np.arange(len(self.segments), dtype=np.intp), [s.slots for s in self.segments])

    def to_dict(self):
        return {
            "slot_minutes": self.slot_minutes,
            "boundaries": [format_time_of_day(t) for t in self.boundaries],
        }


PLAN_PRESETS = {
    "summer-paper": ("04:30", "07:30", "10:30", "13:30", "16:30", "19:30"),
    "winter-paper": ("06:00", "09:00", "12:00", "15:00", "18:00"),
}


def plan_preset(name, slot_minutes=5):
    try:
        bounds = PLAN_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown plan preset {name!r}; choose from {sorted(PLAN_PRESETS)}") from None
    return SegmentationPlan.from_boundaries(bounds, slot_minutes)


@dataclass(frozen=True, eq=False)
class SegmentedModel:
    """One transition matrix per plan segment.

    ``counts`` holds the per-segment count matrices when the model was
    fitted; ``empty_segments`` lists segments that saw no transition.
    """

    plan: SegmentationPlan
    matrices: tuple
    thresholds: object = DEFAULT_THRESHOLDS
    counts: tuple = ()
    empty_segments: tuple = ()

    def __post_init__(self):
        mats = tuple(check_transition_matrix(P).copy() for P in self.matrices)
        if len(mats) != len(self.plan.segments):
            raise ValueError(f"{len(mats)} matrices for {len(self.plan.segments)} segments")
        for P in mats:
            P.flags.writeable = False
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "counts", tuple(np.asarray(c, dtype=np.int64) for c in self.counts))

    @property
    def total_counts(self):
        if not self.counts:
            raise ValueError("model carries no count matrices")
        return sum(self.counts)

    def to_dict(self):
        segments = []
        for s, (seg, P) in enumerate(zip(self.plan.segments, self.matrices)):
            entry = {
                "start": format_time_of_day(seg.start),
                "end": format_time_of_day(seg.end),
                "slots": seg.slots,
                "matrix": P.tolist(),
                "empty": s in self.empty_segments,
            }
            if self.counts:
                entry["counts"] = self.counts[s].tolist()
            segments.append(entry)
        t = self.thresholds
        return {
            "slot_minutes": self.plan.slot_minutes,
            "thresholds": {"lr": t.lr, "mr": t.mr, "max": t.max},
            "segments": segments,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            segs = d["segments"]
            plan = SegmentationPlan.from_boundaries(
                [segs[0]["start"]] + [s["end"] for s in segs], int(d["slot_minutes"])
            )
            thresholds = ThresholdConfig(**d["thresholds"])
            mats = tuple(np.array(s["matrix"], dtype=np.float64) for s in segs)
            counts = ()
            if all("counts" in s for s in segs):
                counts = tuple(np.array(s["counts"], dtype=np.int64) for s in segs)
            empty = tuple(i for i, s in enumerate(segs) if s.get("empty"))
        except (KeyError, IndexError, TypeError) as exc:
            raise DataError(f"malformed model description: {exc!r}") from None
        return cls(plan, mats, thresholds, counts, empty)


def fit_segmented(days, plan, thresholds=DEFAULT_THRESHOLDS, smoothing=0.0):
    """Estimate one transition matrix per segment from day-long state sequences.

    Transitions are counted per day and summed; none spans two days.

    Raises
    ------
    DataError
        If a day does not match the plan's slot grid.
    """
    days = list(days)
    if not days:
        raise DataError("no days to fit")
    for n, day in enumerate(days):
        if not isinstance(day, StateSequence):
            day = StateSequence(day, plan.slot_minutes, plan.window_start)
            days[n] = day
        if (
            len(day) != plan.total_slots
            or day.slot_minutes != plan.slot_minutes
            or day.window_start != plan.window_start
        ):
            raise DataError(
                f"day {n} ({len(day)} slots of {day.slot_minutes} min from "
                f"{format_time_of_day(day.window_start)}) does not cover the plan "
                f"({plan.total_slots} slots of {plan.slot_minutes} min from "
                f"{format_time_of_day(plan.window_start)})"
            )
    counts = []
    empty = []
    for s, (lo, hi) in enumerate(plan.slot_ranges()):
        c = np.zeros((N_STATES, N_STATES), dtype=np.int64)
        if len(days[0]) >= 2:
            for day in days:
                c += count_transitions(day, lo, hi)
        if c.sum() == 0:
            empty.append(s)
        counts.append(c)
    if empty:
        warnings.warn(f"segments {empty} contain no transitions; their matrices are all zero", stacklevel=2)
    mats = tuple(to_probabilities(c, smoothing) for c in counts)
    return SegmentedModel(plan, mats, thresholds, tuple(counts), tuple(empty))


@dataclass(frozen=True, eq=False)
class GenerationResult:
    states: StateSequence
    distributions: np.ndarray
    fallback_slots: tuple = field(default=())

    CSV_HEADER = ("time_of_day", "state_code", "state_name", "w_L", "w_M", "w_H", "w_VH", "fallback")

    def rows(self):
        fallback = set(self.fallback_slots)
        for k, (t, code) in enumerate(zip(self.states.times(), self.states.codes)):
            w = self.distributions[k]
            yield [t, int(code), SolarState(int(code)).display_name, *(f"{v:.10g}" for v in w), int(k in fallback)]

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.CSV_HEADER)
            writer.writerows(self.rows())


def _initial_vector(initial):
    if isinstance(initial, (SolarState, int, np.integer)):
        return one_hot(SolarState(int(initial)))
    return check_distribution(initial).copy()


def generate(model, initial, carry="distribution", strict_alg1=False):
    """Deterministic argmax trajectory of a segmented model.

    Parameters
    ----------
    model : SegmentedModel
    initial : array-like or SolarState
        Distribution of the first slot (a state means its one-hot vector).
    carry : {"distribution", "state"}
        What crosses a segment boundary: the propagated distribution, or the
        one-hot vector of the last emitted state.
    strict_alg1 : bool
        Use the literal power-form update instead: the first slot of a
        segment repeats the carried vector and slot ``t`` of a segment
        (1-based) is ``x[t-1] @ P**t``. Default is the single-step update
        ``x[k] = x[k-1] @ P``.

    Notes
    -----
    When propagation loses all mass (only dead rows were occupied), the
    previous state is held, its one-hot vector becomes the distribution and
    the slot is listed in ``fallback_slots``.
    """
    if carry not in CARRY_MODES:
        raise ValueError(f"carry must be one of {CARRY_MODES}, got {carry!r}")
    x = _initial_vector(initial)
    plan = model.plan
    n = plan.total_slots
    seg = plan.segment_of_slot()
    dists = np.zeros((n, N_STATES))
    codes = np.zeros(n, dtype=np.int64)
    fallback = []

    dists[0] = x
    codes[0] = argmax_state(x)
    if strict_alg1:
        local = np.concatenate([np.arange(1, s.slots + 1) for s in plan.segments])
    for k in range(1, n):
        boundary = seg[k] != seg[k - 1]
        prev = dists[k - 1]
        if boundary and carry == "state":
            prev = one_hot(codes[k - 1])
        if strict_alg1:
            if boundary:
                y = prev.copy()
            else:
                y = propagate(prev, np.linalg.matrix_power(model.matrices[seg[k]], int(local[k])))
        else:
            y = propagate(prev, model.matrices[seg[k - 1]])
        if is_degenerate(y):
            y = one_hot(codes[k - 1])
            fallback.append(k)
        dists[k] = y
        codes[k] = argmax_state(y)

    states = StateSequence(codes, plan.slot_minutes, plan.window_start)
    dists.flags.writeable = False
    return GenerationResult(states, dists, tuple(fallback))


def sample(model, initial, rng_seed):
    """Monte-Carlo state path through the segmented model.

    Each next state is drawn from the current state's row of the active
    segment's matrix; a dead row holds the state. Identical seeds give
    identical paths.
    """
    initial = SolarState(int(initial)) if not isinstance(initial, str) else SolarState.parse(initial)
    plan = model.plan
    n = plan.total_slots
    rng = np.random.default_rng(rng_seed)
    cum = cumulative_rows(model.matrices)
    step_segment = np.ascontiguousarray(plan.segment_of_slot()[:-1], dtype=np.intp)
    uniforms = rng.random(n - 1)
    codes = kernels.sample_path(cum, step_segment, uniforms, int(initial))
    return StateSequence(codes, plan.slot_minutes, plan.window_start)

