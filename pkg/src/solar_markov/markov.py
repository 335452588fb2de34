"""Transition counting, normalisation and distribution propagation.

Matrices are plain ``(4, 4)`` numpy arrays indexed by ``code - 1``. A
probability row whose state was never observed as a transition source is
all-zero ("dead"); it is never smoothed unless asked for explicitly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import kernels
from .discretize import SolarState, StateSequence
from .errors import DataError, DegenerateDistributionError

N_STATES = 4
ROW_TOL = 1e-9


def _codes(seq):
    if isinstance(seq, StateSequence):
        return seq.codes
    codes = np.ascontiguousarray(seq, dtype=np.int64)
    if codes.ndim != 1 or np.any((codes < 1) | (codes > N_STATES)):
        raise ValueError("state codes must be a 1-d array of values in 1..4")
    return codes


def count_transitions(seq, start=0, stop=None):
    """Count adjacent-pair transitions ``n[i, j]`` in a state sequence.

    Only pairs whose source slot ``t`` satisfies ``start <= t < stop`` are
    counted, which is how segment attribution works.

    Raises
    ------
    DataError
        If the sequence has fewer than 2 states.
    """
    codes = _codes(seq)
    if len(codes) < 2:
        raise DataError("need at least 2 states to count transitions")
    if stop is None:
        stop = len(codes) - 1
    return kernels.count_pairs(codes, int(start), int(stop))


def pooled_counts(seqs):
    """Sum per-day transition counts; no transition spans two sequences."""
    total = np.zeros((N_STATES, N_STATES), dtype=np.int64)
    for seq in seqs:
        total += count_transitions(seq)
    return total


def to_probabilities(counts, smoothing=0.0):
    """Row-normalise a count matrix.

    Rows with zero total become all-zero. ``smoothing`` adds a pseudo-count
    to every cell first (off by default).
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.shape != (N_STATES, N_STATES) or np.any(counts < 0):
        raise ValueError("counts must be a non-negative 4x4 matrix")
    if smoothing < 0:
        raise ValueError("smoothing must be non-negative")
    counts = counts + smoothing
    totals = counts.sum(axis=1, keepdims=True)
    return np.divide(counts, totals, out=np.zeros_like(counts), where=totals > 0)


def dead_rows(P):
    return np.flatnonzero(~np.asarray(P).any(axis=1))


def check_transition_matrix(P):
    """Validate a 4x4 matrix whose rows are stochastic or all-zero."""
    P = np.asarray(P, dtype=np.float64)
    if P.shape != (N_STATES, N_STATES):
        raise ValueError(f"transition matrix must be 4x4, got {P.shape}")
    if np.any(P < 0) or np.any(P > 1):
        raise ValueError("transition probabilities must lie in [0, 1]")
    sums = P.sum(axis=1)
    live = P.any(axis=1)
    if np.any(np.abs(sums[live] - 1.0) > ROW_TOL):
        raise ValueError(f"live rows must sum to 1, got row sums {sums}")
    return P


def check_distribution(dist):
    dist = np.asarray(dist, dtype=np.float64)
    if dist.shape != (N_STATES,) or np.any(dist < 0) or np.any(~np.isfinite(dist)):
        raise ValueError("a state distribution is a length-4 non-negative vector")
    if not dist.any():
        raise DegenerateDistributionError("state distribution is all zero")
    if abs(dist.sum() - 1.0) > ROW_TOL:
        raise ValueError(f"state distribution must sum to 1, got {dist.sum()}")
    return dist


def one_hot(state):
    out = np.zeros(N_STATES)
    out[int(state) - 1] = 1.0
    return out


def is_degenerate(dist):
    return not np.asarray(dist).any()


def propagate(dist, P):
    """One step ``x P`` of a row distribution.

    An all-zero result means every bit of mass sat on dead rows; check it
    with :func:`is_degenerate`. Partial mass loss is renormalised.
    """
    out = np.asarray(dist, dtype=np.float64) @ np.asarray(P, dtype=np.float64)
    total = out.sum()
    if total > 0 and abs(total - 1.0) > ROW_TOL:
        out = out / total
    return out


def argmax_state(dist):
    """Most probable state; ties go to the lowest code."""
    dist = np.asarray(dist, dtype=np.float64)
    if not dist.any():
        raise DegenerateDistributionError("cannot take argmax of an all-zero distribution")
    return SolarState(int(np.argmax(dist)) + 1)


def cumulative_rows(matrices):
    """Stack matrices into a contiguous ``(S, 4, 4)`` cumulative-sum array."""
    stack = np.array([np.asarray(P, dtype=np.float64) for P in matrices])
    return np.ascontiguousarray(np.cumsum(stack, axis=2))


def sample_chain(P, initial, n_steps, rng):
    """Monte-Carlo path of ``n_steps`` states from a single matrix.

    Dead rows hold the current state.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    cum = cumulative_rows([check_transition_matrix(P)])
    step_segment = np.zeros(n_steps - 1, dtype=np.intp)
    uniforms = rng.random(n_steps - 1)
    return kernels.sample_path(cum, step_segment, uniforms, int(SolarState(int(initial))))


def write_matrix(path, M):
    """Write a 4x4 matrix as 4 lines of 4 whitespace-separated numbers."""
    M = np.asarray(M)
    if M.shape != (N_STATES, N_STATES):
        raise ValueError("matrix must be 4x4")
    fmt = "%d" if np.issubdtype(M.dtype, np.integer) else "%.10g"
    np.savetxt(Path(path), M, fmt=fmt)


def read_matrix(path):
    try:
        M = np.loadtxt(Path(path), dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    if M.shape != (N_STATES, N_STATES):
        raise DataError(f"{path}: expected a 4x4 matrix, got shape {M.shape}")
    return M
