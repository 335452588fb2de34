"""State-dependency (likelihood-ratio chi-square) and temporal stationarity tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .markov import N_STATES, check_transition_matrix, to_probabilities

_EPS = 1e-15
_FPMIN = 1e-300
_MAX_ITER = 10_000


def _counts(counts):
    counts = np.asarray(counts, dtype=np.float64)
    if counts.shape != (N_STATES, N_STATES) or np.any(counts < 0):
        raise ValueError("counts must be a non-negative 4x4 matrix")
    if counts.sum() <= 0:
        raise DataError("count matrix is empty")
    return counts


def marginals(counts):
    """Column mass of the count matrix over the grand total."""
    counts = _counts(counts)
    return counts.sum(axis=0) / counts.sum()


def alpha_statistic(counts):
    """Likelihood-ratio statistic ``2 * sum n_ij ln(p_ij / p_j)``.

    Cells with ``n_ij == 0`` contribute nothing. Whenever ``n_ij > 0`` both
    ``p_ij`` and ``p_j`` are positive, so the sum is always finite.
    """
    counts = _counts(counts)
    P = to_probabilities(counts)
    p = marginals(counts)
    i, j = np.nonzero(counts)
    return float(2.0 * np.sum(counts[i, j] * np.log(P[i, j] / p[j])))


def _gamma_p_series(a, x):
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a, x):
    # modified Lentz evaluation
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a, x):
    """Upper regularised incomplete gamma function ``Q(a, x)``."""
    if a <= 0 or x < 0:
        raise ValueError("need a > 0 and x >= 0")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi2_sf(x, dof):
    """Upper-tail probability of the chi-square distribution."""
    if x <= 0:
        return 1.0
    return regularized_gamma_q(0.5 * dof, 0.5 * x)


def chi2_critical(dof, significance, tol=1e-8):
    """Upper-tail chi-square quantile: ``x`` with ``P(X > x) = significance``."""
    if int(dof) != dof or dof < 1:
        raise ValueError(f"dof must be a positive integer, got {dof}")
    if not 0 < significance < 1:
        raise ValueError(f"significance must lie in (0, 1), got {significance}")
    lo, hi = 0.0, float(dof)
    while chi2_sf(hi, dof) > significance:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if chi2_sf(mid, dof) > significance:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DependencyTestReport:
    alpha: float
    k: int
    dof: int
    significance: float
    critical_value: float
    reject_independence: bool
    counts: tuple = ()

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "k": self.k,
            "dof": self.dof,
            "significance": self.significance,
            "critical_value": self.critical_value,
            "reject_independence": self.reject_independence,
            "counts": [list(row) for row in self.counts],
            "total_transitions": int(sum(map(sum, self.counts))),
        }


def dependency_test(counts, significance=0.05):
    """Test whether successive states are independent.

    Rejecting independence supports modelling the data as a first-order
    Markov chain. The chi-square approximation is reported as-is even when
    cell counts are small.
    """
    counts = _counts(counts)
    alpha = alpha_statistic(counts)
    k = N_STATES
    dof = (k - 1) ** 2
    critical = chi2_critical(dof, significance)
    return DependencyTestReport(
        alpha=alpha,
        k=k,
        dof=dof,
        significance=float(significance),
        critical_value=critical,
        reject_independence=bool(alpha > critical),
        counts=tuple(tuple(int(v) for v in row) for row in counts),
    )


@dataclass(frozen=True, eq=False)
class StationarityReport:
    pairwise_distances: np.ndarray
    threshold: float
    stationary: bool

    def to_dict(self):
        return {
            "pairwise_distances": self.pairwise_distances.tolist(),
            "max_distance": float(self.pairwise_distances.max()),
            "threshold": self.threshold,
            "stationary": self.stationary,
        }


def stationarity_check(mats, threshold=0.1):
    """Compare segment matrices by max-abs elementwise distance.

    The chain is called stationary when every pair is within ``threshold``.
    """
    mats = [check_transition_matrix(P) for P in mats]
    if len(mats) < 2:
        raise ValueError("stationarity needs at least 2 matrices")
    n = len(mats)
    dist = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            dist[a, b] = dist[b, a] = np.abs(mats[a] - mats[b]).max()
    return StationarityReport(dist, float(threshold), bool(np.all(dist <= threshold)))
