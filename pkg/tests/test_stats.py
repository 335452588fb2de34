import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import integrate
from scipy import stats as sps

from solar_markov.errors import DataError
from solar_markov.markov import count_transitions, sample_chain
from solar_markov.stats import (
    alpha_statistic,
    chi2_critical,
    chi2_sf,
    dependency_test,
    marginals,
    regularized_gamma_q,
    stationarity_check,
)


def alpha_brute_force(counts):
    """Direct evaluation of 2 * sum n_ij ln(p_ij / p_j) with plain loops."""
    k = len(counts)
    total = sum(sum(row) for row in counts)
    col = [sum(counts[i][j] for i in range(k)) / total for j in range(k)]
    acc = 0.0
    for i in range(k):
        row_total = sum(counts[i])
        for j in range(k):
            n = counts[i][j]
            if n:
                acc += n * math.log((n / row_total) / col[j])
    return 2.0 * acc


def _embedded(entries):
    c = np.zeros((4, 4))
    for (i, j), v in entries.items():
        c[i, j] = v
    return c


class TestMarginals:
    def test_embedded_two_state(self):
        np.testing.assert_allclose(marginals(_embedded({(0, 0): 2, (1, 1): 2})), [0.5, 0.5, 0, 0])

    def test_single_transition(self):
        np.testing.assert_allclose(marginals(_embedded({(0, 1): 1})), [0, 1, 0, 0])

    def test_reference_counts(self, reference_counts):
        np.testing.assert_allclose(marginals(reference_counts), np.array([53, 40, 7, 80]) / 180)

    def test_empty(self):
        with pytest.raises(DataError):
            marginals(np.zeros((4, 4)))


class TestAlpha:
    def test_two_state_value(self):
        counts = _embedded({(0, 0): 2, (1, 1): 2})
        assert abs(alpha_statistic(counts) - 8 * math.log(2)) <= 1e-9
        assert abs(alpha_statistic(counts) - alpha_brute_force(counts.tolist())) <= 1e-9

    def test_identical_rows_give_zero(self):
        counts = np.outer([3, 1, 2, 5], [2, 1, 4, 3])
        assert abs(alpha_statistic(counts)) <= 1e-9

    def test_reference_counts_against_brute_force(self, reference_counts):
        assert alpha_statistic(reference_counts) == pytest.approx(alpha_brute_force(reference_counts.tolist()), abs=1e-9)

    @given(arrays(np.int64, (4, 4), elements=st.integers(0, 50)).filter(lambda c: c.sum() > 0))
    def test_non_negative_and_matches_oracle(self, counts):
        a = alpha_statistic(counts)
        assert a >= -1e-9
        assert a == pytest.approx(alpha_brute_force(counts.tolist()), abs=1e-8)

    @given(
        arrays(np.int64, (4,), elements=st.integers(1, 20)),
        arrays(np.int64, (4,), elements=st.integers(0, 20)).filter(lambda v: v.sum() > 0),
    )
    def test_zero_iff_rows_equal_marginal(self, row_totals, col):
        counts = np.outer(row_totals, col)
        assert abs(alpha_statistic(counts)) <= 1e-8
        bumped = counts.copy()
        bumped[0, np.argmax(col)] += 7
        bumped[1, np.argmin(col)] += 3
        assert alpha_statistic(bumped) > 1e-9


class TestChi2:
    def test_nine_dof_reference_value(self):
        assert abs(chi2_critical(9, 0.05) - 16.9189) <= 1e-3

    def test_two_dof_closed_form(self):
        assert abs(chi2_critical(2, 0.05) - (-2 * math.log(0.05))) <= 1e-6

    def test_one_dof_against_integrated_density(self):
        x = chi2_critical(1, 0.05)
        assert abs(x - 3.8415) <= 1e-3
        # quadrature of the density up to x must leave 5% in the tail
        density = lambda t: t ** -0.5 * math.exp(-t / 2) / math.sqrt(2 * math.pi)
        mass, _ = integrate.quad(density, 0, x)
        assert abs(mass - 0.95) <= 1e-7

    @pytest.mark.parametrize("dof", [1, 2, 3, 9, 16, 30, 64, 100])
    @pytest.mark.parametrize("sig", [0.001, 0.01, 0.05, 0.5, 0.95])
    def test_against_reference_quantiles(self, dof, sig):
        assert chi2_critical(dof, sig) == pytest.approx(sps.chi2.isf(sig, dof), abs=1e-6)

    @given(st.integers(1, 60), st.floats(0.01, 300))
    def test_sf_against_reference(self, dof, x):
        assert chi2_sf(x, dof) == pytest.approx(sps.chi2.sf(x, dof), abs=1e-10)

    @given(st.integers(1, 99), st.floats(0.001, 0.9))
    def test_monotone(self, dof, sig):
        assert chi2_critical(dof + 1, sig) > chi2_critical(dof, sig)
        assert chi2_critical(dof, sig) > chi2_critical(dof, min(sig * 1.1, 0.99))

    @pytest.mark.parametrize("dof, sig", [(0, 0.05), (2.5, 0.05), (3, 0.0), (3, 1.0)])
    def test_invalid(self, dof, sig):
        with pytest.raises(ValueError):
            chi2_critical(dof, sig)

    def test_gamma_q_edges(self):
        assert regularized_gamma_q(3.0, 0.0) == 1.0
        assert regularized_gamma_q(1.0, 2.0) == pytest.approx(math.exp(-2.0), abs=1e-14)


class TestDependencyTest:
    def test_report_fields(self, reference_counts):
        r = dependency_test(reference_counts, 0.05)
        assert r.k == 4 and r.dof == 9
        assert r.reject_independence == (r.alpha > r.critical_value)
        assert r.to_dict()["total_transitions"] == 180

    def test_published_alpha_rejects(self):
        # reported statistic for the summer data against chi2(9) at 5%
        assert 374.66 > chi2_critical(9, 0.05)

    def test_markov_data_rejects(self):
        P = np.array([[0.9, 0.1, 0, 0], [0.05, 0.9, 0.05, 0], [0, 0.05, 0.9, 0.05], [0, 0, 0.1, 0.9]])
        path = sample_chain(P, 1, 2000, np.random.default_rng(3))
        assert dependency_test(count_transitions(path)).reject_independence

    def test_iid_sequences_usually_accept(self):
        accepted = 0
        for seed in range(50):
            rng = np.random.default_rng(seed)
            path = rng.choice([1, 2, 3, 4], size=10_000, p=[0.3, 0.2, 0.1, 0.4])
            accepted += not dependency_test(count_transitions(path)).reject_independence
        assert accepted >= 45

    def test_iid_rejection_rate_matches_significance(self):
        rng = np.random.default_rng(2024)
        trials = 1000
        rejections = 0
        for _ in range(trials):
            path = rng.choice([1, 2, 3, 4], size=2000, p=[0.3, 0.2, 0.1, 0.4])
            rejections += dependency_test(count_transitions(path), 0.05).reject_independence
        assert abs(rejections / trials - 0.05) <= 0.03


class TestStationarity:
    def test_identical(self):
        r = stationarity_check([np.eye(4), np.eye(4)], 0.1)
        assert r.stationary and r.pairwise_distances.max() == 0

    def test_reference_segments_not_stationary(self, reference_segments):
        r = stationarity_check(reference_segments, 0.1)
        assert not r.stationary
        d = r.pairwise_distances
        assert np.allclose(d, d.T) and np.all(np.diag(d) == 0) and d.max() <= 1

    def test_identity_vs_second_segment(self, reference_segments):
        r = stationarity_check([np.eye(4), reference_segments[1]])
        assert r.pairwise_distances[0, 1] == pytest.approx(0.25)

    def test_needs_two(self):
        with pytest.raises(ValueError):
            stationarity_check([np.eye(4)])
