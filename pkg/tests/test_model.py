"""Core model: predictive likelihoods, priors, posteriors, partition score."""

import numpy as np
import pytest

from binclust.model import (
    NEW_CLUSTER,
    UNASSIGNED,
    BetaPosterior,
    BinaryMatrix,
    ClusterState,
    Hyperparams,
    assignment_distribution,
    beta_posterior,
    crp_log_prior,
    default_hyperparams,
    joint_log_score,
    log_predictive,
)

from _oracles import (
    log_ratio_by_betaln,
    predictive_by_quadrature,
    seating_weights_by_raw_beta,
)


def _uniform_hyper(d, alpha=1.0):
    return Hyperparams(a=np.ones(d), b=np.ones(d), alpha=alpha)


class TestBinaryMatrix:
    def test_valid_matrix(self):
        m = BinaryMatrix([[0, 1], [1, 0]])
        assert m.n_objects == 2
        assert m.n_features == 2
        assert np.array_equal(m.column_sums(), [1, 1])

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError, match="row 1, column 0"):
            BinaryMatrix([[0, 1], [2, 0]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            BinaryMatrix(np.zeros((0, 3)))

    def test_rejects_wrong_ndim(self):
        with pytest.raises(ValueError):
            BinaryMatrix([0, 1, 1])

    def test_values_read_only(self):
        m = BinaryMatrix([[0, 1]])
        with pytest.raises(ValueError):
            m.values[0, 0] = 1


class TestHyperparams:
    def test_rejects_nonpositive_shapes(self):
        with pytest.raises(ValueError):
            Hyperparams(a=np.array([1.0, 0.0]), b=np.ones(2), alpha=1.0)

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            Hyperparams(a=np.ones(2), b=np.ones(2), alpha=0.0)

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            Hyperparams(a=np.ones(2), b=np.ones(3), alpha=1.0)


class TestDefaultHyperparams:
    def test_always_present_feature_gets_b_one(self):
        data = BinaryMatrix(np.ones((7, 1), dtype=np.uint8))
        hyper = default_hyperparams(data)
        assert hyper.b[0] == 1.0

    def test_sparse_column_arithmetic(self):
        values = np.zeros((200, 1), dtype=np.uint8)
        values[:20, 0] = 1
        hyper = default_hyperparams(BinaryMatrix(values))
        assert hyper.b[0] == 10.0

    def test_all_zero_column_clamped(self):
        n = 31
        data = BinaryMatrix(np.zeros((n, 2), dtype=np.uint8))
        hyper = default_hyperparams(data)
        assert np.all(hyper.b == n)
        # the clamp keeps the sparse-feature intent: tiny prior mean
        assert np.allclose(hyper.a / (hyper.a + hyper.b), 1.0 / (1.0 + n))

    def test_a_is_all_ones_and_alpha_passes_through(self):
        data = BinaryMatrix([[0, 1, 1]])
        hyper = default_hyperparams(data, alpha=2.5)
        assert np.all(hyper.a == 1.0)
        assert hyper.alpha == 2.5

    def test_b_within_clamp_range_random(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(1, 40))
            d = int(rng.integers(1, 30))
            data = BinaryMatrix((rng.random((n, d)) < rng.random()).astype(np.uint8))
            hyper = default_hyperparams(data)
            assert np.all(hyper.b >= 1.0) and np.all(hyper.b <= n)


class TestLogPredictive:
    def test_new_cluster_single_feature(self):
        hyper = _uniform_hyper(1)
        assert log_predictive(np.array([1]), None, hyper) == pytest.approx(np.log(0.5), abs=1e-12)

    def test_existing_cluster_single_feature(self):
        hyper = Hyperparams(a=np.array([1.0]), b=np.array([3.0]), alpha=1.0)
        got = log_predictive(np.array([1]), (4, np.array([2])), hyper)
        assert got == pytest.approx(np.log(0.375), abs=1e-12)

    def test_features_contribute_independently(self):
        hyper = Hyperparams(a=np.array([1.0, 2.0]), b=np.array([3.0, 0.5]), alpha=1.0)
        counts = (5, np.array([2, 4]))
        joint = log_predictive(np.array([1, 0]), counts, hyper)
        first = log_predictive(
            np.array([1]), (5, np.array([2])), Hyperparams(a=[1.0], b=[3.0], alpha=1.0)
        )
        second = log_predictive(
            np.array([0]), (5, np.array([4])), Hyperparams(a=[2.0], b=[0.5], alpha=1.0)
        )
        assert joint == pytest.approx(first + second, abs=1e-12)

    def test_closed_form_matches_log_gamma(self):
        shapes = [0.5, 1.0, 2.0, 10.0]
        for a in shapes:
            for b in shapes:
                hyper = Hyperparams(a=np.array([a]), b=np.array([b]), alpha=1.0)
                for size in range(0, 51, 7):
                    for fcount in range(0, size + 1, 3):
                        for x in (0, 1):
                            got = log_predictive(np.array([x]), (size, np.array([fcount])), hyper)
                            want = log_ratio_by_betaln(a, b, size, fcount, x)
                            assert abs(got - want) < 1e-10

    def test_matches_quadrature(self):
        for a, b in [(1.0, 1.0), (0.5, 2.0), (1.0, 7.5)]:
            hyper = Hyperparams(a=np.array([a]), b=np.array([b]), alpha=1.0)
            for size in range(0, 11):
                for fcount in range(0, size + 1):
                    for x in (0, 1):
                        got = np.exp(log_predictive(np.array([x]), (size, np.array([fcount])), hyper))
                        want = predictive_by_quadrature(a, b, size, fcount, x)
                        assert abs(got - want) < 1e-6

    def test_rejects_inconsistent_counts(self):
        hyper = _uniform_hyper(1)
        with pytest.raises(ValueError, match="inconsistent"):
            log_predictive(np.array([1]), (2, np.array([3])), hyper)

    def test_rejects_wrong_row_length(self):
        with pytest.raises(ValueError):
            log_predictive(np.array([1, 0]), None, _uniform_hyper(3))


class TestCrpLogPrior:
    def test_two_objects_symmetric(self):
        assert crp_log_prior(0, [1], 2, 1.0) == pytest.approx(np.log(0.5))
        assert crp_log_prior(NEW_CLUSTER, [1], 2, 1.0) == pytest.approx(np.log(0.5))

    def test_three_objects(self):
        assert crp_log_prior(0, [2], 3, 1.0) == pytest.approx(np.log(2.0 / 3.0))
        assert crp_log_prior(NEW_CLUSTER, [2], 3, 1.0) == pytest.approx(np.log(1.0 / 3.0))

    def test_options_normalize(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            k = int(rng.integers(1, 8))
            sizes = rng.integers(1, 9, size=k)
            n_total = int(sizes.sum()) + 1
            alpha = float(rng.uniform(0.1, 5.0))
            logs = [crp_log_prior(j, sizes, n_total, alpha) for j in range(k)]
            logs.append(crp_log_prior(NEW_CLUSTER, sizes, n_total, alpha))
            assert abs(np.exp(logs).sum() - 1.0) < 1e-12

    def test_rejects_bad_size_sum(self):
        with pytest.raises(ValueError):
            crp_log_prior(0, [2], 2, 1.0)

    def test_rejects_empty_existing_cluster(self):
        with pytest.raises(ValueError, match="empty cluster"):
            crp_log_prior(1, [2, 0], 3, 1.0)

    def test_rejects_unknown_option(self):
        with pytest.raises(ValueError):
            crp_log_prior("brand-new", [2], 3, 1.0)


def _detached_state(data, labels, i):
    """State over all objects except ``i`` (labels[i] ignored)."""
    keep = np.arange(data.n_objects) != i
    sub = BinaryMatrix(np.asarray(data.values[keep]))
    partial = ClusterState.from_assignments(sub, np.asarray(labels)[keep])
    assignments = np.full(data.n_objects, UNASSIGNED, dtype=np.int64)
    assignments[keep] = partial.assignments
    return ClusterState(assignments, partial.sizes, partial.feature_counts)


class TestAssignmentDistribution:
    def test_unit_temperature_matches_raw_beta_oracle(self):
        data = BinaryMatrix([[1, 0], [0, 1], [1, 1]])
        hyper = _uniform_hyper(2)
        state = _detached_state(data, [0, 1, 0], 2)
        got = assignment_distribution(2, state, data, hyper, temperature=1.0)
        want = seating_weights_by_raw_beta(
            data.values[2], state.sizes, state.feature_counts, hyper.a, hyper.b, hyper.alpha
        )
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_unit_temperature_equals_prior_times_predictive(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(3, 12))
            d = int(rng.integers(1, 6))
            data = BinaryMatrix(rng.integers(0, 2, size=(n, d)).astype(np.uint8))
            labels = rng.integers(0, max(1, n // 2), size=n)
            i = int(rng.integers(n))
            state = _detached_state(data, labels, i)
            hyper = Hyperparams(
                a=rng.uniform(0.3, 3.0, size=d), b=rng.uniform(0.3, 3.0, size=d), alpha=float(rng.uniform(0.2, 4.0))
            )
            got = assignment_distribution(i, state, data, hyper, temperature=1.0)
            logs = [
                crp_log_prior(k, state.sizes, n, hyper.alpha)
                + log_predictive(data.values[i], (state.sizes[k], state.feature_counts[k]), hyper)
                for k in range(state.n_clusters)
            ]
            logs.append(
                crp_log_prior(NEW_CLUSTER, state.sizes, n, hyper.alpha)
                + log_predictive(data.values[i], None, hyper)
            )
            want = np.exp(logs)
            want /= want.sum()
            np.testing.assert_allclose(got, want, atol=1e-12)

    def test_identical_clusters_get_equal_probability(self):
        data = BinaryMatrix([[1, 0], [1, 0], [1, 0], [1, 0], [0, 1]])
        state = _detached_state(data, [0, 0, 1, 1, 2], 4)
        probs = assignment_distribution(4, state, data, _uniform_hyper(2), temperature=0.7)
        assert probs[0] == pytest.approx(probs[1], abs=1e-15)

    def test_probabilities_form_distribution(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(2, 10))
            d = int(rng.integers(1, 5))
            data = BinaryMatrix(rng.integers(0, 2, size=(n, d)).astype(np.uint8))
            labels = rng.integers(0, n, size=n)
            i = int(rng.integers(n))
            state = _detached_state(data, labels, i)
            temperature = float(rng.uniform(0.05, 3.0))
            probs = assignment_distribution(i, state, data, _uniform_hyper(d), temperature)
            assert abs(probs.sum() - 1.0) < 1e-12
            assert np.all(probs >= 0.0) and np.all(probs <= 1.0)

    def test_cold_limit_concentrates_on_best_likelihood(self):
        data = BinaryMatrix([[1, 1, 1, 0], [1, 1, 1, 0], [0, 0, 0, 1], [1, 1, 1, 0]])
        hyper = _uniform_hyper(4)
        state = _detached_state(data, [0, 0, 1, 0], 3)
        probs = assignment_distribution(3, state, data, hyper, temperature=1e-6)
        logliks = [
            log_predictive(data.values[3], (state.sizes[k], state.feature_counts[k]), hyper)
            for k in range(state.n_clusters)
        ]
        logliks.append(log_predictive(data.values[3], None, hyper))
        best = int(np.argmax(logliks))
        gap = np.sort(logliks)[-1] - np.sort(logliks)[-2]
        assert gap > 0.01
        assert probs[best] > 1.0 - 1e-6

    def test_rejects_nonpositive_temperature(self):
        data = BinaryMatrix([[1], [0]])
        state = _detached_state(data, [0, 0], 1)
        with pytest.raises(ValueError):
            assignment_distribution(1, state, data, _uniform_hyper(1), temperature=0.0)

    def test_rejects_attached_object(self):
        data = BinaryMatrix([[1], [0]])
        state = ClusterState.from_assignments(data, [0, 0])
        with pytest.raises(ValueError):
            assignment_distribution(0, state, data, _uniform_hyper(1), temperature=1.0)


class TestBetaPosterior:
    def test_no_data_returns_prior(self):
        hyper = Hyperparams(a=np.array([1.5]), b=np.array([2.5]), alpha=1.0)
        post = beta_posterior(0, (0, 0), hyper)
        assert post == BetaPosterior(1.5, 2.5)

    def test_conjugate_update(self):
        hyper = Hyperparams(a=np.array([1.0]), b=np.array([3.0]), alpha=1.0)
        assert beta_posterior(0, (4, 2), hyper) == BetaPosterior(3.0, 5.0)

    def test_feature_always_present(self):
        hyper = Hyperparams(a=np.array([1.0]), b=np.array([3.0]), alpha=1.0)
        post = beta_posterior(0, (6, 6), hyper)
        assert post == BetaPosterior(7.0, 3.0)

    def test_counts_only_add(self):
        hyper = Hyperparams(a=np.array([0.5]), b=np.array([0.5]), alpha=1.0)
        rng = np.random.default_rng(2)
        for _ in range(100):
            size = int(rng.integers(0, 20))
            fcount = int(rng.integers(0, size + 1))
            post = beta_posterior(0, (size, fcount), hyper)
            assert post.a_post >= 0.5 and post.b_post >= 0.5

    def test_rejects_inconsistent_counts(self):
        with pytest.raises(ValueError):
            beta_posterior(0, (2, 3), _uniform_hyper(1))


class TestJointLogScore:
    def test_single_object(self):
        data = BinaryMatrix([[1]])
        state = ClusterState.from_assignments(data, [0])
        got = joint_log_score(state, data, _uniform_hyper(1))
        assert got == pytest.approx(np.log(0.5), abs=1e-12)

    def test_identical_pair_prefers_one_cluster(self):
        data = BinaryMatrix([[1, 0], [1, 0]])
        hyper = _uniform_hyper(2)
        together = joint_log_score(ClusterState.from_assignments(data, [0, 0]), data, hyper)
        apart = joint_log_score(ClusterState.from_assignments(data, [0, 1]), data, hyper)
        assert together > apart

    def test_relabeling_is_exactly_invariant(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(2, 12))
            d = int(rng.integers(1, 6))
            data = BinaryMatrix(rng.integers(0, 2, size=(n, d)).astype(np.uint8))
            labels = rng.integers(0, n, size=n)
            hyper = Hyperparams(
                a=rng.uniform(0.3, 3.0, size=d), b=rng.uniform(0.3, 3.0, size=d), alpha=1.3
            )
            base = ClusterState.from_assignments(data, labels)
            score = joint_log_score(base, data, hyper)
            perm = rng.permutation(base.n_clusters)
            relabeled = ClusterState.from_assignments(data, perm[base.assignments])
            assert joint_log_score(relabeled, data, hyper) == score

    def test_rejects_incomplete_state(self):
        data = BinaryMatrix([[1], [0]])
        state = _detached_state(data, [0, 0], 1)
        with pytest.raises(ValueError):
            joint_log_score(state, data, _uniform_hyper(1))


class TestClusterState:
    def test_from_assignments_compacts_labels(self):
        data = BinaryMatrix([[1, 0], [0, 1], [1, 1]])
        state = ClusterState.from_assignments(data, [5, 9, 5])
        assert state.n_clusters == 2
        assert np.array_equal(state.assignments, [0, 1, 0])
        assert np.array_equal(state.sizes, [2, 1])
        assert np.array_equal(state.feature_counts, [[2, 1], [0, 1]])

    def test_check_consistency_passes_on_recount(self):
        rng = np.random.default_rng(1)
        data = BinaryMatrix(rng.integers(0, 2, size=(20, 5)).astype(np.uint8))
        state = ClusterState.from_assignments(data, rng.integers(0, 4, size=20))
        state.check_consistency(data)

    def test_check_consistency_detects_corruption(self):
        data = BinaryMatrix([[1, 0], [0, 1]])
        state = ClusterState.from_assignments(data, [0, 1])
        state.feature_counts[0, 0] += 1
        with pytest.raises(ValueError):
            state.check_consistency(data)
