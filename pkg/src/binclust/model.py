"""Collapsed Beta-Bernoulli mixture with a Dirichlet-process seating prior.

Pure numerical functions for clustering binary data: closed-form predictive
likelihoods with the per-feature Bernoulli rates integrated out, Chinese
restaurant process priors over cluster choices, conjugate Beta posterior
updates, tempered assignment distributions, and a joint partition score.

Everything in this module is a pure function of its inputs; nothing holds
shared mutable state.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

# Option sentinel for "open a brand-new cluster" in APIs that otherwise take
# an integer cluster index.  A string, not -1, so it can never collide with
# (negative) array indexing.
NEW_CLUSTER = "new"

# Label held by an object while it is detached from a ClusterState.
UNASSIGNED = -1


class BinaryMatrix:
    """An N x D matrix of {0,1} feature indicators, validated on construction.

    The underlying array is stored as read-only ``uint8``; rows are objects,
    columns are features.
    """

    def __init__(self, values):
        arr = np.asarray(values)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"matrix must have at least one row and one column, got shape {arr.shape}")
        mask = (arr == 0) | (arr == 1)
        if not mask.all():
            i, j = np.argwhere(~mask)[0]
            raise ValueError(f"non-binary entry {arr[i, j]!r} at row {i}, column {j}")
        self.values = np.ascontiguousarray(arr, dtype=np.uint8)
        self.values.setflags(write=False)

    @property
    def n_objects(self):
        return self.values.shape[0]

    @property
    def n_features(self):
        return self.values.shape[1]

    def column_sums(self):
        """Per-feature presence counts, length D."""
        return self.values.sum(axis=0, dtype=np.int64)

    def __repr__(self):
        return f"BinaryMatrix(n_objects={self.n_objects}, n_features={self.n_features})"


@dataclass
class Hyperparams:
    """Per-feature Beta shapes, shared across clusters, plus DP concentration.

    ``a[j]`` and ``b[j]`` are the presence/absence pseudo-counts of feature j.
    They apply to every cluster, including one that does not exist yet, which
    is what makes the new-cluster predictive well defined.
    """

    a: np.ndarray
    b: np.ndarray
    alpha: float

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.a.ndim != 1 or self.b.ndim != 1 or self.a.shape != self.b.shape:
            raise ValueError("a and b must be 1-d vectors of equal length")
        if not ((self.a > 0).all() and (self.b > 0).all()):
            raise ValueError("Beta shape parameters must be strictly positive")
        self.alpha = float(self.alpha)
        if not self.alpha > 0:
            raise ValueError("alpha must be strictly positive")

    @property
    def n_features(self):
        return self.a.shape[0]


@dataclass(frozen=True)
class BetaPosterior:
    """Posterior Beta shapes for one (feature, cluster) pair."""

    a_post: float
    b_post: float

    def __post_init__(self):
        if not (self.a_post > 0 and self.b_post > 0):
            raise ValueError("posterior shapes must be strictly positive")

    @property
    def mean(self):
        return self.a_post / (self.a_post + self.b_post)


class ClusterState:
    """Cluster labels plus the sufficient statistics the model depends on.

    ``assignments[i]`` is the label of object i (``UNASSIGNED`` while an
    object is temporarily detached during a Gibbs update), ``sizes[k]`` the
    cluster cardinality, and ``feature_counts[k, j]`` the number of members
    of cluster k with feature j present.  Labels stay compact: every value
    in {0, ..., n_clusters - 1} owns at least one object.
    """

    def __init__(self, assignments, sizes, feature_counts):
        self.assignments = np.asarray(assignments, dtype=np.int64)
        self.sizes = np.asarray(sizes, dtype=np.int64)
        self.feature_counts = np.asarray(feature_counts, dtype=np.int64)

    @property
    def n_clusters(self):
        return int(self.sizes.shape[0])

    @classmethod
    def from_assignments(cls, data, assignments):
        """Build a state from a full label vector by counting from scratch.

        Labels are compacted (relabeled to 0..K-1 preserving sorted order of
        the distinct input labels); every object must carry a label.
        """
        labels = np.asarray(assignments, dtype=np.int64)
        if labels.shape != (data.n_objects,):
            raise ValueError(f"expected {data.n_objects} labels, got shape {labels.shape}")
        if (labels < 0).any():
            raise ValueError("all objects must be assigned (labels >= 0)")
        _, compact = np.unique(labels, return_inverse=True)
        compact = compact.astype(np.int64)
        k = int(compact.max()) + 1
        sizes = np.bincount(compact, minlength=k).astype(np.int64)
        counts = np.zeros((k, data.n_features), dtype=np.int64)
        np.add.at(counts, compact, data.values.astype(np.int64))
        return cls(compact, sizes, counts)

    def copy(self):
        return ClusterState(self.assignments.copy(), self.sizes.copy(), self.feature_counts.copy())

    def check_consistency(self, data):
        """Verify every invariant against a from-scratch recount; raise on mismatch.

        Intended for tests and debugging, not for the sampling hot path.
        """
        assigned = self.assignments != UNASSIGNED
        if (self.assignments[assigned] >= self.n_clusters).any():
            raise ValueError("assignment label out of range")
        if self.sizes.sum() != assigned.sum():
            raise ValueError("cluster sizes do not sum to the number of assigned objects")
        if (self.sizes < 1).any():
            raise ValueError("empty cluster present; labels must be compact")
        sizes = np.bincount(self.assignments[assigned], minlength=self.n_clusters)
        if not np.array_equal(sizes, self.sizes):
            raise ValueError("sizes disagree with a recount over assignments")
        counts = np.zeros((self.n_clusters, data.n_features), dtype=np.int64)
        np.add.at(counts, self.assignments[assigned], data.values[assigned].astype(np.int64))
        if not np.array_equal(counts, self.feature_counts):
            raise ValueError("feature counts disagree with a recount over assignments")
        if (self.feature_counts < 0).any() or (self.feature_counts > self.sizes[:, None]).any():
            raise ValueError("feature counts outside [0, cluster size]")


def default_hyperparams(data, alpha=1.0):
    """Unit presence shapes and absence shapes estimated from column sparsity.

    ``a_j = 1`` for every feature and ``b_j = N / column_sum_j``, clamped to
    [1, N], so the prior mean ``a_j / (a_j + b_j)`` tracks the empirical
    frequency of feature j.  An all-zero column lands on the sparse end of
    the clamp (prior mean 1 / (1 + N)).
    """
    n = data.n_objects
    sums = data.column_sums()
    a = np.ones(data.n_features, dtype=np.float64)
    b = np.clip(n / np.maximum(sums, 1), 1.0, float(n))
    return Hyperparams(a=a, b=b, alpha=alpha)


def log_predictive(x, counts, hyper):
    """Log probability of one binary row under a cluster's posterior predictive.

    ``counts`` is a ``(size, feature_count_row)`` pair for an existing
    cluster, or ``None`` for a brand-new (empty) one.  With the Bernoulli
    rates integrated out against their Beta posteriors, each feature
    contributes a Beta-function ratio that collapses to a count ratio:
    ``(a_j + n_jk) / (a_j + b_j + n_k)`` where the feature is present and
    ``(b_j + n_k - n_jk) / (a_j + b_j + n_k)`` where it is absent.
    """
    x = np.asarray(x)
    if x.shape != hyper.a.shape:
        raise ValueError(f"row has {x.shape} entries, hyperparameters have {hyper.a.shape}")
    if counts is None:
        size = 0
        fcounts = np.zeros_like(hyper.a)
    else:
        size, fcounts = counts
        fcounts = np.asarray(fcounts)
        if (fcounts < 0).any() or (fcounts > size).any():
            raise ValueError("inconsistent counts: feature counts must lie in [0, cluster size]")
    numer = np.where(x == 1, hyper.a + fcounts, hyper.b + (size - fcounts))
    return float(np.log(numer).sum() - np.log(hyper.a + hyper.b + size).sum())


def crp_log_prior(option, leave_one_out_sizes, n_total, alpha):
    """Log prior probability of seating one object at a cluster option.

    ``option`` is an existing cluster index or ``NEW_CLUSTER``.  Sizes are
    leave-one-out (the object being seated excluded) and must sum to
    ``n_total - 1``.  An existing cluster attracts with weight equal to its
    size, a new cluster with weight ``alpha``; both are normalized by
    ``n_total - 1 + alpha``.

    These are the limiting conditionals of a finite symmetric mixture with
    weight ``(size_k + alpha/K) / (n_total - 1 + alpha)`` per component as
    the number of components grows without bound: the ``alpha/K`` crumbs
    pool into the single new-cluster option.  Only this limit is used at
    runtime.
    """
    sizes = np.asarray(leave_one_out_sizes, dtype=np.int64)
    if sizes.sum() != n_total - 1:
        raise ValueError("leave-one-out sizes must sum to n_total - 1")
    denom = n_total - 1 + alpha
    if isinstance(option, str):
        if option != NEW_CLUSTER:
            raise ValueError(f"unknown option {option!r}")
        return float(np.log(alpha / denom))
    k = int(option)
    if not 0 <= k < sizes.shape[0]:
        raise ValueError(f"cluster index {k} out of range")
    if sizes[k] == 0:
        raise ValueError("an empty cluster must not be offered as an existing option")
    return float(np.log(sizes[k] / denom))


def assignment_distribution(i, state, data, hyper, temperature):
    """Tempered posterior over the cluster options for a detached object.

    ``state`` must already exclude object ``i`` from its statistics.  The
    returned vector has one entry per existing cluster plus a final entry
    for a new cluster.  Entry k is proportional to
    ``size_k * exp(loglik_k / T)`` and the last to
    ``alpha * exp(loglik_new / T)``; the seat-count prior stays untempered
    while the data likelihood is raised to 1/T.  At T = 1 this is exactly
    the collapsed posterior; as T -> 0 it concentrates on the option with
    the highest predictive likelihood.  Weights are normalized after a
    max-shift so the result always sums to one.
    """
    if not temperature > 0:
        raise ValueError("temperature must be strictly positive")
    if state.assignments[i] != UNASSIGNED:
        raise ValueError(f"object {i} must be detached from the state first")
    if state.sizes.sum() != data.n_objects - 1:
        raise ValueError("state statistics must cover exactly the other n - 1 objects")
    x = data.values[i]
    a, b = hyper.a, hyper.b
    # Stack a zero-count pseudo-cluster so the new-cluster option shares the
    # vectorized path with the existing ones.
    sizes_ext = np.append(state.sizes, 0)
    counts_ext = np.concatenate(
        [state.feature_counts, np.zeros((1, data.n_features), dtype=np.int64)], axis=0
    )
    numer = np.where(x == 1, a + counts_ext, b + (sizes_ext[:, None] - counts_ext))
    loglik = np.log(numer).sum(axis=1) - np.log(a + b + sizes_ext[:, None]).sum(axis=1)
    prior = np.append(state.sizes, hyper.alpha).astype(np.float64)
    log_weights = np.log(prior) + loglik / temperature
    log_weights -= log_weights.max()
    probs = np.exp(log_weights)
    probs /= probs.sum()
    return probs


def beta_posterior(j, counts, hyper):
    """Conjugate posterior shapes for feature ``j`` given one cluster's counts.

    ``counts`` is the ``(size, feature_count)`` pair of that cluster; the
    update only ever adds observed presences/absences to the prior shapes.
    """
    size, feature_count = counts
    if not 0 <= feature_count <= size:
        raise ValueError("feature count must lie in [0, cluster size]")
    return BetaPosterior(float(hyper.a[j] + feature_count), float(hyper.b[j] + size - feature_count))


def joint_log_score(state, data, hyper):
    """Log of the unnormalized posterior of a full partition.

    Combines the exchangeable seating prior,
    ``K log(alpha) + sum_k log Gamma(size_k) - log(Gamma(N + alpha) / Gamma(alpha))``,
    with each cluster's integrated Bernoulli evidence,
    ``sum_j [log B(a_j + n_jk, b_j + size_k - n_jk) - log B(a_j, b_j)]``.
    Invariant under relabeling of clusters and strictly comparable across
    partitions of the same data, which is what makes it usable both as an
    annealing monitor and as an exhaustive-search oracle.
    """
    if state.sizes.sum() != data.n_objects:
        raise ValueError("state must cover every object")
    sizes = state.sizes
    k = state.n_clusters
    alpha = hyper.alpha
    n = data.n_objects
    per_cluster = (
        gammaln(sizes)
        + betaln(hyper.a + state.feature_counts, hyper.b + (sizes[:, None] - state.feature_counts)).sum(axis=1)
    )
    # Summing in sorted order makes the result bit-identical under any
    # relabeling of the clusters.
    cluster_total = np.sort(per_cluster).sum()
    return float(
        k * np.log(alpha)
        - (gammaln(n + alpha) - gammaln(alpha))
        - k * betaln(hyper.a, hyper.b).sum()
        + cluster_total
    )
