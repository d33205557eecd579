"""K-means on binary rows with the gap statistic for choosing K.

The reference datasets for the gap statistic keep each column's empirical
density: every reference cell is an independent Bernoulli draw with
probability equal to its column mean, which is the binary analogue of the
uniform-over-range null used for continuous features.
"""

from dataclasses import dataclass

import numpy as np

from .model import BinaryMatrix


@dataclass
class GapResult:
    """Gap curves over k = 1..k_max and the selected cluster count."""

    chosen_k: int
    gap_curve: np.ndarray
    sk_curve: np.ndarray
    dispersion_curve: np.ndarray


def _squared_distances(points, centroids):
    """All pairwise squared Euclidean distances, shape (n, k)."""
    d2 = (
        (points * points).sum(axis=1)[:, None]
        - 2.0 * points @ centroids.T
        + (centroids * centroids).sum(axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def _plusplus_seeds(points, k, rng):
    """Greedy k-means++ seeding: spread the initial centroids apart."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]), dtype=np.float64)
    centroids[0] = points[rng.integers(n)]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centroids[j] = points[idx]
        d2 = np.minimum(d2, ((points - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _lloyd(points, k, max_iters, rng):
    """One seeded Lloyd run; returns (labels, centroids, per-iteration WCSS)."""
    n = points.shape[0]
    centroids = _plusplus_seeds(points, k, rng)
    labels = np.full(n, -1, dtype=np.int64)
    objective_trace = []
    for _ in range(max_iters):
        d2 = _squared_distances(points, centroids)
        new_labels = d2.argmin(axis=1)
        # Revive empty clusters with the worst-fit point (farthest from its
        # own centroid); repeat until every cluster has a member.
        counts = np.bincount(new_labels, minlength=k)
        while (counts == 0).any():
            empty = int(np.flatnonzero(counts == 0)[0])
            own = d2[np.arange(n), new_labels].copy()
            own[counts[new_labels] <= 1] = -1.0  # do not drain singletons
            worst = int(own.argmax())
            counts[new_labels[worst]] -= 1
            new_labels[worst] = empty
            counts[empty] += 1
            d2[worst, :] = 0.0  # its new centroid will be the point itself
        for j in range(k):
            centroids[j] = points[new_labels == j].mean(axis=0)
        objective = float(((points - centroids[new_labels]) ** 2).sum())
        objective_trace.append(objective)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, centroids, np.asarray(objective_trace)


def kmeans_binary(data, k, n_restarts=5, max_iters=100, rng=None):
    """Lloyd's algorithm on {0,1} rows; best of ``n_restarts`` by WCSS.

    Centroids are real-valued cluster means.  Returns ``(labels, centroids)``.
    """
    if not 1 <= k <= data.n_objects:
        raise ValueError(f"k must lie in [1, {data.n_objects}], got {k}")
    rng = np.random.default_rng(rng)
    points = data.values.astype(np.float64)
    best = None
    for _ in range(n_restarts):
        labels, centroids, trace = _lloyd(points, k, max_iters, rng)
        if best is None or trace[-1] < best[2]:
            best = (labels, centroids, trace[-1])
    return best[0], best[1]


def _log_dispersion(data_matrix, k, n_restarts, max_iters, rng):
    """log of the within-cluster sum of squares at the best k-means fit."""
    labels, centroids = kmeans_binary(data_matrix, k, n_restarts, max_iters, rng)
    points = data_matrix.values.astype(np.float64)
    wcss = float(((points - centroids[labels]) ** 2).sum())
    if wcss == 0.0:
        return -np.inf
    return float(np.log(wcss))


def gap_statistic(data, k_max=15, n_refs=10, rng=None, n_restarts=5, max_iters=100):
    """Gap curves for k = 1..k_max and the smallest k passing the gap rule.

    ``Gap(k)`` compares the data's log dispersion against the mean log
    dispersion of ``n_refs`` column-marginal Bernoulli reference draws;
    ``s_k`` widens the comparison by the reference spread.  The selected k
    is the smallest with ``Gap(k) >= Gap(k+1) - s_{k+1}``, else ``k_max``.
    Degenerate k, where the data dispersion is exactly zero (every cluster
    holds only duplicates), never enter the gap comparison: the smallest
    such k is a perfect separation and is returned directly (k = 1 when
    all rows are identical).
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if n_refs < 1:
        raise ValueError("n_refs must be at least 1")
    rng = np.random.default_rng(rng)
    n, d = data.n_objects, data.n_features
    k_values = range(1, k_max + 1)

    data_logs = np.array([_log_dispersion(data, k, n_restarts, max_iters, rng) for k in k_values])
    col_means = data.values.mean(axis=0)
    ref_logs = np.empty((n_refs, k_max), dtype=np.float64)
    for b in range(n_refs):
        ref = BinaryMatrix((rng.random((n, d)) < col_means).astype(np.uint8))
        ref_logs[b] = [_log_dispersion(ref, k, n_restarts, max_iters, rng) for k in k_values]

    with np.errstate(invalid="ignore"):
        gap_curve = ref_logs.mean(axis=0) - data_logs
        sk_curve = ref_logs.std(axis=0, ddof=0) * np.sqrt(1.0 + 1.0 / n_refs)

    degenerate = np.isneginf(data_logs)
    if degenerate.any():
        # Zero dispersion means k clusters of exact duplicates: a perfect
        # separation.  Gap arithmetic is undefined there, so the smallest
        # such k is the answer (k = 1 when every row is identical).
        chosen_k = int(np.flatnonzero(degenerate)[0]) + 1
    else:
        chosen_k = k_max
        for k in range(1, k_max):
            if not (np.isfinite(gap_curve[k - 1]) and np.isfinite(gap_curve[k])):
                continue
            if gap_curve[k - 1] >= gap_curve[k] - sk_curve[k]:
                chosen_k = k
                break
    return GapResult(chosen_k=int(chosen_k), gap_curve=gap_curve, sk_curve=sk_curve, dispersion_curve=data_logs)
