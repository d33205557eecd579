"""Scoring predicted clusterings against ground truth.

Accuracy is the percentage of objects whose predicted cluster maps onto
their true cluster under the best one-to-one cluster matching, so it is
invariant to how either side happens to number its clusters.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import ClusterState


@dataclass
class ContingencyTable:
    """Co-occurrence counts between predicted (rows) and true (columns) clusters."""

    counts: np.ndarray

    @property
    def n_total(self):
        return int(self.counts.sum())

    @property
    def row_marginals(self):
        """Predicted cluster sizes."""
        return self.counts.sum(axis=1)

    @property
    def col_marginals(self):
        """True cluster sizes."""
        return self.counts.sum(axis=0)


def _compact(labels, name):
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError(f"{name} labels must be a 1-d vector")
    _, compact = np.unique(labels, return_inverse=True)
    return compact.astype(np.int64)


def contingency(pred, truth):
    """Count label co-occurrences; entry (p, t) is ``|{i : pred_i=p and truth_i=t}|``."""
    pred = _compact(pred, "predicted")
    truth = _compact(truth, "true")
    if pred.shape != truth.shape:
        raise ValueError(f"label vectors differ in length: {pred.shape[0]} vs {truth.shape[0]}")
    counts = np.zeros((pred.max() + 1, truth.max() + 1), dtype=np.int64)
    np.add.at(counts, (pred, truth), 1)
    return ContingencyTable(counts)


def matched_accuracy(pred, truth):
    """Percentage of objects correctly clustered under the best 1-to-1 matching.

    The matching between predicted and true clusters maximizes the summed
    co-occurrence counts (Hungarian assignment on the contingency table);
    surplus clusters on either side stay unmatched and contribute nothing.
    """
    table = contingency(pred, truth).counts
    rows, cols = linear_sum_assignment(-table)
    matched = int(table[rows, cols].sum())
    return 100.0 * matched / table.sum()


def cluster_feature_frequencies(assignments, data):
    """K x D matrix whose (k, j) entry is the fraction of cluster k carrying feature j."""
    state = ClusterState.from_assignments(data, assignments)
    return state.feature_counts / state.sizes[:, None]
