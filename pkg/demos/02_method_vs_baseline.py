"""Head-to-head: annealed DP mixture vs k-means + gap statistic.

Builds a small ladder of instances from easy to hopeless and scores both
methods on each.  The interesting regime is high dimension with moderate
noise, where the collapsed mixture keeps finding the planted structure
while the baseline starts to wobble; at 50% noise both collapse to chance,
which is the honest answer there.
"""

import numpy as np

import binclust as bc

INSTANCES = [
    # (name, n, d, info_pct, noise_pct)
    ("easy/dense signal", 100, 200, 20, 10),
    ("high-dim/thin signal", 150, 400, 10, 20),
    ("noisy", 150, 200, 20, 30),
    ("hopeless (50% noise)", 120, 150, 20, 50),
]

print(f"{'instance':<22} {'mixture K':>9} {'mixture acc':>12} {'gap K':>6} {'baseline acc':>13}")
for name, n, d, info, noise in INSTANCES:
    spec = bc.SyntheticSpec(n_objects=n, n_features=d, info_pct=info, noise_pct=noise, k_true=5, seed=13)
    data, truth = bc.generate(spec)

    report = bc.run(data, seed=1)
    mixture_accuracy = bc.matched_accuracy(report.assignments, truth)

    rng = np.random.default_rng(1)
    gap = bc.gap_statistic(data, k_max=10, n_refs=8, rng=rng)
    labels, _ = bc.kmeans_binary(data, gap.chosen_k, rng=rng)
    baseline_accuracy = bc.matched_accuracy(labels, truth)

    print(f"{name:<22} {report.n_clusters:>9d} {mixture_accuracy:>11.1f}% "
          f"{gap.chosen_k:>6d} {baseline_accuracy:>12.1f}%")

print("\nchance level for 5 balanced clusters is about 20%")
