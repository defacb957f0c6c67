"""
Seeded k-means and per-round subclustering
==========================================

Fit Lloyd's algorithm on planted blobs, watch the inertia descend, and
then split one recovered cluster into finer subclusters the way the
adaptive selection strategy does each round.
"""

import numpy as np

from dcalm.clustering import kmeans, partition_by_centroids, subcluster

rng = np.random.default_rng(4)

# Three planted blobs of 40 points each, well separated in the plane.
centers = np.array([[0.0, 0.0], [9.0, 0.0], [4.5, 8.0]])
X = np.vstack([c + 0.8 * rng.standard_normal((40, 2)) for c in centers])
ids = list(range(len(X)))

model = kmeans(ids, X, k=3, seed=7)
print(f"converged after {len(model.inertia_history)} Lloyd iterations")
print("inertia per iteration (never increases):")
for step, value in enumerate(model.inertia_history):
    print(f"  {step}: {value:.2f}")

sizes = [len(model.members(c)) for c in range(model.k)]
print(f"cluster sizes: {sizes} (planted 40/40/40)")

# Fresh points fall to their nearest centroid; this is how dev instances
# get attached to pool clusters when estimating per-region accuracy.
probes = np.array([[0.5, -0.5], [8.2, 1.0], [5.0, 7.0]])
partition = partition_by_centroids(model, [900, 901, 902], probes)
print(f"probe assignment by nearest centroid: "
      f"{ {c: sorted(v) for c, v in partition.items()} }")

# Subclustering: carve cluster 0 into 4 finer groups.  One instance per
# subcluster is what the adaptive strategy acquires from a region.
members = model.members(0)
fine = subcluster(members, X[members], num_subclusters=4, seed=11)
print(f"cluster 0 split into {fine.k} subclusters of sizes "
      f"{[len(fine.members(j)) for j in range(fine.k)]}")
