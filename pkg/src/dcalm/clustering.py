"""Lloyd's KMeans with k-means++ seeding, built for determinism.

All randomness flows through one seeded generator, distance ties go to the
lowest centroid index, and reductions run in fixed id order, so the same
seed and inputs give bitwise-identical centroids.  Used for the top-level
pool clustering, dev-set partitioning, and per-round subclustering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

Seed = int | Sequence[int] | np.random.Generator

DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 100


@dataclass
class ClusterModel:
    centroids: np.ndarray                    # (k, d)
    assignment: dict[int, int]               # instance id -> cluster index
    inertia: float
    k: int
    inertia_history: list[float] = field(default_factory=list)

    def members(self, cluster_index: int) -> list[int]:
        """Ids assigned to one cluster, ascending."""
        return sorted(i for i, c in self.assignment.items() if c == cluster_index)


def _as_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sq_distances(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, (n, k).

    Computed per centroid as sum((x - c)^2) rather than the expanded form so
    geometrically equidistant points produce exactly equal floats and the
    tie-to-lowest-index rule is honored.
    """
    n, k = X.shape[0], centroids.shape[0]
    d2 = np.empty((n, k), dtype=np.float64)
    for c in range(k):
        diff = X - centroids[c]
        d2[:, c] = np.einsum("ij,ij->i", diff, diff)
    return d2


def _kmeanspp_centroids(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    centroids[0] = X[int(rng.integers(n))]
    diff = X - centroids[0]
    closest = np.einsum("ij,ij->i", diff, diff)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))  # all remaining mass on chosen points
        else:
            idx = int(rng.choice(n, p=closest / total))
        centroids[j] = X[idx]
        diff = X - centroids[j]
        closest = np.minimum(closest, np.einsum("ij,ij->i", diff, diff))
    return centroids


def _repair_empty(assign: np.ndarray, d2: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point currently farthest from its centroid."""
    counts = np.bincount(assign, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        own = d2[np.arange(len(assign)), assign]
        donor = int(np.argmax(own))
        counts[assign[donor]] -= 1
        assign[donor] = empty
        counts[empty] = 1
        d2[donor, :] = 0.0  # pin the donor so another empty cluster cannot steal it
    return assign


def kmeans(ids: Sequence[int], X: np.ndarray, k: int, seed: Seed,
           tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> ClusterModel:
    """Cluster id-indexed vectors into k groups.

    Runs Lloyd iterations from a k-means++ start until the largest centroid
    shift drops below ``tol`` or ``max_iter`` is hit.  Empty clusters are
    repaired by donating the globally farthest point.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n == 0:
        raise ValueError("cannot cluster zero points")
    if len(ids) != n:
        raise ValueError("ids do not match point count")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} points")

    rng = _as_rng(seed)
    centroids = _kmeanspp_centroids(X, k, rng)

    history: list[float] = []
    assign = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        d2 = _sq_distances(X, centroids)
        assign = np.argmin(d2, axis=1)  # first minimum = lowest index
        history.append(float(d2[np.arange(n), assign].sum()))
        assign = _repair_empty(assign, d2, k)

        new_centroids = np.empty_like(centroids)
        for c in range(k):
            new_centroids[c] = X[assign == c].mean(axis=0)

        shift = np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max()
        centroids = new_centroids
        if shift < tol:
            break

    # Final assignment against the converged centroids.
    d2 = _sq_distances(X, centroids)
    assign = np.argmin(d2, axis=1)
    assign = _repair_empty(assign, d2, k)
    inertia = 0.0
    for c in range(k):
        mask = assign == c
        diff = X[mask] - centroids[c]
        inertia += float(np.einsum("ij,ij->", diff, diff))

    assignment = {int(i): int(c) for i, c in zip(ids, assign)}
    return ClusterModel(centroids=centroids, assignment=assignment,
                        inertia=inertia, k=k, inertia_history=history)


def partition_by_centroids(model: ClusterModel, ids: Sequence[int],
                           X: np.ndarray) -> dict[int, set[int]]:
    """Assign outside points (e.g. the dev split) to their nearest centroid.

    Every cluster index appears in the result; empty partitions are allowed.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.centroids.shape[1]:
        raise ValueError("point dimension does not match centroids")
    partition: dict[int, set[int]] = {c: set() for c in range(model.k)}
    if X.shape[0]:
        nearest = np.argmin(_sq_distances(X, model.centroids), axis=1)
        for i, c in zip(ids, nearest):
            partition[int(c)].add(int(i))
    return partition


def subcluster(ids: Sequence[int], X: np.ndarray, num_subclusters: int,
               seed: Seed) -> ClusterModel:
    """Split one cluster's still-unlabeled members into subclusters.

    When the requested count exceeds the member count, k is capped at the
    member count; the caller redistributes any selection surplus.
    """
    if len(ids) == 0:
        raise ValueError("cannot subcluster zero members")
    if num_subclusters < 1:
        raise ValueError("subcluster count must be >= 1")
    return kmeans(ids, X, min(num_subclusters, len(ids)), seed)
