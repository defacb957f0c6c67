"""Informativeness scores over probability vectors.

All three measures follow one convention, higher means more informative,
so selection code has a single argmax path.  The margin measure is negated
internally to fit that convention.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

PROB_SUM_TOL = 1e-6


class UncertaintyMeasure(Enum):
    LEAST_CONFIDENT = "least_confident"
    SMALLEST_MARGIN = "smallest_margin"
    ENTROPY = "entropy"


def _validate_probs(probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1 or probs.shape[0] < 2:
        raise ValueError("need a probability vector of length >= 2")
    if probs.min() < 0.0:
        raise ValueError("probabilities must be non-negative")
    if abs(probs.sum() - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities sum to {probs.sum():.8f}, not 1")
    return probs


def score(probs: Sequence[float], measure: UncertaintyMeasure) -> float:
    """Informativeness of one prediction.

    least confident: 1 - max p;  smallest margin: -(p(1) - p(2)) over the
    two largest entries;  entropy: -sum p ln p with 0 ln 0 = 0.
    """
    probs = _validate_probs(probs)
    if measure is UncertaintyMeasure.LEAST_CONFIDENT:
        return float(1.0 - probs.max())
    if measure is UncertaintyMeasure.SMALLEST_MARGIN:
        top_two = np.sort(probs)[-2:]
        return float(-(top_two[1] - top_two[0]))
    if measure is UncertaintyMeasure.ENTROPY:
        positive = probs[probs > 0.0]
        return float(-(positive * np.log(positive)).sum())
    raise ValueError(f"unknown measure {measure!r}")


def score_matrix(prob_rows: np.ndarray, measure: UncertaintyMeasure) -> np.ndarray:
    """Vectorized scores for a (n, num_classes) matrix of predictions."""
    P = np.asarray(prob_rows, dtype=np.float64)
    if measure is UncertaintyMeasure.LEAST_CONFIDENT:
        return 1.0 - P.max(axis=1)
    if measure is UncertaintyMeasure.SMALLEST_MARGIN:
        part = np.sort(P, axis=1)[:, -2:]
        return -(part[:, 1] - part[:, 0])
    if measure is UncertaintyMeasure.ENTROPY:
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(P > 0.0, P * np.log(P), 0.0)
        return -terms.sum(axis=1)
    raise ValueError(f"unknown measure {measure!r}")


ProbLookup = Mapping[int, np.ndarray] | Callable[[int], np.ndarray]


def _lookup(probs: ProbLookup, instance_id: int) -> np.ndarray:
    if callable(probs):
        return probs(instance_id)
    return probs[instance_id]


def most_informative(candidate_ids: Sequence[int], probs: ProbLookup,
                     measure: UncertaintyMeasure) -> int:
    """Argmax of score over candidates; ties go to the lowest id."""
    if len(candidate_ids) == 0:
        raise ValueError("no candidates")
    best_id, best_score = None, -np.inf
    for instance_id in sorted(candidate_ids):
        value = score(_lookup(probs, instance_id), measure)
        if value > best_score:
            best_id, best_score = instance_id, value
    return best_id
