"""Evaluation and bias diagnostics.

Macro-F1 is the headline metric (unweighted mean of per-class F1, so
minority classes count as much as majority ones); the distribution report
is the bias diagnostic: which classes the run actually acquired, and
where the test errors sit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_confusion(confusion: np.ndarray) -> np.ndarray:
    confusion = np.asarray(confusion)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise ValueError("confusion matrix must be square")
    if confusion.sum() == 0:
        raise ValueError("confusion matrix holds no examples")
    if (confusion < 0).any():
        raise ValueError("confusion counts must be non-negative")
    return confusion


def per_class_f1(confusion: np.ndarray) -> np.ndarray:
    """F1 per class; a class with no true and no predicted examples gets 0."""
    confusion = _check_confusion(confusion)
    tp = np.diag(confusion).astype(np.float64)
    predicted = confusion.sum(axis=0).astype(np.float64)
    actual = confusion.sum(axis=1).astype(np.float64)
    f1 = np.zeros(confusion.shape[0])
    denom = predicted + actual  # = 2TP + FP + FN; F1 = 2TP / denom
    nonzero = denom > 0
    f1[nonzero] = 2.0 * tp[nonzero] / denom[nonzero]
    return f1


def macro_f1(confusion: np.ndarray) -> float:
    return float(per_class_f1(confusion).mean())


def accuracy(confusion: np.ndarray) -> float:
    confusion = _check_confusion(confusion)
    return float(np.diag(confusion).sum() / confusion.sum())


def error_counts(confusion: np.ndarray) -> np.ndarray:
    """Misclassified test examples per true class (the error distribution)."""
    confusion = np.asarray(confusion)
    return confusion.sum(axis=1) - np.diag(confusion)


@dataclass
class DistributionReport:
    """Snapshot of acquisition bias after one round."""

    strategy: str
    round_index: int
    class_names: list[str]
    label_counts: list[int]        # acquired labels so far, per class
    test_error_counts: list[int]   # test misclassifications, per true class
    allocations: list[int]         # per-cluster batch allocations (may be empty)
    cluster_accuracies: list[float | None]  # dev-estimated, None = no dev points

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "round": self.round_index,
            "label_counts": dict(zip(self.class_names, [int(c) for c in self.label_counts])),
            "test_error_counts": dict(zip(self.class_names,
                                          [int(c) for c in self.test_error_counts])),
            "allocations": [int(a) for a in self.allocations],
            "cluster_accuracies": [None if a is None else float(a)
                                   for a in self.cluster_accuracies],
        }


def distribution_report(labeled_counts: np.ndarray, test_confusion: np.ndarray,
                        class_names: list[str], strategy: str = "",
                        round_index: int = 0,
                        allocations: list[int] | None = None,
                        cluster_accuracies: list[float | None] | None = None) -> DistributionReport:
    if labeled_counts.sum() == 0:
        raise ValueError("labeled set is empty")
    return DistributionReport(
        strategy=strategy,
        round_index=round_index,
        class_names=list(class_names),
        label_counts=[int(c) for c in labeled_counts],
        test_error_counts=[int(c) for c in error_counts(test_confusion)],
        allocations=list(allocations or []),
        cluster_accuracies=list(cluster_accuracies or []),
    )
