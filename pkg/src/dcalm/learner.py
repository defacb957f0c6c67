"""Probabilistic linear classifiers retrained from scratch each round.

Two learners share one optimizer (seeded mini-batch gradient descent from
zero weights): multinomial logistic regression with softmax cross-entropy,
and a one-vs-rest linear SVM with hinge loss.  Both expose class
probabilities; the SVM squashes its margins through a softmax, which keeps
the margin ranking intact for uncertainty scoring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

LOGISTIC = "logistic"
SVM = "svm"
LEARNER_KINDS = (LOGISTIC, SVM)


@dataclass
class TrainConfig:
    kind: str = LOGISTIC
    epochs: int = 50
    learning_rate: float = 0.1
    l2: float = 1e-4
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.kind not in LEARNER_KINDS:
            raise ValueError(f"unknown learner kind {self.kind!r}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.l2 < 0:
            raise ValueError("L2 strength must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")


@dataclass
class LinearModel:
    """Trained weights; treated as immutable once returned by train()."""

    weights: np.ndarray  # (num_classes, dim)
    bias: np.ndarray     # (num_classes,)
    kind: str

    @property
    def num_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def logistic_loss_grad(weights: np.ndarray, bias: np.ndarray, X: np.ndarray,
                       y: np.ndarray, l2: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean softmax cross-entropy + 0.5*l2*||W||^2 and its gradients."""
    n = X.shape[0]
    probs = _softmax(X @ weights.T + bias)
    loss = float(-np.log(probs[np.arange(n), y] + 1e-300).mean())
    loss += 0.5 * l2 * float((weights ** 2).sum())
    probs[np.arange(n), y] -= 1.0
    grad_w = probs.T @ X / n + l2 * weights
    grad_b = probs.sum(axis=0) / n
    return loss, grad_w, grad_b


def hinge_loss_grad(weights: np.ndarray, bias: np.ndarray, X: np.ndarray,
                    y: np.ndarray, l2: float) -> tuple[float, np.ndarray, np.ndarray]:
    """One-vs-rest hinge loss + 0.5*l2*||W||^2 and its subgradients."""
    n, num_classes = X.shape[0], weights.shape[0]
    margins = X @ weights.T + bias
    targets = np.full((n, num_classes), -1.0)
    targets[np.arange(n), y] = 1.0
    slack = 1.0 - targets * margins
    active = slack > 0.0
    loss = float(slack[active].sum()) / n + 0.5 * l2 * float((weights ** 2).sum())
    coeff = np.where(active, -targets, 0.0)
    grad_w = coeff.T @ X / n + l2 * weights
    grad_b = coeff.sum(axis=0) / n
    return loss, grad_w, grad_b


_LOSSES = {LOGISTIC: logistic_loss_grad, SVM: hinge_loss_grad}


def train(X: np.ndarray, y: np.ndarray, num_classes: int,
          config: TrainConfig | None = None) -> LinearModel:
    """Fit from scratch: zero init, per-epoch seeded shuffle, mini batches."""
    config = config or TrainConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("need at least one training example")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y lengths differ")
    if y.min() < 0 or y.max() >= num_classes:
        raise ValueError("label out of range")

    n, dim = X.shape
    weights = np.zeros((num_classes, dim))
    bias = np.zeros(num_classes)
    loss_grad = _LOSSES[config.kind]
    rng = np.random.default_rng(config.seed)

    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            _, grad_w, grad_b = loss_grad(weights, bias, X[batch], y[batch], config.l2)
            weights -= config.learning_rate * grad_w
            bias -= config.learning_rate * grad_b

    return LinearModel(weights=weights, bias=bias, kind=config.kind)


def predict_proba(model: LinearModel, X: np.ndarray) -> np.ndarray:
    """Per-class probabilities; softmax of logits (or of SVM margins)."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.dim:
        raise ValueError(f"feature dimension {X.shape[1]} != model dimension {model.dim}")
    probs = _softmax(X @ model.weights.T + model.bias)
    return probs[0] if single else probs


def predict(model: LinearModel, X: np.ndarray) -> np.ndarray:
    probs = predict_proba(model, X)
    return np.argmax(np.atleast_2d(probs), axis=1)


@dataclass
class EvalResult:
    """Accuracy plus the full confusion matrix (rows true, cols predicted).

    ``accuracy`` is None for an empty example set: an explicit undefined
    marker, deliberately distinct from 0.
    """

    accuracy: float | None
    confusion: np.ndarray

    @property
    def total(self) -> int:
        return int(self.confusion.sum())


def evaluate(model: LinearModel, X: np.ndarray, y: Sequence[int],
             num_classes: int) -> EvalResult:
    confusion = np.zeros((num_classes, num_classes), dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if y.shape[0] == 0:
        return EvalResult(accuracy=None, confusion=confusion)
    predicted = predict(model, X)
    np.add.at(confusion, (y, predicted), 1)
    accuracy = float((predicted == y).mean())
    return EvalResult(accuracy=accuracy, confusion=confusion)
