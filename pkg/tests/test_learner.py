"""Linear learners: gradient correctness, training behavior, evaluation."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dcalm.learner import (
    LOGISTIC,
    SVM,
    LinearModel,
    TrainConfig,
    evaluate,
    hinge_loss_grad,
    logistic_loss_grad,
    predict,
    predict_proba,
    train,
)

FD_STEP = 1e-5


def finite_difference(loss_fn, weights, bias, X, y, l2):
    """Central finite differences of the scalar loss over every parameter."""
    grad_w = np.zeros_like(weights)
    grad_b = np.zeros_like(bias)
    for idx in np.ndindex(weights.shape):
        w_hi, w_lo = weights.copy(), weights.copy()
        w_hi[idx] += FD_STEP
        w_lo[idx] -= FD_STEP
        hi = loss_fn(w_hi, bias, X, y, l2)[0]
        lo = loss_fn(w_lo, bias, X, y, l2)[0]
        grad_w[idx] = (hi - lo) / (2 * FD_STEP)
    for j in range(bias.shape[0]):
        b_hi, b_lo = bias.copy(), bias.copy()
        b_hi[j] += FD_STEP
        b_lo[j] -= FD_STEP
        hi = loss_fn(weights, b_hi, X, y, l2)[0]
        lo = loss_fn(weights, b_lo, X, y, l2)[0]
        grad_b[j] = (hi - lo) / (2 * FD_STEP)
    return grad_w, grad_b


def relative_error(a, b):
    # floor at the O(1) gradient scale so an exactly-zero analytic gradient
    # vs finite-difference roundoff (~1e-11) does not read as error 1.0
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1.0)
    return np.linalg.norm(a - b) / denom


def random_problem(rng, loss_fn, num_classes=None, n=None, dim=None):
    """Small random instance; re-drawn until safely away from hinge kinks."""
    while True:
        C = num_classes or int(rng.integers(2, 5))
        n_ = n or int(rng.integers(1, 9))
        d = dim or int(rng.integers(2, 6))
        X = rng.normal(size=(n_, d))
        y = rng.integers(0, C, size=n_)
        y[0] = 0
        if C > 1 and n_ > 1:
            y[1 % n_] = C - 1
        weights = 0.5 * rng.normal(size=(C, d))
        bias = 0.1 * rng.normal(size=C)
        l2 = float(rng.uniform(0.0, 0.1))
        margins = X @ weights.T + bias
        targets = np.where(np.arange(C)[None, :] == y[:, None], 1.0, -1.0)
        if np.abs(1.0 - targets * margins).min() > 1e-3:
            return weights, bias, X, y, l2
        if loss_fn is logistic_loss_grad:
            return weights, bias, X, y, l2


class TestGradients:
    def test_logistic_gradient_at_zero_weights_single_example(self):
        rng = np.random.default_rng(42)
        X = rng.normal(size=(1, 4))
        y = np.array([2])
        weights = np.zeros((3, 4))
        bias = np.zeros(3)
        _, gw, gb = logistic_loss_grad(weights, bias, X, y, 0.0)
        fw, fb = finite_difference(logistic_loss_grad, weights, bias, X, y, 0.0)
        assert relative_error(gw, fw) < 1e-5
        assert relative_error(gb, fb) < 1e-5

    @pytest.mark.parametrize("loss_fn", [logistic_loss_grad, hinge_loss_grad],
                             ids=["logistic", "hinge"])
    def test_fifty_random_problems_match_finite_differences(self, loss_fn):
        rng = np.random.default_rng(7)
        for _ in range(50):
            weights, bias, X, y, l2 = random_problem(rng, loss_fn)
            _, gw, gb = loss_fn(weights, bias, X, y, l2)
            fw, fb = finite_difference(loss_fn, weights, bias, X, y, l2)
            assert relative_error(gw, fw) < 1e-4
            assert relative_error(gb, fb) < 1e-4

    def test_l2_term_excludes_bias(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(4, 3))
        y = np.array([0, 1, 1, 0])
        weights = np.zeros((2, 3))
        bias = rng.normal(size=2)
        loss_with, _, _ = logistic_loss_grad(weights, bias, X, y, 10.0)
        loss_without, _, _ = logistic_loss_grad(weights, bias, X, y, 0.0)
        assert loss_with == pytest.approx(loss_without)  # zero weights: no penalty


class TestTraining:
    def test_separable_points_reach_perfect_accuracy(self):
        X = np.array([[-1.0, 0.0], [1.0, 0.0]])
        y = np.array([0, 1])
        for kind in (LOGISTIC, SVM):
            model = train(X, y, 2, TrainConfig(kind=kind, epochs=200))
            assert_allclose(predict(model, X), y)

    def test_single_class_degenerate_model(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(6, 3))
        y = np.full(6, 1)
        model = train(X, y, 3, TrainConfig(epochs=50))
        probs = predict_proba(model, rng.normal(size=(10, 3)))
        assert np.all(probs[:, 1] >= probs.max(axis=1) - 1e-12)

    def test_training_is_seeded(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(30, 4))
        y = rng.integers(0, 3, size=30)
        a = train(X, y, 3, TrainConfig(epochs=20, seed=11))
        b = train(X, y, 3, TrainConfig(epochs=20, seed=11))
        c = train(X, y, 3, TrainConfig(epochs=20, seed=12))
        assert np.array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, c.weights)

    def test_retraining_is_from_scratch(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(20, 3))
        y = rng.integers(0, 2, size=20)
        config = TrainConfig(epochs=15, seed=4)
        first = train(X, y, 2, config)
        again = train(X, y, 2, config)
        assert np.array_equal(first.weights, again.weights)

    def test_empty_training_set_rejected(self):
        with pytest.raises(ValueError):
            train(np.zeros((0, 3)), np.zeros(0, dtype=int), 2, TrainConfig())

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            train(np.zeros((3, 2)), np.array([0, 1]), 2, TrainConfig())

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(kind="forest")
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)


class TestPrediction:
    def test_zero_weight_model_is_uniform(self):
        model = LinearModel(weights=np.zeros((4, 5)), bias=np.zeros(4), kind=LOGISTIC)
        probs = predict_proba(model, np.random.default_rng(1).normal(size=(3, 5)))
        assert_allclose(probs, 0.25, rtol=0, atol=1e-12)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(2)
        model = LinearModel(weights=rng.normal(size=(3, 4)),
                            bias=rng.normal(size=3), kind=SVM)
        probs = predict_proba(model, rng.normal(size=(25, 4)))
        assert_allclose(probs.sum(axis=1), 1.0, rtol=0, atol=1e-6)
        assert np.all(probs >= 0)

    def test_svm_margin_order_maps_to_probability_order(self):
        # weights chosen so margins on x=[1] are (2, 0, -2)
        model = LinearModel(weights=np.array([[2.0], [0.0], [-2.0]]),
                            bias=np.zeros(3), kind=SVM)
        probs = predict_proba(model, np.array([[1.0]]))[0]
        assert probs[0] > probs[1] > probs[2]

    def test_single_vector_input(self):
        model = LinearModel(weights=np.zeros((2, 3)), bias=np.array([1.0, 0.0]),
                            kind=LOGISTIC)
        probs = predict_proba(model, np.zeros(3))
        assert probs.shape == (2,)
        assert probs[0] > probs[1]


class TestEvaluate:
    def make_identity_model(self):
        return LinearModel(weights=np.eye(2) * 5, bias=np.zeros(2), kind=LOGISTIC)

    def test_all_correct(self):
        model = self.make_identity_model()
        X = np.array([[1.0, 0.0], [0.0, 1.0]])
        result = evaluate(model, X, [0, 1], 2)
        assert result.accuracy == 1.0
        assert_allclose(result.confusion, np.eye(2))

    def test_three_of_four(self):
        model = self.make_identity_model()
        X = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        result = evaluate(model, X, [0, 0, 1, 0], 2)
        assert result.accuracy == 0.75

    def test_empty_set_undefined_marker(self):
        model = self.make_identity_model()
        result = evaluate(model, np.zeros((0, 2)), [], 2)
        assert result.accuracy is None
        assert result.confusion.sum() == 0
