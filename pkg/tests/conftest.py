"""Shared fixtures: small synthetic corpora and trained toy models."""

import numpy as np
import pytest

from dcalm.dataset import Corpus, FeatureStore, Instance, SyntheticConfig, \
    generate_synthetic
from dcalm.learner import TrainConfig, train


def blob_corpus(counts=(60, 50, 30), dim=8, separation=8.0, seed=3,
                with_text=False, **kwargs) -> Corpus:
    config = SyntheticConfig(class_counts=counts, dim=dim, separation=separation,
                             with_text=with_text, **kwargs)
    return generate_synthetic(config, seed)


def vector_corpus(vectors, labels, splits, class_names=None) -> Corpus:
    """Corpus straight from arrays; ids are row positions."""
    labels = list(labels)
    names = class_names or [f"c{k}" for k in range(max(labels) + 1)]
    instances = [Instance(id=i, features=np.asarray(v, dtype=np.float64),
                          label=int(y))
                 for i, (v, y) in enumerate(zip(vectors, labels))]
    return Corpus(instances=instances, num_classes=len(names), class_names=names,
                  splits={k: frozenset(v) for k, v in splits.items()},
                  feature_dim=len(vectors[0]))


def fit_on(corpus: Corpus, ids, epochs=60, kind="logistic", seed=0):
    store = FeatureStore.from_corpus(corpus)
    X = store.matrix(ids)
    y = corpus.labels(ids)
    model = train(X, y, corpus.num_classes,
                  TrainConfig(kind=kind, epochs=epochs, seed=seed))
    return model, store


@pytest.fixture
def small_corpus() -> Corpus:
    return blob_corpus()


@pytest.fixture
def text_corpus() -> Corpus:
    return blob_corpus(counts=(60, 50, 30), with_text=True)
