"""TF-IDF over character n-grams (default 2-5), for text-only corpora.

Smoothed idf: ln((1 + n_docs) / (1 + df)) + 1.  Vectors are raw counts
weighted by idf, then L2-normalized; an all-zero vector is legal output
for text with no in-vocabulary grams.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class TfidfModel:
    vocabulary: dict[str, int]
    idf: np.ndarray
    n_range: tuple[int, int]
    max_features: int | None = None

    def __post_init__(self):
        if self.n_range[0] > self.n_range[1] or self.n_range[0] < 1:
            raise ValueError(f"bad n-gram range {self.n_range}")
        if len(self.vocabulary) != self.idf.shape[0]:
            raise ValueError("idf not aligned with vocabulary")

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


def _char_ngrams(text: str, n_range: tuple[int, int]) -> Iterable[str]:
    text = text.lower()
    for n in range(n_range[0], n_range[1] + 1):
        for start in range(len(text) - n + 1):
            yield text[start:start + n]


def fit_tfidf(texts: Sequence[str], n_range: tuple[int, int] = (2, 5),
              max_features: int | None = None) -> TfidfModel:
    """Build the vocabulary and idf weights from a text collection."""
    if not texts:
        raise ValueError("cannot fit on an empty text list")
    if n_range[0] > n_range[1] or n_range[0] < 1:
        raise ValueError(f"bad n-gram range {n_range}")

    doc_freq: Counter[str] = Counter()
    for text in texts:
        doc_freq.update(set(_char_ngrams(text, n_range)))

    grams = sorted(doc_freq)
    if max_features is not None and len(grams) > max_features:
        # Keep the most common grams; lexicographic order breaks df ties.
        grams = sorted(grams, key=lambda g: (-doc_freq[g], g))[:max_features]
        grams.sort()

    n_docs = len(texts)
    vocabulary = {gram: col for col, gram in enumerate(grams)}
    idf = np.array(
        [math.log((1 + n_docs) / (1 + doc_freq[g])) + 1.0 for g in grams],
        dtype=np.float64,
    )
    return TfidfModel(vocabulary=vocabulary, idf=idf, n_range=n_range,
                      max_features=max_features)


def transform(model: TfidfModel, text: str) -> np.ndarray:
    """Map text to its L2-normalized tf-idf vector (dense)."""
    vec = np.zeros(model.dim, dtype=np.float64)
    counts = Counter(_char_ngrams(text, model.n_range))
    for gram, count in counts.items():
        col = model.vocabulary.get(gram)
        if col is not None:
            vec[col] = count * model.idf[col]
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


def transform_many(model: TfidfModel, texts: Sequence[str]) -> np.ndarray:
    return np.vstack([transform(model, t) for t in texts]) if texts \
        else np.zeros((0, model.dim))
