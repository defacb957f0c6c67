"""
Character n-gram tf-idf features
================================

Fit the featurizer on a small pool of sentences, inspect the learned
vocabulary, and use the L2-normalized vectors for cosine similarity.
The vocabulary always comes from the pool alone; held-out text is only
ever transformed.
"""

import numpy as np

from dcalm.featurizer import fit_tfidf, transform, transform_many

pool = [
    "the cat sat on the mat",
    "the dog sat on the log",
    "a cat and a dog",
    "stock prices fell sharply today",
    "markets rallied as prices rose",
]

model = fit_tfidf(pool, n_range=(2, 4), max_features=400)
print(f"vocabulary: {len(model.vocabulary)} character n-grams, "
      f"dim={model.dim}")

# The highest-idf grams are the ones concentrated in a single document.
by_idf = sorted(model.vocabulary, key=lambda g: -model.idf[model.vocabulary[g]])
print("rarest grams:", ", ".join(repr(g) for g in by_idf[:6]))
print("most common grams:", ", ".join(repr(g) for g in by_idf[-6:]))

# Vectors are unit length, so a dot product is cosine similarity.
vectors = transform_many(model, pool)
print("\npairwise cosine similarity over the pool:")
print(np.round(vectors @ vectors.T, 2))

# Held-out sentences: the pet sentence lands near the pet documents, the
# finance sentence near the finance ones, and nonsense matches nothing.
for text in ("my cat sat still", "prices fell again", "zzzz qqqq"):
    vec = transform(model, text)
    sims = vectors @ vec
    best = int(np.argmax(sims))
    print(f"{text!r}: nearest pool doc {best} ({pool[best]!r}), "
          f"cosine {sims[best]:.2f}")
