"""
Informativeness measures on probability vectors
===============================================

Score a handful of predictions under least-confident, smallest-margin
and entropy scoring, then show why the three collapse into one ranking
on binary problems but diverge with three or more classes.
"""

import numpy as np

from dcalm.acquisition import UncertaintyMeasure, most_informative, score

MEASURES = list(UncertaintyMeasure)

# A confident prediction, a coin flip, and two intermediates.
candidates = {
    0: np.array([0.97, 0.03]),
    1: np.array([0.50, 0.50]),
    2: np.array([0.70, 0.30]),
    3: np.array([0.55, 0.45]),
}

print("binary predictions, one score per measure")
for i, probs in candidates.items():
    row = "  ".join(f"{m.value}={score(probs, m):+.4f}" for m in MEASURES)
    print(f"  p={probs}  {row}")

# All three measures are monotone in |p - 0.5| on two classes, so the
# argmax is always the same instance: the coin flip.
for m in MEASURES:
    assert most_informative(sorted(candidates), candidates, m) == 1
print("argmax under every measure: instance 1 (the coin flip)\n")

# With three classes the measures start disagreeing.  The margin between
# the top two entries ignores the tail mass that entropy cares about.
trio = {
    10: np.array([0.45, 0.45, 0.10]),   # tight top-two margin
    11: np.array([0.40, 0.31, 0.29]),   # flat tail, high entropy
}
print("three-class predictions")
for i, probs in trio.items():
    row = "  ".join(f"{m.value}={score(probs, m):+.4f}" for m in MEASURES)
    print(f"  p={probs}  {row}")
picks = {m.value: most_informative(sorted(trio), trio, m) for m in MEASURES}
print(f"argmax now depends on the measure: {picks}")
