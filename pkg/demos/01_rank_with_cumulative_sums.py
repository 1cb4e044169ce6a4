"""Ranking with cumulative sums, on a four-point dataset.

The running example: four points in the plane with ranks 1..3.  A stack
of per-level perceptrons scores rank k by summing the first k level
responses; the predicted rank is the argmax.  The dataset is built so
that independent level directions succeed where any single shared
direction must fail (see demo 03 for that half of the story).
"""

import numpy as np

from cusumrank import (
    WeightStack,
    counting_fit_online,
    counting_predict,
    cusum_fit_online,
    cusum_predict,
    cusum_scores,
    d0_dataset,
    d0_separator,
)
from cusumrank.ensemble import CountingModel
from cusumrank.cusum import CuSumModel

ds = d0_dataset()
print("the dataset (last feature is the constant -1 bias):")
for ex in ds:
    print(f"  x = {ex.features}   rank = {ex.rank}")

# A hand-built stack separates it: level 2 answers "rank >= 2?", level 3
# answers "rank >= 3?", and the cumulative score rewards every satisfied
# level.
model = CuSumModel(3, 3, d0_separator())
print("\nhand-built separator scores (rank 1 always scores 0):")
for ex in ds:
    scores = cusum_scores(model, ex.features)
    print(f"  x = {ex.features}  scores = {np.round(scores, 2)}  -> predict {cusum_predict(model, ex.features)}")

# The online learner finds such a stack from mistakes alone.
learned, trace = cusum_fit_online(ds, epochs=100)
preds = [cusum_predict(learned, ex.features) for ex in ds]
print(f"\nonline learner: {trace.mistakes()} mistakes on the way to predictions {preds}")
print(f"learned level stack:\n{learned.weights.levels}")
print("level 1 never moves:", np.all(learned.weights.levels[0] == 0.0))

# The independent-perceptrons counting baseline also solves this dataset
# (each binary task is separable on its own), but it combines levels by
# counting fired indicators rather than by scoring their strength.
counting = counting_fit_online(ds, epochs=200)
print("\ncounting baseline predictions:", [counting_predict(counting, ex.features) for ex in ds])

# With a zero stack every level fires (0 >= 0), so counting says the top
# rank while the cumulative-sum rule breaks the all-zero tie downward.
zero_count = CountingModel(3, 3)
zero_cusum = CuSumModel(3, 3, WeightStack(3, 3))
x = ds.examples[0].features
print("\non a zero model: counting predicts", counting_predict(zero_count, x),
      "| cumulative-sum predicts", cusum_predict(zero_cusum, x))
