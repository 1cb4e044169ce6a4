"""Where a shared-direction threshold model stops working.

Ranking by Projecting keeps one direction u and r ordered thresholds;
its prediction is the largest rank whose threshold u.z clears.  That is
exactly a cumulative-sum ranker whose levels all share the direction and
differ only in bias, so it inherits the same online machinery, but the
shared direction is a real restriction: the four-point dataset below
needs the second coordinate weighted positively for one boundary and
negatively for the other.
"""

import numpy as np

from cusumrank import (
    cusum_fit_online,
    cusum_predict,
    d0_dataset,
    mean_absolute_error,
    prank_fit_online,
    prank_predict,
)
from cusumrank.prank import PRankModel

ds = d0_dataset()
truths = ds.rank_vector()

model, _ = prank_fit_online(ds, epochs=2000)
preds = [prank_predict(model, ex.features[:-1]) for ex in ds]
print("threshold model after 2000 epochs:")
print(f"  direction u = {model.direction}, thresholds = {model.thresholds}")
print(f"  predictions {preds} vs truths {[int(y) for y in truths]}")
print(f"  train MAE = {mean_absolute_error(truths, preds):.3f}  (never reaches 0)")

cusum, trace = cusum_fit_online(ds, epochs=100)
cpreds = [cusum_predict(cusum, ex.features) for ex in ds]
print(f"\nper-level directions instead: MAE = {mean_absolute_error(truths, cpreds):.3f} "
      f"after {trace.mistakes()} mistakes")

# the thresholds stay sorted through every update; that ordering is what
# makes the binary-search predictor valid
probe = PRankModel(ds.dim - 1, ds.rank_count)
sorted_throughout = True
for _ in range(200):
    for ex in ds:
        z, y = ex.features[:-1], ex.rank
        yhat = prank_predict(probe, z)
        if yhat != y:
            probe.direction += (y - yhat) * z
            lo, hi = min(y, yhat), max(y, yhat)
            probe.thresholds[lo:hi] -= np.sign(y - yhat)
        sorted_throughout &= probe.thresholds_sorted()
print(f"\nthresholds sorted after every one of 800 visits: {sorted_throughout}")

# on data that *is* threshold-rankable, the same learner converges and
# obeys its mistake bound; see demo 02 and the test suite for the
# planted-margin version of that statement.
