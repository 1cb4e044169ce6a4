"""Kernelized dual of the cumulative-sum ranker.

The feature map of rank y decomposes into per-level atom blocks, so
dual bookkeeping is done per (support example, level) instead of per
predicted structure: a mistake adds sgn(y - yhat) to the coefficients of
the levels between the two ranks.  The pair-indexed dual over whole
structures is equivalent but can grow much larger; it lives in the test
suite as an oracle only.

Level 1 is an atom formally, but its coefficient never changes and it
shifts every rank's score equally, so it is not stored.
"""

from dataclasses import dataclass

import numpy as np

from .core import absolute_loss
from .engine import TrainTrace, pick_argmax


@dataclass(frozen=True)
class Kernel:
    """Linear, polynomial, or Gaussian RBF kernel."""

    kind: str
    degree: int = 3
    coef0: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "polynomial", "rbf"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and self.gamma <= 0:
            raise ValueError("rbf gamma must be positive")
        if self.kind == "polynomial" and self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")

    def __call__(self, A, B):
        """Gram block K(A, B): shape (len(A), len(B))."""
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        B = np.atleast_2d(np.asarray(B, dtype=np.float64))
        if self.kind == "linear":
            return A @ B.T
        if self.kind == "polynomial":
            return (A @ B.T + self.coef0) ** self.degree
        sq = (
            np.sum(A * A, axis=1)[:, None]
            - 2.0 * (A @ B.T)
            + np.sum(B * B, axis=1)[None, :]
        )
        return np.exp(-self.gamma * np.maximum(sq, 0.0))

    def spec(self):
        """Compact text form, e.g. "rbf:gamma=0.5" (artifact headers)."""
        if self.kind == "linear":
            return "linear"
        if self.kind == "polynomial":
            return f"polynomial:degree={self.degree}:coef0={self.coef0:.17g}"
        return f"rbf:gamma={self.gamma:.17g}"

    @classmethod
    def from_spec(cls, text):
        parts = text.split(":")
        kind = parts[0]
        kwargs = {}
        for p in parts[1:]:
            key, val = p.split("=")
            kwargs[key] = int(val) if key == "degree" else float(val)
        return cls(kind, **kwargs)


class DualCuSumModel:
    """Support vectors plus per-(example, level) integer coefficients.

    `coefficients[i, j]` belongs to support example i and level j+2;
    every nonzero entry traces back to a recorded mistake whose update
    range covered that level.
    """

    def __init__(self, rank_count, dim, kernel):
        self.rank_count = int(rank_count)
        self.dim = int(dim)
        self.kernel = kernel
        self.support_x = np.zeros((0, self.dim))
        self.support_index = []  # dataset position of each support row
        self.coefficients = np.zeros((0, self.rank_count - 1), dtype=np.int64)

    @property
    def support_size(self):
        return self.support_x.shape[0]

    def level_responses(self, x):
        """Dual response of each level j >= 2: sum_i beta_{i,j} K(x_i, x)."""
        if self.support_size == 0:
            return np.zeros(self.rank_count - 1)
        kvec = self.kernel(self.support_x, np.asarray(x, dtype=np.float64)[None, :])[:, 0]
        if not np.all(np.isfinite(kvec)):
            raise ValueError("kernel evaluation produced non-finite values")
        return self.coefficients.T @ kvec

    def scores(self, x):
        """Cumulative dual scores for ranks 1..r (rank 1 scores 0)."""
        return np.concatenate([[0.0], np.cumsum(self.level_responses(x))])


def dual_predict(model, x):
    """argmax_k of the cumulative dual score; ties go to the lowest rank."""
    return 1 + pick_argmax(model.scores(x), "lowest")


def dual_fit_online(dataset, kernel, epochs, use_cache=True, stop_when_clean=False):
    """Mistake-driven dual learner.

    On a mistake at example i, beta_{i,j} += sgn(y - yhat) for
    j = min(y,yhat)+1 .. max(y,yhat): the atoms of the true structure
    gain +1, those of the predicted one -1, and the shared prefix
    cancels.  With a linear kernel the induced score function equals the
    primal learner's at every step.

    `use_cache` reuses Gram rows between passes (one row per support
    vector); results are identical with it off.

    Returns (DualCuSumModel, TrainTrace).
    """
    X = dataset.feature_matrix()
    n = len(dataset)
    model = DualCuSumModel(dataset.rank_count, dataset.dim, kernel)
    trace = TrainTrace()
    pos_of = {}  # dataset index -> support row
    cache_rows = []  # support row -> K(x_i, X) over the whole dataset

    for _ in range(epochs):
        clean = True
        for t, ex in enumerate(dataset):
            y = ex.rank
            if model.support_size == 0:
                scores = np.zeros(dataset.rank_count)
            else:
                if use_cache:
                    kvec = np.array([row[t] for row in cache_rows])
                else:
                    kvec = kernel(model.support_x, X[t : t + 1])[:, 0]
                if not np.all(np.isfinite(kvec)):
                    raise ValueError("kernel evaluation produced non-finite values")
                scores = np.concatenate([[0.0], np.cumsum(model.coefficients.T @ kvec)])
            yhat = 1 + pick_argmax(scores, "lowest")
            step = 0.0
            if yhat != y:
                clean = False
                step = 1.0
                if t not in pos_of:
                    pos_of[t] = model.support_size
                    model.support_x = np.vstack([model.support_x, X[t]])
                    model.support_index.append(t)
                    model.coefficients = np.vstack(
                        [model.coefficients, np.zeros((1, dataset.rank_count - 1), dtype=np.int64)]
                    )
                    if use_cache:
                        cache_rows.append(kernel(X[t : t + 1], X)[0])
                lo, hi = min(y, yhat), max(y, yhat)
                # columns for levels lo+1 .. hi  (level j maps to column j-2)
                model.coefficients[pos_of[t], lo - 1 : hi - 1] += int(np.sign(y - yhat))
            trace.record(y, yhat, step, absolute_loss(y, yhat))
        if stop_when_clean and clean:
            break
    return model, trace
