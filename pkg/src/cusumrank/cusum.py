"""Cumulative-sum rank predictor and its online learners.

The score of rank k is the cumulative sum of the first k per-level
perceptron responses, s(x, k) = sum_{j<=k} w_j . x, and the predictor
picks the maximizing rank.  Level 1 responds 0 (w_1 pinned to zero), so
rank 1 always scores 0.

Two learners ship: the mistake-driven unit-step learner and the
passive-aggressive learner that assumes a known separation margin.  Both
are exact instantiations of the generic structured perceptron (see
`CuSumProblem`), which the tests verify step for step.
"""

import numpy as np

from .core import WeightStack, absolute_loss
from .engine import StructuredProblem, TrainTrace, pick_argmax


class CuSumModel:
    """r per-level weight vectors; level 1 stays zero forever."""

    def __init__(self, rank_count, dim, weights=None):
        self.weights = weights if weights is not None else WeightStack(rank_count, dim)

    @property
    def rank_count(self):
        return self.weights.rank_count

    @property
    def dim(self):
        return self.weights.dim

    def copy(self):
        return CuSumModel(self.rank_count, self.dim, self.weights.copy())


def _check_dim(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"input has shape {x.shape}, model expects ({model.dim},)")
    return x


def cusum_scores(model, x):
    """All r cumulative-sum scores at once: cumsum_k (w_k . x)."""
    x = _check_dim(model, x)
    return np.cumsum(model.weights.levels @ x)


def cusum_score(model, x, k):
    """Score of rank k: sum_{j=1..k} w_j . x."""
    if not 1 <= k <= model.rank_count:
        raise ValueError(f"rank {k} outside 1..{model.rank_count}")
    return float(cusum_scores(model, x)[k - 1])


def signed_sum_score(model, x, k):
    """Signed-sum form of the score: sum_j sgn(k - j) w_j . x.

    Level j counts positively when j <= k (an item of rank k satisfies
    the "rank >= j" task for all j <= k).  Equals
    2 * cusum_score(x, k) - sum_j w_j . x, so both forms share argmax
    and tie structure; kept as the test oracle for that identity.
    """
    x = _check_dim(model, x)
    responses = model.weights.levels @ x
    signs = np.where(np.arange(1, model.rank_count + 1) <= k, 1.0, -1.0)
    return float(signs @ responses)


def cusum_predict(model, x):
    """argmax_k cusum score; ties go to the lowest rank."""
    return 1 + pick_argmax(cusum_scores(model, x), "lowest")


class CuSumProblem(StructuredProblem):
    """Structured-perceptron instantiation of the cumulative-sum ranker.

    Weights are the flattened r x d stack; Phi(x, y) repeats x in the
    first y level blocks.  The argmax solver reuses the cumulative-sum
    scores, so engine decoding is bit-identical to `cusum_predict`.
    """

    tie_rule = "lowest"

    def __init__(self, rank_count, dim):
        self.rank_count = int(rank_count)
        self.input_dim = int(dim)
        self.dim = self.rank_count * self.input_dim

    def outputs(self, x):
        return list(range(1, self.rank_count + 1))

    def feature_map(self, x, y):
        phi = np.zeros((self.rank_count, self.input_dim))
        phi[:y] = x
        return phi.ravel()

    def feature_diff(self, x, y, yhat):
        lo, hi = min(y, yhat), max(y, yhat)
        diff = np.zeros((self.rank_count, self.input_dim))
        diff[lo:hi] = np.sign(y - yhat) * np.asarray(x)
        return diff.ravel()

    def scores(self, w, x):
        levels = np.asarray(w).reshape(self.rank_count, self.input_dim)
        return np.cumsum(levels @ np.asarray(x))

    def as_model(self, w):
        levels = np.array(w, dtype=np.float64).reshape(self.rank_count, self.input_dim)
        return CuSumModel(self.rank_count, self.input_dim, WeightStack(self.rank_count, self.input_dim, levels))


def cusum_fit_online(dataset, epochs, stop_when_clean=False):
    """Unit-step online learner.

    On a mistake, w_k += sgn(y - yhat) * x for k = min(y,yhat)+1 ..
    max(y,yhat); w_1 is never touched.  Runs `epochs` full passes unless
    `stop_when_clean` ends training after the first mistake-free pass.

    Returns (CuSumModel, TrainTrace).
    """
    model = CuSumModel(dataset.rank_count, dataset.dim)
    trace = TrainTrace()
    W = model.weights.levels
    for _ in range(epochs):
        clean = True
        for ex in dataset:
            x, y = ex.features, ex.rank
            yhat = 1 + pick_argmax(np.cumsum(W @ x), "lowest")
            step = 0.0
            if yhat != y:
                clean = False
                step = 1.0
                lo, hi = min(y, yhat), max(y, yhat)
                W[lo:hi] += np.sign(y - yhat) * x
            trace.record(y, yhat, step, absolute_loss(y, yhat))
        if stop_when_clean and clean:
            break
    return model, trace


def cusum_fit_pa(dataset, epochs, delta, stop_when_clean=False):
    """Passive-aggressive learner for a known separation margin `delta`.

    On a mistake the update solves for the smallest step that puts the
    summed response of the touched levels at sgn(y - yhat) * delta:

        rho = (sgn(y - yhat) * delta - wbar . x) / (|y - yhat| * ||x||^2)

    with wbar the sum of the levels in the update range; each of those
    levels then moves by rho * x.

    Returns (CuSumModel, TrainTrace).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    model = CuSumModel(dataset.rank_count, dataset.dim)
    trace = TrainTrace()
    W = model.weights.levels
    for _ in range(epochs):
        clean = True
        for ex in dataset:
            x, y = ex.features, ex.rank
            xn2 = float(np.dot(x, x))
            if xn2 == 0.0:
                raise ValueError("zero-norm input")
            yhat = 1 + pick_argmax(np.cumsum(W @ x), "lowest")
            step = 0.0
            if yhat != y:
                clean = False
                lo, hi = min(y, yhat), max(y, yhat)
                wbar = W[lo:hi].sum(axis=0)
                rho = (np.sign(y - yhat) * delta - float(np.dot(wbar, x))) / (abs(yhat - y) * xn2)
                W[lo:hi] += rho * x
                step = rho * np.sign(y - yhat)  # equals the generic PA step size
            trace.record(y, yhat, step, absolute_loss(y, yhat))
        if stop_when_clean and clean:
            break
    return model, trace
