"""Counting baseline: r independent binary perceptrons.

Each level k answers "is the rank >= k?" and the predicted rank is the
number of levels answering yes.  Level 1 is the pinned zero vector, so
its indicator always fires and the prediction stays >= 1.  Unlike the
cumulative-sum or threshold models, nothing forces the indicators to be
monotone in k; `monotone_violations` counts inputs where they are not.
"""

import numpy as np

from .core import WeightStack


class CountingModel:
    """Independent per-level weight vectors, w_1 pinned to zero."""

    def __init__(self, rank_count, dim, weights=None):
        self.weights = weights if weights is not None else WeightStack(rank_count, dim)

    @property
    def rank_count(self):
        return self.weights.rank_count

    @property
    def dim(self):
        return self.weights.dim


def counting_indicators(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"input has shape {x.shape}, model expects ({model.dim},)")
    return (model.weights.levels @ x >= 0.0).astype(int)


def counting_predict(model, x):
    """Number of levels with w_k . x >= 0 (non-strict); always in {1..r}."""
    return int(counting_indicators(model, x).sum())


def counting_fit_online(dataset, epochs):
    """Train each level k >= 2 as an independent binary perceptron.

    The task of level k is y >= k with +1/-1 targets and standard
    perceptron updates.  Levels are trained in level-major order per
    epoch; the fixed point does not depend on the order, but the trace
    does.
    """
    model = CountingModel(dataset.rank_count, dataset.dim)
    W = model.weights.levels
    for _ in range(epochs):
        for k in range(2, dataset.rank_count + 1):
            for ex in dataset:
                x = ex.features
                target = 1.0 if ex.rank >= k else -1.0
                pred = 1.0 if np.dot(W[k - 1], x) >= 0.0 else -1.0
                if pred != target:
                    W[k - 1] += target * x
    return model


def monotone_violations(model, inputs):
    """Count inputs whose indicator sequence rises again after a zero.

    A consistent ensemble has 1[w_1.x>=0] >= ... >= 1[w_r.x>=0]; with
    independent directions that constraint is hard to satisfy, and this
    detector quantifies how often it breaks on the given inputs.
    """
    count = 0
    for x in inputs:
        ind = counting_indicators(model, np.asarray(x, dtype=np.float64))
        seen_zero = False
        for v in ind:
            if v == 0:
                seen_zero = True
            elif seen_zero:
                count += 1
                break
    return count
