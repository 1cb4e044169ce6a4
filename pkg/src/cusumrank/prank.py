"""Ranking by Projecting: one direction, r ordered thresholds.

All level perceptrons share the projection direction u and differ only
in their bias b_k; the first threshold is the -infinity sentinel, so
rank 1 is always feasible.  The predictor returns the largest rank whose
threshold the projection clears, which coincides with the structured
argmax over the feature map Phi(x, y) = (y*z, -1_y, 0_{r-y}).

The learner keeps b_2 <= ... <= b_r sorted throughout training; that is
asserted after every update, not repaired.
"""

import numpy as np

from .core import absolute_loss
from .engine import StructuredProblem, TrainTrace, pick_argmax


class PRankModel:
    """Projection direction u in R^{d-1} plus thresholds b with b_1 = -inf."""

    def __init__(self, feature_dim, rank_count, direction=None, thresholds=None):
        self.feature_dim = int(feature_dim)
        self.rank_count = int(rank_count)
        self.direction = (
            np.zeros(self.feature_dim) if direction is None else np.array(direction, dtype=np.float64)
        )
        if thresholds is None:
            self.thresholds = np.zeros(self.rank_count)
            self.thresholds[0] = -np.inf
        else:
            self.thresholds = np.array(thresholds, dtype=np.float64)
        if self.direction.shape != (self.feature_dim,):
            raise ValueError("direction dimension mismatch")
        if self.thresholds.shape != (self.rank_count,) or self.thresholds[0] != -np.inf:
            raise ValueError("thresholds must have length r with b_1 = -inf")

    def copy(self):
        return PRankModel(self.feature_dim, self.rank_count, self.direction.copy(), self.thresholds.copy())

    def thresholds_sorted(self):
        return bool(np.all(np.diff(self.thresholds[1:]) >= 0))


def prank_predict(model, z):
    """Largest rank y with u . z >= b_y, by binary search over b.

    Requires sorted thresholds (the learner's standing invariant);
    b_1 = -inf makes rank 1 always feasible.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (model.feature_dim,):
        raise ValueError(f"input has shape {z.shape}, model expects ({model.feature_dim},)")
    a = float(np.dot(model.direction, z))
    # count thresholds b_2..b_r that a clears
    return 1 + int(np.searchsorted(model.thresholds[1:], a, side="right"))


def prank_predict_scan(model, z):
    """Linear-scan reference predictor (differential-test oracle)."""
    a = float(np.dot(model.direction, np.asarray(z, dtype=np.float64)))
    best = 1
    for y in range(1, model.rank_count + 1):
        if a >= model.thresholds[y - 1]:
            best = y
    return best


def prank_fit_online(dataset, epochs, stop_when_clean=False):
    """Online learner: u += (y - yhat) z and the crossed thresholds move
    one unit against the mistake direction.

    Operates on the informative part z of each example (the trailing -1
    bias slot is played by the thresholds).  Returns (PRankModel,
    TrainTrace).
    """
    model = PRankModel(dataset.dim - 1, dataset.rank_count)
    trace = TrainTrace()
    for _ in range(epochs):
        clean = True
        for ex in dataset:
            z, y = ex.features[:-1], ex.rank
            yhat = prank_predict(model, z)
            step = 0.0
            if yhat != y:
                clean = False
                step = 1.0
                s = np.sign(y - yhat)
                model.direction += (y - yhat) * z
                lo, hi = min(y, yhat), max(y, yhat)
                model.thresholds[lo:hi] -= s
                assert model.thresholds_sorted(), "threshold order broke: bug"
            trace.record(y, yhat, step, absolute_loss(y, yhat))
        if stop_when_clean and clean:
            break
    return model, trace


def prank_margin_check(dataset, u, b, delta):
    """True iff every example satisfies b_y + delta <= u . z <= b_{y+1} - delta.

    `b` is the full threshold vector (b_1 = -inf allowed); the upper
    condition is skipped for y = r.  Raises on unsorted thresholds.
    """
    u = np.asarray(u, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if np.any(np.diff(b[1:]) < 0):
        raise ValueError("thresholds must be sorted")
    for ex in dataset:
        a = float(np.dot(u, ex.features[:-1]))
        y = ex.rank
        if not a >= b[y - 1] + delta:
            return False
        if y < dataset.rank_count and not a <= b[y] - delta:
            return False
    return True


class PRankProblem(StructuredProblem):
    """Structured-perceptron instantiation of Ranking by Projecting.

    Weights are (u, b_2..b_r); the b_1 slot is dropped because its
    feature coefficient is -1 for every rank, a constant score shift.
    Ties break toward the highest rank, which makes the score argmax
    coincide exactly with the threshold-search predictor.
    """

    tie_rule = "highest"

    def __init__(self, rank_count, dim):
        # `dim` is the full input dimension including the bias slot
        self.rank_count = int(rank_count)
        self.z_dim = int(dim) - 1
        self.dim = self.z_dim + self.rank_count - 1

    def split(self, w):
        """(u, thresholds b_2..b_r) view of a flat weight vector."""
        w = np.asarray(w)
        return w[: self.z_dim], w[self.z_dim :]

    def outputs(self, x):
        return list(range(1, self.rank_count + 1))

    def feature_map(self, x, y):
        z = np.asarray(x)[:-1]
        marks = np.zeros(self.rank_count - 1)
        marks[: y - 1] = -1.0  # slots for b_2..b_y
        return np.concatenate([y * z, marks])

    def feature_diff(self, x, y, yhat):
        # (y - yhat) z in one multiply, matching the direct update rule's
        # floating-point path exactly
        z = np.asarray(x)[:-1]
        marks = np.zeros(self.rank_count - 1)
        lo, hi = min(y, yhat), max(y, yhat)
        marks[lo - 1 : hi - 1] = -np.sign(y - yhat)
        return np.concatenate([(y - yhat) * z, marks])

    def scores(self, w, x):
        u, btail = self.split(w)
        a = float(np.dot(u, np.asarray(x)[:-1]))
        ranks = np.arange(1, self.rank_count + 1)
        bias_sums = np.concatenate([[0.0], np.cumsum(btail)])
        return ranks * a - bias_sums

    def argmax_solve(self, w, x, cost=None):
        u, btail = self.split(w)
        if cost is None and np.all(np.diff(btail) >= 0):
            a = float(np.dot(u, np.asarray(x)[:-1]))
            return 1 + int(np.searchsorted(btail, a, side="right"))
        vals = self.scores(w, x)
        if cost is not None:
            vals = vals + cost
        return 1 + pick_argmax(vals, self.tie_rule)

    def as_model(self, w):
        u, btail = self.split(w)
        b = np.concatenate([[-np.inf], btail])
        return PRankModel(self.z_dim, self.rank_count, u.copy(), b)
