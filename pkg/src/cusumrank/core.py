"""Shared domain types and loss functions for ordinal regression.

Conventions used throughout the package:

* feature vectors live in R^d and their last component is the constant -1
  (the bias slot of the linear models),
* rank labels are integers in {1..r}, stored 1-based,
* all floating point work is double precision.
"""

from dataclasses import dataclass, field

import numpy as np

BIAS = -1.0
TOL = 1e-9


@dataclass(frozen=True)
class RankedExample:
    """A feature vector plus its integer rank label."""

    features: np.ndarray
    rank: int

    def __post_init__(self):
        x = np.array(self.features, dtype=np.float64)  # own copy, frozen below
        x.setflags(write=False)
        object.__setattr__(self, "features", x)
        if x.ndim != 1 or x.size < 1:
            raise ValueError("features must be a nonempty 1-d vector")
        if x[-1] != BIAS:
            raise ValueError(f"last feature must be the bias constant {BIAS}, got {x[-1]}")
        if not float(self.rank).is_integer() or self.rank < 1:
            raise ValueError(f"rank must be an integer >= 1, got {self.rank}")
        object.__setattr__(self, "rank", int(self.rank))

    @property
    def dim(self):
        return self.features.shape[0]


@dataclass(frozen=True)
class RankedDataset:
    """An ordered collection of ranked examples with a shared geometry.

    All examples have dimension `dim` and ranks in {1..rank_count}.
    Instances are immutable and safe to share read-only across threads.
    """

    examples: tuple
    rank_count: int
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        if self.rank_count < 2:
            raise ValueError("rank_count must be >= 2")
        for i, ex in enumerate(self.examples):
            if ex.dim != self.dim:
                raise ValueError(f"example {i} has dim {ex.dim}, expected {self.dim}")
            if ex.rank > self.rank_count:
                raise ValueError(f"example {i} has rank {ex.rank} > rank_count {self.rank_count}")

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    @classmethod
    def from_arrays(cls, features, ranks, rank_count=None):
        """Build a dataset from a (n, d) feature matrix and a rank vector."""
        features = np.asarray(features, dtype=np.float64)
        ranks = [int(y) for y in ranks]
        if features.shape[0] != len(ranks):
            raise ValueError("features and ranks disagree on length")
        r = rank_count if rank_count is not None else max(ranks)
        exs = [RankedExample(x, y) for x, y in zip(features, ranks)]
        return cls(examples=tuple(exs), rank_count=int(r), dim=features.shape[1])

    def feature_matrix(self):
        return np.stack([ex.features for ex in self.examples])

    def rank_vector(self):
        return np.array([ex.rank for ex in self.examples], dtype=np.int64)

    def max_norm(self):
        """Largest feature-vector norm in the dataset (the radius R)."""
        return float(max(np.linalg.norm(ex.features) for ex in self.examples))


class WeightStack:
    """The per-level weight vectors w_1..w_r of a rank ensemble.

    Level 1 solves the trivial "rank >= 1" task and is pinned to the zero
    vector: no update rule in this package ever touches it.  A stack is
    owned by a single learner while training (no internal locking).
    """

    def __init__(self, rank_count, dim, levels=None):
        if rank_count < 2:
            raise ValueError("rank_count must be >= 2")
        self.rank_count = int(rank_count)
        self.dim = int(dim)
        if levels is None:
            self.levels = np.zeros((self.rank_count, self.dim))
        else:
            self.levels = np.array(levels, dtype=np.float64)
            if self.levels.shape != (self.rank_count, self.dim):
                raise ValueError("levels shape mismatch")
            if np.any(self.levels[0] != 0.0):
                raise ValueError("level 1 must stay the zero vector")

    def copy(self):
        return WeightStack(self.rank_count, self.dim, self.levels.copy())

    def level(self, k):
        """Weight vector of level k (1-based)."""
        return self.levels[k - 1]

    def norm(self):
        return float(np.linalg.norm(self.levels))

    def __eq__(self, other):
        return (
            isinstance(other, WeightStack)
            and self.levels.shape == other.levels.shape
            and np.array_equal(self.levels, other.levels)
        )


# ---------------------------------------------------------------------------
# losses
# ---------------------------------------------------------------------------


def absolute_loss(y, yhat):
    """Rank distance |y - yhat|; symmetric and zero iff the ranks agree."""
    return abs(int(y) - int(yhat))


def zero_one_loss(y, yhat):
    return int(int(y) != int(yhat))


@dataclass(frozen=True)
class LossFn:
    """A symmetric rank loss: absolute, zero-one, or their delta-scaled forms.

    The scaled forms delta*1[y != y'] and delta*|y - y'| are the losses
    that turn the generic cumulative-loss caps into concrete mistake
    bounds for margin-separable data.
    """

    kind: str
    delta: float = 1.0

    KINDS = ("absolute", "zero-one", "scaled-zero-one", "scaled-absolute")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def __call__(self, y, yhat):
        if self.kind == "absolute":
            return float(absolute_loss(y, yhat))
        if self.kind == "zero-one":
            return float(zero_one_loss(y, yhat))
        if self.kind == "scaled-zero-one":
            return self.delta * zero_one_loss(y, yhat)
        return self.delta * absolute_loss(y, yhat)


def mean_absolute_error(truths, preds):
    """Arithmetic mean of |y - yhat| over paired rank lists."""
    truths = np.asarray(truths)
    preds = np.asarray(preds)
    if truths.shape != preds.shape:
        raise ValueError("truths and preds must have equal length")
    if truths.size == 0:
        raise ValueError("empty input")
    return float(np.mean(np.abs(truths.astype(np.float64) - preds.astype(np.float64))))
