"""Benchmark ingestion: raw regression files to ranked datasets.

Raw files are whitespace-separated numeric rows with the continuous
target in the last column.  The pipeline discretizes targets into r
ordinal bins, normalizes features with statistics fitted on the training
split only, appends the constant -1 bias component, and produces seeded
train/test partitions.  Every stage is a pure function of its inputs, so
folds can run in parallel.
"""

from dataclasses import dataclass

import numpy as np

from .core import RankedDataset


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class RawDataset:
    """Rectangular numeric rows: (n, d-1) features plus continuous targets."""

    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2 or self.targets.shape != (self.features.shape[0],):
            raise ValueError("features must be (n, d) with matching targets")
        if not (np.all(np.isfinite(self.features)) and np.all(np.isfinite(self.targets))):
            raise ValueError("non-finite entries in raw data")

    def __len__(self):
        return self.features.shape[0]


def parse_raw(source):
    """Read a whitespace-separated numeric table; last column is the target.

    `source` may be a path or an open text stream.  Blank lines are
    skipped; malformed rows (ragged or non-numeric) raise a ParseError
    naming the 1-based line number.  CRLF endings and repeated
    whitespace parse the same as plain rows.
    """
    if hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()

    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        try:
            values = [float(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-numeric token ({exc})") from None
        if width is None:
            width = len(values)
            if width < 2:
                raise ParseError(f"line {lineno}: need at least one feature and a target")
        elif len(values) != width:
            raise ParseError(f"line {lineno}: ragged row ({len(values)} columns, expected {width})")
        rows.append(values)
    if not rows:
        raise ParseError("empty input")
    table = np.array(rows, dtype=np.float64)
    return RawDataset(features=table[:, :-1], targets=table[:, -1])


class Discretizer:
    """Map continuous targets to ranks 1..r by fitted cut points.

    equal-width splits [min, max] into r same-length bins (strictly
    ascending cuts); equal-frequency places cuts at the i/r quantiles
    (non-decreasing under ties).  Bins are half-open with the top bin
    closed, so the maximum fitting target always maps to rank r.
    """

    def __init__(self, strategy, bin_count):
        if strategy not in ("equal-width", "equal-frequency"):
            raise ValueError(f"unknown binning strategy {strategy!r}")
        if bin_count < 2:
            raise ValueError("need at least two bins")
        self.strategy = strategy
        self.bin_count = int(bin_count)
        self.cuts = None

    def fit(self, targets):
        t = np.asarray(targets, dtype=np.float64)
        r = self.bin_count
        if self.strategy == "equal-width":
            lo, hi = float(np.min(t)), float(np.max(t))
            if not hi > lo:
                raise ValueError("degenerate target range: max must exceed min")
            self.cuts = lo + (hi - lo) * np.arange(1, r) / r
        else:
            if np.unique(t).size < r:
                raise ValueError(f"equal-frequency binning needs >= {r} distinct targets")
            self.cuts = np.quantile(t, np.arange(1, r) / r)
        return self

    def transform(self, targets):
        if self.cuts is None:
            raise ValueError("discretizer is not fitted")
        t = np.asarray(targets, dtype=np.float64)
        return 1 + np.searchsorted(self.cuts, t, side="right").astype(np.int64)


def discretize(targets, strategy, r):
    """Fit a discretizer on `targets` and return it with their ranks."""
    disc = Discretizer(strategy, r).fit(targets)
    return disc, disc.transform(targets)


class Normalizer:
    """Per-feature scaling with statistics from the fitting split only.

    standardize maps to zero mean and unit variance; minmax maps the fit
    range onto [0, 1]. Constant features map to 0 under both.
    """

    def __init__(self, strategy):
        if strategy not in ("standardize", "minmax", "none"):
            raise ValueError(f"unknown normalization strategy {strategy!r}")
        self.strategy = strategy
        self.center = None
        self.scale = None

    def fit(self, features):
        X = np.asarray(features, dtype=np.float64)
        if self.strategy == "standardize":
            self.center = X.mean(axis=0)
            self.scale = X.std(axis=0)
        elif self.strategy == "minmax":
            self.center = X.min(axis=0)
            self.scale = X.max(axis=0) - self.center
        else:
            self.center = np.zeros(X.shape[1])
            self.scale = np.ones(X.shape[1])
        # rounding can leave a ~1e-16 spread on a constant column; zero it
        # so such features map to 0 instead of amplified noise
        tiny = 1e-12 * (np.abs(self.center) + 1.0)
        self.scale = np.where(self.scale <= tiny, 0.0, self.scale)
        return self

    def transform(self, features):
        if self.center is None:
            raise ValueError("normalizer is not fitted")
        X = np.asarray(features, dtype=np.float64)
        if X.shape[1] != self.center.shape[0]:
            raise ValueError(
                f"dimension drift: fitted on {self.center.shape[0]} features, got {X.shape[1]}"
            )
        safe = np.where(self.scale > 0, self.scale, 1.0)
        out = (X - self.center) / safe
        return np.where(self.scale > 0, out, 0.0)


def partition(n, seed, train_fraction=None, train_size=None):
    """Deterministic disjoint (train, test) index split of range(n).

    Exactly one of `train_fraction` / `train_size` must be given; the
    shuffle is a pure function of the seed.
    """
    if (train_fraction is None) == (train_size is None):
        raise ValueError("give exactly one of train_fraction or train_size")
    if train_fraction is not None:
        if not 0.0 < train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")
        k = int(round(n * train_fraction))
    else:
        k = int(train_size)
    if not 0 < k < n:
        raise ValueError(f"split of {k} train rows out of {n} leaves an empty side")
    order = np.random.default_rng(seed).permutation(n)
    return np.sort(order[:k]), np.sort(order[k:])


def load_partition_file(path):
    """External fold file: one line per fold of space-separated 0-based
    test indices."""
    folds = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                folds.append(np.array([int(t) for t in line.split()], dtype=np.int64))
    if not folds:
        raise ParseError("empty partition file")
    return folds


def finalize(features, normalizer, ranks, r):
    """Normalize, append the -1 bias slot, and pair with ranks."""
    X = normalizer.transform(features)
    bias = -np.ones((X.shape[0], 1))
    return RankedDataset.from_arrays(np.hstack([X, bias]), list(ranks), rank_count=r)
