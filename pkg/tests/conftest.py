import numpy as np
import pytest

from cusumrank.core import RankedDataset


def random_ranked_dataset(rng, n, d, r):
    """Arbitrary (not necessarily separable) ranked data with bias slot."""
    X = np.hstack([rng.normal(size=(n, d - 1)), -np.ones((n, 1))])
    y = rng.integers(1, r + 1, size=n)
    return RankedDataset.from_arrays(X, y.tolist(), rank_count=r)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
