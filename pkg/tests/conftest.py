import math

import numpy as np
import pytest

from codeball import gf2


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_pair_with_distance(rng, n_lo, n_hi, d_min=1, k_lo=1, tries=200):
    """Random code whose enumerated minimum distance is at least d_min."""
    for _ in range(tries):
        n = int(rng.integers(n_lo, n_hi + 1))
        k = int(rng.integers(k_lo, n))
        pair = gf2.random_code(n, k, int(rng.integers(0, 2**62)))
        if gf2.min_distance(pair.primal) >= d_min:
            return pair
    raise RuntimeError("no instance with the requested distance found")


def random_weight_vector(rng, n, w):
    v = 0
    for i in rng.choice(n, size=w, replace=False):
        v |= 1 << int(i)
    return v


def batch_stderr(values, batches=20):
    """Batch-means standard error for a correlated 0/1 (or real) sequence."""
    arr = np.asarray(values, dtype=np.float64)
    usable = (arr.size // batches) * batches
    means = arr[:usable].reshape(batches, -1).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))
