"""Shared generators for property tests."""

import numpy as np
from hypothesis import strategies as st

from shrinkreg import Dataset


def random_dataset(seed, n=None, q=None, collinear=False):
    """Random regression problem with a nonsingular design."""
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(8, 40))
    q = q or int(rng.integers(1, 5))
    Z = rng.normal(rng.uniform(-5, 5, q), rng.uniform(0.5, 3, q), size=(n, q))
    if collinear and q > 1:
        Z[:, 1] = Z[:, 0] + 0.05 * rng.standard_normal(n)
    beta = rng.uniform(-3, 3, q + 1)
    y = beta[0] + Z @ beta[1:] + rng.standard_normal(n)
    return Dataset.from_arrays(y, Z)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
