import numpy as np
from scipy.spatial import cKDTree


def scattered_points(rng, N, d=1, lo=-1.5, hi=1.5):
    """Uniform random points with a minimum-separation guarantee.

    Near-coincident points make the kernel systems singular to working
    precision, which the solver reports as an error by contract; the
    well-posed-instance tests therefore draw generic configurations with
    pairwise gaps bounded away from zero.
    """
    width = hi - lo
    min_gap = 0.05 * width / N ** (1.0 / d)
    X = rng.uniform(lo, hi, (N, d))
    for _ in range(200):
        pairs = cKDTree(X).query_pairs(min_gap, output_type="ndarray")
        if not len(pairs):
            break
        X[pairs[:, 1]] = rng.uniform(lo, hi, (len(pairs), d))
    return X
