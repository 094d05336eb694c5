"""Compiled inner loops for training.

``nearest_row`` may reassociate its sum of squares (only the argmin is
used). ``pull_rows`` is compiled without fast-math so every weight gets
exactly ``w + c * (x - w)`` in IEEE double precision.
"""
import numba
import numpy as np

_REASSOC = {"reassoc", "nsz", "arcp"}


@numba.njit(fastmath=_REASSOC, cache=True)
def nearest_row(weights, x):
    best = 0
    best_d2 = np.inf
    for i in range(weights.shape[0]):
        s = 0.0
        for j in range(weights.shape[1]):
            d = x[j] - weights[i, j]
            s += d * d
        # strict comparison keeps the lowest index on ties
        if s < best_d2:
            best_d2 = s
            best = i
    return best


@numba.njit(cache=True)
def pull_rows(weights, x, coef):
    for i in range(weights.shape[0]):
        c = coef[i]
        if c != 0.0:
            for j in range(weights.shape[1]):
                weights[i, j] = weights[i, j] + c * (x[j] - weights[i, j])
