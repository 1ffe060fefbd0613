"""Matrix exponential by scaling and squaring around a truncated Taylor series."""

import math

import numpy as np


def expm(M, tol=1e-16, max_terms=60):
    M = np.asarray(M, dtype=float)
    d = M.shape[0]
    norm = np.abs(M).sum(axis=1).max() if d else 0.0
    s = max(0, math.ceil(math.log2(norm))) if norm > 1 else 0
    B = M / (2.0 ** s)
    E = np.eye(d)
    term = np.eye(d)
    for k in range(1, max_terms + 1):
        term = term @ B / k
        E = E + term
        if np.abs(term).max() < tol:
            break
    for _ in range(s):
        E = E @ E
    return E


def acyclicity(A):
    """h(A) = tr(exp(A * A)) - d and its gradient exp(A * A)^T * 2A (elementwise products).

    h is zero exactly when the support of A is acyclic and positive otherwise.
    """
    A = np.asarray(A, dtype=float)
    E = expm(A * A)
    return float(np.trace(E) - A.shape[0]), E.T * 2.0 * A
