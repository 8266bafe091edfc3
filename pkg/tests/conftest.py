"""Shared test helpers: dense operator oracles and fixture construction."""

import numpy as np
import pytest

from marketgraph import (
    degree_adj,
    degree_op,
    edge_pairs,
    laplacian_adj,
    laplacian_op,
)
from marketgraph.operators import edge_count


def dense_quad_operator(p):
    """Assemble the m x m matrix of (degree_adj o degree_op + laplacian_adj o
    laplacian_op) column by column.

    This is the test-side oracle; the library never materializes it.
    """
    m = edge_count(p)
    Q = np.zeros((m, m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = 1.0
        Q[:, k] = degree_adj(degree_op(e)) + laplacian_adj(laplacian_op(e))
    return Q


def sinkhorn_degrees(w, p, target, iters=3000):
    """Rescale edge weights symmetrically until node degrees match target.

    Returns a weight vector whose graph has the same support but degrees equal
    to target (up to iteration accuracy).  Used to build ground-truth graphs
    compatible with the solvers' unit degree constraint.
    """
    ii, jj = edge_pairs(p)
    w = np.asarray(w, dtype=float).copy()
    x = np.ones(p)
    A = np.zeros((p, p))
    A[ii, jj] = w
    A[jj, ii] = w
    for _ in range(iters):
        d = (A * np.outer(x, x)).sum(axis=1)
        x *= np.sqrt(target / d)
    return (A * np.outer(x, x))[ii, jj]


def partitions_equal(labels_a, labels_b):
    "True when two label vectors induce the same partition of the nodes."
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.size != b.size:
        return False
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
