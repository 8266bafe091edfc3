"""Graph-quality and comparison metrics: modularity, edge counts by label,
binary-edge f-score, relative error, connected components."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .operators import WeightVector, _as_matrix, _as_weights, edge_pairs

__all__ = [
    "DEFAULT_EDGE_THRESHOLD",
    "NodeLabels",
    "edge_set",
    "modularity",
    "edge_fscore",
    "relative_error",
    "edge_distribution",
    "components",
    "component_count",
]

# Edges are "present" above this absolute weight, chosen small relative to
# unit degree targets.
DEFAULT_EDGE_THRESHOLD = 1e-4


@dataclass(frozen=True)
class NodeLabels:
    """Integer type per node, values in 1..type_count."""

    labels: np.ndarray
    type_count: int

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=int)
        if lab.ndim != 1:
            raise DimensionError("labels must be a 1-d vector")
        if lab.size and (lab.min() < 1 or lab.max() > self.type_count):
            raise DimensionError(
                f"labels must lie in 1..{self.type_count}, got range "
                f"[{lab.min()}, {lab.max()}]"
            )
        lab = lab.copy()
        lab.flags.writeable = False
        object.__setattr__(self, "labels", lab)

    @classmethod
    def from_values(cls, values):
        "Canonicalize arbitrary hashable labels to 1..t (sorted order)."
        values = list(values)
        mapping = {v: i + 1 for i, v in enumerate(sorted(set(values), key=str))}
        return cls(np.array([mapping[v] for v in values]), len(mapping))

    def __len__(self):
        return self.labels.size


def _label_array(labels, p):
    lab = labels.labels if isinstance(labels, NodeLabels) else np.asarray(labels, dtype=int)
    if lab.size != p:
        raise DimensionError(f"{lab.size} labels for {p} nodes")
    return lab


def _adjacency_of(graph):
    """Accept a WeightVector, edge vector, or adjacency matrix."""
    if isinstance(graph, WeightVector) or (np.asarray(graph).ndim == 1):
        values, p = _as_weights(graph)
        ii, jj = edge_pairs(p)
        W = np.zeros((p, p))
        W[ii, jj] = values
        W[jj, ii] = values
        return W
    return _as_matrix(graph)


def edge_set(graph, threshold=DEFAULT_EDGE_THRESHOLD):
    "Set of node pairs (i, j), i > j, whose weight exceeds the threshold."
    W = _adjacency_of(graph)
    ii, jj = edge_pairs(W.shape[0])
    mask = W[ii, jj] > threshold
    return {(int(i), int(j)) for i, j in zip(ii[mask], jj[mask])}


def modularity(W, labels):
    """Label-aware edge concentration score.

    Q = 1/(p(p-1)) * sum_{i,j} (W_ij - d_i d_j / (p(p-1))) [t_i = t_j],
    summed over all ordered pairs including i = j, with d the weighted
    degrees.  Note the normalizer is p(p-1), not the total weight of the
    classical variant.
    """
    W = _adjacency_of(W)
    p = W.shape[0]
    lab = _label_array(labels, p)
    d = W.sum(axis=1)
    norm = p * (p - 1)
    same = lab[:, None] == lab[None, :]
    return float(np.sum((W - np.outer(d, d) / norm) * same) / norm)


def edge_fscore(estimated, reference, threshold=DEFAULT_EDGE_THRESHOLD):
    """Binary-edge F1 of an estimated graph against a reference.

    Edge presence is weight > threshold; reference plays the ground-truth
    role for precision/recall.  Two empty edge sets score 1.
    """
    est = edge_set(estimated, threshold)
    ref = edge_set(reference, threshold)
    if not est and not ref:
        return {"fscore": 1.0, "precision": 1.0, "recall": 1.0}
    tp = len(est & ref)
    precision = tp / len(est) if est else 0.0
    recall = tp / len(ref) if ref else 0.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return {"fscore": f1, "precision": precision, "recall": recall}


def relative_error(estimated, reference):
    """Frobenius error ||est - ref||_F / ||ref||_F.

    Falls back to the absolute norm ||est||_F when the reference is zero.
    """
    E = _as_matrix(estimated)
    R = _as_matrix(reference)
    if E.shape != R.shape:
        raise DimensionError(f"shape mismatch {E.shape} vs {R.shape}")
    ref_norm = np.linalg.norm(R)
    if ref_norm == 0.0:
        return float(np.linalg.norm(E))
    return float(np.linalg.norm(E - R) / ref_norm)


def edge_distribution(W, labels, threshold=DEFAULT_EDGE_THRESHOLD):
    "Counts of present edges within (intra) and across (inter) label groups."
    W = _adjacency_of(W)
    p = W.shape[0]
    lab = _label_array(labels, p)
    ii, jj = edge_pairs(p)
    present = W[ii, jj] > threshold
    same = lab[ii] == lab[jj]
    return {
        "intra": int(np.sum(present & same)),
        "inter": int(np.sum(present & ~same)),
    }


def components(W, threshold=DEFAULT_EDGE_THRESHOLD):
    """Connected components of the thresholded graph.

    Returns a length-p integer array of 0-based component ids, ordered by
    first-seen node.
    """
    W = _adjacency_of(W)
    p = W.shape[0]
    neighbors = [np.flatnonzero(W[i] > threshold) for i in range(p)]
    label = -np.ones(p, dtype=int)
    comp = 0
    for start in range(p):
        if label[start] >= 0:
            continue
        stack = [start]
        label[start] = comp
        while stack:
            u = stack.pop()
            for v in neighbors[u]:
                if label[v] < 0:
                    label[v] = comp
                    stack.append(int(v))
        comp += 1
    return label


def component_count(W, threshold=DEFAULT_EDGE_THRESHOLD):
    "Number of connected components of the thresholded graph."
    return int(components(W, threshold).max()) + 1
