import numpy as np
import pytest

from marketgraph import (
    DimensionError,
    NodeLabels,
    WeightVector,
    adjacency_op,
    component_count,
    components,
    edge_distribution,
    edge_fscore,
    edge_set,
    laplacian_op,
    modularity,
    planted_k_component,
    relative_error,
)
from marketgraph.operators import edge_count, edge_linear_index

from conftest import partitions_equal


def two_disjoint_edges_p4():
    # unit edges (1,0) and (3,2)
    w = np.zeros(edge_count(4))
    w[edge_linear_index(1, 0, 4)] = 1.0
    w[edge_linear_index(3, 2, 4)] = 1.0
    return WeightVector(w, 4)


class TestModularity:
    def test_hand_computed_fixture(self):
        W = adjacency_op(two_disjoint_edges_p4())
        labels = NodeLabels(np.array([1, 1, 2, 2]), 2)
        assert modularity(W, labels) == pytest.approx(10.0 / 36.0, abs=1e-15)

    def test_empty_graph_single_label(self):
        W = np.zeros((4, 4))
        labels = NodeLabels(np.ones(4, dtype=int), 1)
        assert modularity(W, labels) == 0.0

    def test_permutation_invariance(self, rng):
        p = 9
        g = planted_k_component(p, 3, 0.6, seed=11)
        W = np.asarray(adjacency_op(g.weights))
        labels = g.partition.labels
        q0 = modularity(W, NodeLabels(labels, 3))
        perm = rng.permutation(p)
        Wp = W[np.ix_(perm, perm)]
        q1 = modularity(Wp, NodeLabels(labels[perm], 3))
        assert q1 == pytest.approx(q0, abs=1e-12)

    def test_label_length_mismatch(self):
        with pytest.raises(DimensionError):
            modularity(np.zeros((3, 3)), NodeLabels(np.array([1, 2]), 2))


class TestEdgeFscore:
    def test_identical_supports(self):
        w = two_disjoint_edges_p4()
        out = edge_fscore(w, w)
        assert out == {"fscore": 1.0, "precision": 1.0, "recall": 1.0}

    def test_disjoint_supports(self):
        p = 4
        a = np.zeros(6)
        b = np.zeros(6)
        a[0] = 1.0
        b[5] = 1.0
        out = edge_fscore(WeightVector(a, p), WeightVector(b, p))
        assert out["fscore"] == 0.0

    def test_half_overlap(self):
        # estimated {e1, e2}, reference {e2, e3}
        est = np.zeros(6)
        ref = np.zeros(6)
        est[0] = est[1] = 1.0
        ref[1] = ref[2] = 1.0
        out = edge_fscore(WeightVector(est, 4), WeightVector(ref, 4))
        assert out["precision"] == 0.5
        assert out["recall"] == 0.5
        assert out["fscore"] == 0.5

    def test_both_empty(self):
        z = WeightVector(np.zeros(6), 4)
        assert edge_fscore(z, z)["fscore"] == 1.0

    def test_f1_symmetric_precision_recall_not(self):
        est = np.zeros(6)
        ref = np.zeros(6)
        est[0] = est[1] = est[2] = 1.0
        ref[2] = 1.0
        a = edge_fscore(WeightVector(est, 4), WeightVector(ref, 4))
        b = edge_fscore(WeightVector(ref, 4), WeightVector(est, 4))
        assert a["fscore"] == pytest.approx(b["fscore"])
        assert a["precision"] != a["recall"]
        assert a["precision"] == b["recall"]


class TestRelativeError:
    def test_exact_match(self):
        M = np.eye(3)
        assert relative_error(M, M) == 0.0

    def test_double(self):
        M = np.diag([1.0, 2.0, 3.0])
        assert relative_error(2 * M, M) == pytest.approx(1.0)

    def test_constructed_perturbation(self, rng):
        R = rng.standard_normal((5, 5))
        R = (R + R.T) / 2
        E = rng.standard_normal((5, 5))
        E = (E + E.T) / 2
        E *= 0.1 * np.linalg.norm(R) / np.linalg.norm(E)
        assert relative_error(R + E, R) == pytest.approx(0.1, abs=1e-12)

    def test_zero_reference_flags_absolute_norm(self):
        E = np.eye(2)
        assert relative_error(E, np.zeros((2, 2))) == pytest.approx(np.sqrt(2.0))


class TestEdgeDistribution:
    def test_two_intra_edges(self):
        W = adjacency_op(two_disjoint_edges_p4())
        labels = NodeLabels(np.array([1, 1, 2, 2]), 2)
        assert edge_distribution(W, labels) == {"intra": 2, "inter": 0}

    def test_single_cross_edge(self):
        w = np.zeros(edge_count(4))
        w[edge_linear_index(2, 0, 4)] = 1.0
        labels = NodeLabels(np.array([1, 1, 2, 2]), 2)
        assert edge_distribution(WeightVector(w, 4), labels) == {"intra": 0, "inter": 1}

    def test_matches_brute_force_on_planted_graph(self):
        g = planted_k_component(12, 2, 0.5, seed=5)
        W = np.asarray(adjacency_op(g.weights))
        labels = g.partition.labels
        out = edge_distribution(W, g.partition, threshold=1e-4)
        intra = inter = 0
        for i in range(12):
            for j in range(i):
                if W[i, j] > 1e-4:
                    if labels[i] == labels[j]:
                        intra += 1
                    else:
                        inter += 1
        assert out == {"intra": intra, "inter": inter}
        assert out["intra"] + out["inter"] == len(edge_set(g.weights))


class TestComponents:
    def test_two_disjoint_edges(self):
        labels = components(adjacency_op(two_disjoint_edges_p4()))
        assert component_count(two_disjoint_edges_p4()) == 2
        assert labels[0] == labels[1]
        assert labels[2] == labels[3]
        assert labels[0] != labels[2]

    def test_complete_graph(self):
        assert component_count(WeightVector(np.ones(10), 5)) == 1

    def test_count_matches_laplacian_nullity(self):
        for seed in (1, 2, 3):
            g = planted_k_component(15, 3, 0.5, seed=seed)
            lam = np.linalg.eigvalsh(np.asarray(laplacian_op(g.weights)))
            nullity = int(np.sum(lam < 1e-9 * max(lam[-1], 1.0)))
            assert component_count(g.weights) == nullity == 3

    def test_partition_matches_planted(self):
        g = planted_k_component(12, 3, 0.7, seed=9)
        assert partitions_equal(components(g.weights), g.partition.labels)


class TestNodeLabels:
    def test_from_values_canonicalizes(self):
        lab = NodeLabels.from_values(["b", "a", "b", "c"])
        np.testing.assert_array_equal(lab.labels, [2, 1, 2, 3])
        assert lab.type_count == 3

    def test_rejects_out_of_range(self):
        with pytest.raises(DimensionError):
            NodeLabels(np.array([0, 1]), 2)
