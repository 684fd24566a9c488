"""Louvain communities, clustering coefficients, partition F1."""

import numpy as np
import pytest

import oracles
from sparsekit.generators import disjoint_triangles, gnp_random_graph
from sparsekit.graph import Graph, GraphError
from sparsekit.metrics import (
    clustering_coefficients,
    clustering_f1,
    louvain_communities,
)


def n_communities(labels):
    return len(np.unique(labels))


def test_louvain_small_cases(tri, twotri):
    assert n_communities(louvain_communities(tri, seed=0)) == 1
    assert n_communities(louvain_communities(disjoint_triangles(), seed=0)) == 2

    labels = louvain_communities(twotri, seed=0)
    assert n_communities(labels) == 2
    # split lands exactly on the bridge
    assert len(set(labels[:3])) == 1 and len(set(labels[3:])) == 1
    assert labels[0] != labels[3]


def test_louvain_agrees_with_exhaustive_modularity(twotri):
    best, best_q = oracles.best_partition_exhaustive(twotri)
    labels = louvain_communities(twotri, seed=0)
    assert oracles.partitions_equal(labels, best)
    assert oracles.modularity(twotri, labels) == pytest.approx(best_q, abs=1e-12)


def test_louvain_finds_positive_modularity_on_random_graphs():
    # the one-community partition scores exactly 0, so anything found must
    # beat it
    for s in range(4):
        g = gnp_random_graph(50, 0.08, seed=s, connect=True)
        labels = louvain_communities(g, seed=s)
        assert oracles.modularity(g, labels) > 0.0


def test_louvain_seeded_and_directed_rejected():
    g = gnp_random_graph(40, 0.1, seed=1)
    a = louvain_communities(g, seed=3)
    b = louvain_communities(g, seed=3)
    assert np.array_equal(a, b)
    d = gnp_random_graph(10, 0.3, seed=0, directed=True)
    with pytest.raises(GraphError, match="undirected"):
        louvain_communities(d, seed=0)


def test_louvain_no_edges_gives_singletons():
    g = Graph.from_edges(4, [], [])
    assert n_communities(louvain_communities(g, seed=0)) == 4


def test_coefficients_hand_values(tri, star4, twotri):
    lcc, mcc, gcc = clustering_coefficients(tri)
    assert lcc == pytest.approx([1.0] * 3) and mcc == 1.0 and gcc == 1.0

    lcc, mcc, gcc = clustering_coefficients(star4)
    assert lcc[0] == 0.0 and gcc == 0.0

    lcc, mcc, gcc = clustering_coefficients(twotri)
    assert gcc == pytest.approx(0.6)


def test_coefficients_match_triple_enumeration():
    for s in (0, 1, 2):
        g = gnp_random_graph(30, 0.2, seed=s)
        lcc, mcc, gcc = clustering_coefficients(g)
        olcc, omcc, ogcc = oracles.clustering(g)
        assert lcc == pytest.approx(olcc, abs=1e-12)
        assert mcc == pytest.approx(omcc, abs=1e-12)
        assert gcc == pytest.approx(ogcc, abs=1e-12)


def test_coefficients_directed_cycle_has_no_closed_pairs():
    cyc = Graph.from_edges(3, [0, 1, 2], [1, 2, 0], directed=True)
    lcc, mcc, gcc = clustering_coefficients(cyc)
    assert list(lcc) == [0.0, 0.0, 0.0] and gcc == 0.0


def test_f1_examples():
    assert clustering_f1([0, 0, 1, 1], [5, 5, 9, 9]) == 1.0
    assert clustering_f1([0, 0, 0, 0], [0, 1, 2, 3]) == pytest.approx(0.25)
    # best-match overlap is taken over the first argument's clusters, so the
    # score is not symmetric: every singleton matches perfectly into the blob
    assert clustering_f1([0, 1, 2, 3], [0, 0, 0, 0]) == 1.0
    got = clustering_f1([0, 0, 1, 1, 2], [0, 1, 1, 1, 2])
    assert got == pytest.approx(oracles.f1_partition([0, 0, 1, 1, 2],
                                                     [0, 1, 1, 1, 2]))
    with pytest.raises(GraphError):
        clustering_f1([0, 1], [0, 1, 2])
