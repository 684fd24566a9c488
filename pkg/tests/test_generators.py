"""Sanity checks for the built-in test-graph generators."""

import numpy as np

from sparsekit.generators import (
    complete_graph,
    disjoint_triangles,
    gnp_random_graph,
    path_graph,
    powerlaw_graph,
    random_tree,
    star_graph,
    triangle,
    two_triangles,
)
from sparsekit.graph import connected_components


def test_fixed_shapes():
    assert (triangle().n_vertices, triangle().n_edges) == (3, 3)
    assert path_graph(4).n_edges == 3
    assert star_graph(4).n_edges == 3
    assert complete_graph(5).n_edges == 10
    assert two_triangles().n_edges == 7
    assert disjoint_triangles().n_edges == 6


def test_two_triangles_bridge_id():
    g = two_triangles()
    assert (int(g.edge_u[3]), int(g.edge_v[3])) == (2, 3)


def test_gnp_seeded_and_connected():
    a = gnp_random_graph(40, 0.1, seed=7)
    b = gnp_random_graph(40, 0.1, seed=7)
    assert np.array_equal(a.edge_u, b.edge_u) and np.array_equal(a.edge_v, b.edge_v)
    assert not np.array_equal(a.edge_u, gnp_random_graph(40, 0.1, seed=8).edge_u)

    c = gnp_random_graph(60, 0.05, seed=3, connect=True)
    assert len(np.unique(connected_components(c))) == 1

    w = gnp_random_graph(30, 0.2, seed=1, weighted=True)
    assert w.weighted and w.edge_weight.min() > 0.0

    d = gnp_random_graph(30, 0.2, seed=1, directed=True)
    assert d.directed


def test_powerlaw_degree_tail():
    g = powerlaw_graph(500, 3, seed=11)
    deg = g.degrees()
    assert g.n_edges >= 3 * (500 - 3)  # preferential attachment floor
    assert deg.max() > 5 * np.median(deg)  # heavy tail
    assert len(np.unique(connected_components(g))) == 1


def test_random_tree():
    g = random_tree(50, seed=2)
    assert g.n_edges == 49
    assert len(np.unique(connected_components(g))) == 1
