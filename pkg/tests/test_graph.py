"""Graph container, edge-list IO, preprocessing, selections, subgraphs."""

import gzip

import numpy as np
import pytest

import oracles
from sparsekit.generators import (
    disjoint_triangles,
    gnp_random_graph,
    path_graph,
    star_graph,
    triangle,
    two_triangles,
)
from sparsekit.graph import (
    Graph,
    GraphError,
    connected_components,
    load_edge_list,
    load_graph_file,
    load_selection,
    make_selection,
    prepare,
    preprocess,
    quadratic_form,
    save_edge_list,
    save_selection,
    sniff_edge_list_flags,
    subgraph,
    symmetrize,
)


def test_triangle_from_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("# a comment\n0 1\n1 2\n0 2\n")
    g = load_edge_list(p)
    assert (g.n_vertices, g.n_edges, g.n_arcs) == (3, 3, 6)
    assert not g.directed and not g.weighted


def test_edge_ids_canonical_order():
    # ids sort by (min, max) regardless of input order or orientation
    g = Graph.from_edges(3, [2, 1, 2], [1, 0, 0], directed=False)
    assert [(int(u), int(v)) for u, v in zip(g.edge_u, g.edge_v)] == [
        (0, 1), (0, 2), (1, 2)]


def test_duplicates_and_self_loops_collapse():
    g = Graph.from_edges(3, [0, 1, 0, 1], [1, 0, 2, 1], w=[5.0, 7.0, 2.0, 9.0],
                         weighted=True)
    assert g.n_edges == 2
    # (0,1) listed twice (both orientations): first weight wins; (1,1) dropped
    assert g.edge_weight[0] == 5.0


def test_gzip_and_bad_line(tmp_path):
    p = tmp_path / "g.txt.gz"
    with gzip.open(p, "wt") as f:
        f.write("0 1\n1 2\n")
    g = load_edge_list(p)
    assert g.n_edges == 2

    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\nnope\n")
    with pytest.raises(GraphError, match=r"bad\.txt:2"):
        load_edge_list(bad)


def test_preprocess_removes_isolated_and_remaps():
    g = Graph.from_edges(10, [0], [5])
    h, rep = preprocess(g)
    assert h.n_vertices == 2 and h.n_edges == 1
    assert rep.removed_isolated == 8

    g6 = Graph.from_edges(6, [0, 1, 2, 0], [1, 2, 3, 2])  # vertices 4,5 isolated
    h6, rep6 = preprocess(g6)
    assert h6.n_vertices == 4 and rep6.removed_isolated == 2

    tri, rep_t = preprocess(triangle())
    assert tri.n_vertices == 3 and rep_t.removed_isolated == 0


def test_symmetrize():
    one = Graph.from_edges(2, [0], [1], directed=True)
    u, rep = prepare(one, symmetrize_directed=True)
    assert not u.directed and u.n_edges == 1 and rep.symmetrized_added == 1

    both = Graph.from_edges(2, [0, 1], [1, 0], directed=True)
    u2, rep2 = prepare(both, symmetrize_directed=True)
    assert u2.n_edges == 1 and rep2.symmetrized_added == 0

    cyc = Graph.from_edges(3, [0, 1, 2], [1, 2, 0], directed=True)
    u3 = symmetrize(cyc)
    assert (u3.n_vertices, u3.n_edges) == (3, 3)
    assert sorted(map(tuple, zip(u3.edge_u, u3.edge_v))) == [(0, 1), (0, 2), (1, 2)]

    dup = Graph.from_edges(2, [0, 1], [1, 0], w=[2.0, 5.0], directed=True,
                           weighted=True)
    assert float(symmetrize(dup).edge_weight[0]) == 5.0  # max weight wins


def test_prepare_pipeline():
    g = Graph.from_edges(5, [0, 1], [1, 0], directed=True)  # 3 isolated
    h, rep = prepare(g, symmetrize_directed=True)
    assert not h.directed and h.n_vertices == 2
    assert rep.removed_isolated == 3 and rep.symmetrized_added == 0


def test_connected_components():
    assert len(np.unique(connected_components(triangle()))) == 1
    assert len(np.unique(connected_components(disjoint_triangles()))) == 2
    assert len(np.unique(connected_components(path_graph(4)))) == 1


def test_subgraph_full_empty_partial(tri):
    full = subgraph(tri, make_selection(tri, [0, 1, 2], 0.0))
    assert full.n_edges == 3 and full.n_vertices == 3

    empty = subgraph(tri, make_selection(tri, [], 0.9))
    assert empty.n_edges == 0 and empty.n_vertices == 3

    # keep {0-1, 1-2} -> path on 3 vertices
    path = subgraph(tri, make_selection(tri, [0, 2], 1 / 3))
    assert path.n_edges == 2
    assert sorted(map(int, path.degrees())) == [1, 1, 2]


def test_subgraph_reweighting(tri):
    sel = make_selection(tri, [0, 1], 1 / 3, new_weights={0: 2.5, 1: 4.0})
    h = subgraph(tri, sel)
    assert h.weighted
    assert sorted(map(float, h.edge_weight)) == [2.5, 4.0]


def test_quadratic_form_examples(tri):
    assert quadratic_form(tri, np.ones(3)) == 0.0
    one = Graph.from_edges(2, [0], [1])
    assert quadratic_form(one, np.array([1.0, 0.0])) == 1.0
    assert quadratic_form(tri, np.array([1.0, 0.0, 0.0])) == 2.0
    rng = np.random.default_rng(3)
    g = gnp_random_graph(12, 0.4, seed=8, weighted=True)
    x = rng.normal(size=12)
    assert quadratic_form(g, x) == pytest.approx(oracles.quadratic_form(g, x), rel=1e-12)


def test_make_selection_records_achieved(tri):
    sel = make_selection(tri, [1], 0.7)
    assert sel.achieved_prune_rate == pytest.approx(1 - 1 / 3)
    assert sel.target_prune_rate == 0.7
    assert sel.n_kept == 1


def test_selection_round_trip(tmp_path, twotri):
    # reweighted selections carry one weight per kept edge
    sel = make_selection(twotri, [0, 3, 6], 0.5,
                         new_weights={0: 1.0, 3: 1.75, 6: 2.5},
                         flags=("max_attainable",), seed="9:demo")
    p = tmp_path / "sel.txt"
    save_selection(sel, p)
    back = load_selection(p)
    assert list(back.kept_edge_ids) == [0, 3, 6]
    assert back.target_prune_rate == 0.5
    assert back.achieved_prune_rate == pytest.approx(sel.achieved_prune_rate)
    assert back.new_weights == {0: 1.0, 3: 1.75, 6: 2.5}
    assert back.flags == ("max_attainable",)
    assert back.seed == "9:demo"


def test_edge_list_round_trip(tmp_path):
    g = gnp_random_graph(20, 0.2, seed=4, directed=True, weighted=True)
    p = tmp_path / "d.txt"
    save_edge_list(g, p)
    assert sniff_edge_list_flags(p) == (True, True)
    back = load_graph_file(p)
    assert back.directed and back.weighted
    assert back.n_edges == g.n_edges
    assert np.array_equal(back.edge_u, g.edge_u)
    assert np.allclose(back.edge_weight, g.edge_weight)


def test_graph_id_stable_and_flag_sensitive(tri):
    assert tri.graph_id == "ca4c691de89eb8a06e13b362fbca50a4"
    weighted_tri = Graph.from_edges(3, [0, 1, 0], [1, 2, 2], w=[1.0, 1.0, 2.0],
                                    weighted=True)
    assert weighted_tri.graph_id != tri.graph_id


def test_validation_errors():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [0], [5])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [0, 1], [1])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [0], [1], w=[-1.0], weighted=True)


def test_neighbors_and_degrees(star4):
    assert sorted(map(int, star4.neighbors(0))) == [1, 2, 3]
    assert list(map(int, star4.degrees())) == [3, 1, 1, 1]
    d = Graph.from_edges(3, [0, 0], [1, 2], directed=True)
    assert list(map(int, d.degrees())) == [2, 0, 0]  # out-degrees
