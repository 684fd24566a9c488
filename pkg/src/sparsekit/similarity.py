"""Per-edge structural similarity scores.

Jaccard and SCAN scores drive four of the sparsifiers (G-Spar, L-Spar, SCAN,
Local Similarity). Neighborhoods are out-neighborhoods on directed graphs.
Computation is exact via sorted-adjacency intersection; no hashing
approximation is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass
class ScoreTable:
    """Per-edge scores for one graph.

    scores is indexed by edge id (a dense mapping: ids are 0..n_edges-1).
    """

    graph_id: str
    kind: str
    scores: np.ndarray

    def __getitem__(self, edge_id):
        return float(self.scores[edge_id])


def _edge_intersections(g: Graph) -> np.ndarray:
    """|N(u) ∩ N(v)| for each logical edge (u,v)."""
    adj = [g.neighbors(v) for v in range(g.n_vertices)]
    inter = np.zeros(g.n_edges, dtype=np.int64)
    for e in range(g.n_edges):
        a = adj[g.edge_u[e]]
        b = adj[g.edge_v[e]]
        # both sorted and duplicate-free by construction
        inter[e] = len(np.intersect1d(a, b, assume_unique=True))
    return inter


def jaccard_scores(g: Graph) -> ScoreTable:
    """score(u,v) = |N(u) ∩ N(v)| / |N(u) ∪ N(v)|, in [0, 1].

    On an undirected edge the endpoints belong to each other's neighborhoods
    but never to their own, so adjacent-but-shared-nothing pairs score 0.
    """
    deg = g.degrees()
    inter = _edge_intersections(g)
    union = deg[g.edge_u] + deg[g.edge_v] - inter
    scores = np.zeros(g.n_edges, dtype=np.float64)
    nonzero = union > 0
    scores[nonzero] = inter[nonzero] / union[nonzero]
    return ScoreTable(graph_id=g.graph_id, kind="jaccard", scores=scores)


def scan_scores(g: Graph) -> ScoreTable:
    """score(u,v) = (|N(u) ∩ N(v)| + 1) / sqrt((deg(u)+1) * (deg(v)+1))."""
    deg = g.degrees()
    inter = _edge_intersections(g)
    denom = np.sqrt((deg[g.edge_u] + 1.0) * (deg[g.edge_v] + 1.0))
    scores = (inter + 1.0) / denom
    return ScoreTable(graph_id=g.graph_id, kind="scan", scores=scores)


def save_scores(table: ScoreTable, path) -> None:
    """Persist as CSV "edge_id,score" with the kind recorded in a comment."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# kind={table.kind} graph={table.graph_id}\n")
        f.write("edge_id,score\n")
        for i, s in enumerate(table.scores):
            f.write(f"{i},{float(s)!r}\n")


def load_scores(path) -> ScoreTable:
    kind = ""
    graph_id = ""
    pairs = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line.startswith("#"):
                tokens = dict(t.split("=", 1) for t in line[1:].split() if "=" in t)
                kind = tokens.get("kind", kind)
                graph_id = tokens.get("graph", graph_id)
                continue
            if not line or line.startswith("edge_id"):
                continue
            sid, sv = line.split(",", 1)
            pairs.append((int(sid), float(sv)))
    scores = np.zeros(len(pairs), dtype=np.float64)
    for i, s in pairs:
        scores[i] = s
    return ScoreTable(graph_id=graph_id, kind=kind, scores=scores)
