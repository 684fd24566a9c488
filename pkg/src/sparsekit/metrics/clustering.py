"""Community structure and triangle density: seeded Louvain, local/mean/
global clustering coefficients, and partition F1 similarity.

Louvain is the standard greedy modularity scheme with multi-level
aggregation; the only liberty taken is determinism: vertex visit order is a
seeded shuffle, neighbor communities are scanned in sorted order, and ties
keep the incumbent. Coefficients ignore weights entirely.
"""

from __future__ import annotations

import numpy as np

from ..graph import Graph, GraphError
from ..seeding import ensure_seed
from ..similarity import _edge_intersections

_MIN_GAIN = 1e-7  # stop when a whole level improves modularity less than this


def _modularity(comm, adj, self_w, node_w, m2):
    inside = {}
    tot = {}
    for v, c in enumerate(comm):
        tot[c] = tot.get(c, 0.0) + node_w[v]
        inside[c] = inside.get(c, 0.0) + self_w[v]
        for u, w in adj[v].items():
            if comm[u] == c:
                inside[c] = inside.get(c, 0.0) + w
    q = 0.0
    for c in tot:
        q += inside.get(c, 0.0) / m2 - (tot[c] / m2) ** 2
    return q


def _one_level(adj, node_w, m2, rng):
    """Local-move phase: sweep vertices in seeded-shuffled order, moving each
    to the neighbor community with the largest modularity gain, until a full
    sweep moves nothing. Returns (community array, any_moved)."""
    n = len(adj)
    comm = list(range(n))
    sigma_tot = list(node_w)
    order = [int(v) for v in rng.permutation(n)]
    moved_any = False
    while True:
        moved = 0
        for v in order:
            cv = comm[v]
            weight_to = {}
            for u, w in adj[v].items():
                cu = comm[u]
                weight_to[cu] = weight_to.get(cu, 0.0) + w
            sigma_tot[cv] -= node_w[v]
            best_c = cv
            best_gain = weight_to.get(cv, 0.0) - sigma_tot[cv] * node_w[v] / m2
            for c in sorted(weight_to):
                gain = weight_to[c] - sigma_tot[c] * node_w[v] / m2
                if gain > best_gain + 1e-12:
                    best_c, best_gain = c, gain
            sigma_tot[best_c] += node_w[v]
            if best_c != cv:
                comm[v] = best_c
                moved += 1
        if not moved:
            break
        moved_any = True
    return comm, moved_any


def _renumber(comm):
    """Map community labels to 0..k-1 in first-occurrence order."""
    mapping = {}
    out = np.empty(len(comm), dtype=np.int64)
    for i, c in enumerate(comm):
        if c not in mapping:
            mapping[c] = len(mapping)
        out[i] = mapping[c]
    return out


def _aggregate(comm, adj, self_w, n_comms):
    new_adj = [dict() for _ in range(n_comms)]
    new_self = [0.0] * n_comms
    for v, c in enumerate(comm):
        new_self[c] += self_w[v]
        for u, w in adj[v].items():
            cu = comm[u]
            if cu == c:
                new_self[c] += w  # both arc directions land here, keeping the 2x convention
            else:
                new_adj[c][cu] = new_adj[c].get(cu, 0.0) + w
    return new_adj, new_self


def louvain_communities(g: Graph, seed=None) -> np.ndarray:
    """Louvain partition of an undirected graph; labels are 0..k-1 in first
    vertex occurrence order. Isolated vertices form singletons."""
    if g.directed:
        raise GraphError("community detection requires an undirected graph")
    rng = ensure_seed(seed, ("louvain",)).generator()
    n = g.n_vertices
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    node_w = g.weighted_degrees()
    m2 = float(node_w.sum())
    if m2 == 0.0:
        return np.arange(n, dtype=np.int64)
    adj = [dict() for _ in range(n)]
    owners = g.arc_sources()
    for a in range(g.n_arcs):
        adj[int(owners[a])][int(g.targets[a])] = float(g.weights[a])
    self_w = [0.0] * n
    node_w = [float(x) for x in node_w]

    membership = np.arange(n, dtype=np.int64)
    q_prev = _modularity(list(range(len(adj))), adj, self_w, node_w, m2)
    while True:
        comm, moved = _one_level(adj, node_w, m2, rng)
        if not moved:
            break
        comm = _renumber(comm)
        membership = comm[membership]
        q_new = _modularity([int(c) for c in comm], adj, self_w, node_w, m2)
        if q_new - q_prev < _MIN_GAIN:
            break
        q_prev = q_new
        n_comms = int(comm.max()) + 1
        adj, self_w = _aggregate(comm, adj, self_w, n_comms)
        node_w = [self_w[c] + sum(adj[c].values()) for c in range(n_comms)]
    return _renumber(membership)


def community_count(g: Graph, seed=None) -> int:
    """Number of Louvain communities."""
    labels = louvain_communities(g, seed)
    return int(labels.max()) + 1 if len(labels) else 0


def clustering_coefficients(g: Graph):
    """(lcc, mcc, gcc): per-vertex local clustering, its mean, and the global
    coefficient 3*triangles/triples. Weights are ignored.

    LCC(v) counts arcs among v's (out-)neighbors over k(k-1) ordered slots,
    which reduces to the usual triangles/(k choose 2) on undirected graphs;
    vertices of degree < 2 score 0.
    """
    n = g.n_vertices
    deg = g.degrees().astype(np.float64)
    if g.n_edges == 0:
        return np.zeros(n), 0.0, 0.0
    inter = _edge_intersections(g)  # per edge id: |N(u) & N(v)|
    closed_at = np.bincount(g.arc_sources(), weights=inter[g.edge_ids], minlength=n)
    slots = deg * (deg - 1.0)
    lcc = np.divide(closed_at, slots, out=np.zeros(n), where=slots > 0)
    mcc = float(lcc.mean()) if n else 0.0
    total_slots = slots.sum()
    gcc = float(closed_at.sum() / total_slots) if total_slots > 0 else 0.0
    return lcc, mcc, gcc


def clustering_f1(partition_c, partition_r) -> float:
    """F1 agreement between two total partitions of the same vertex set.

    Rows are clusters of partition_c; precision sums each row's best overlap
    over total mass, recall over n (equal for total partitions), F1 is their
    harmonic mean. Invariant to relabeling either side."""
    partition_c = np.asarray(partition_c)
    partition_r = np.asarray(partition_r)
    if partition_c.shape != partition_r.shape or partition_c.ndim != 1:
        raise GraphError("partitions must be equal-length 1-d arrays")
    n = len(partition_c)
    if n == 0:
        raise GraphError("partitions are empty")
    _, ci = np.unique(partition_c, return_inverse=True)
    _, ri = np.unique(partition_r, return_inverse=True)
    n_c = int(ci.max()) + 1
    n_r = int(ri.max()) + 1
    overlap = np.zeros((n_c, n_r))
    np.add.at(overlap, (ci, ri), 1.0)
    best = overlap.max(axis=1).sum()
    precision = best / overlap.sum()
    recall = best / n
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)
