"""Max-flow / min-cut evaluation.

max_flow is a plain shortest-augmenting-path (BFS) implementation over an
explicit residual structure: auditable and exact on float capacities, fine
at the scales where single flows are inspected. flow_stretch needs thousands
of flow computations per evaluation, so it rides scipy's integer max-flow
after scaling capacities; both graphs share one scale so ratios stay
consistent.

Capacities are edge weights; an undirected edge acts as a pair of opposite
arcs each carrying the full weight.
"""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csgraph, csr_matrix

from ..graph import Graph, GraphError
from ..seeding import ensure_seed
from .base import MetricReport, check_same_vertex_set, make_report, sample_reachable_pairs


def _residual_arcs(g: Graph):
    """(adjacency, to, cap, rev): forward arcs with capacity and their paired
    reverse arcs (zero capacity for directed edges)."""
    to, cap = [], []
    adj = [[] for _ in range(g.n_vertices)]

    def add_pair(u, v, c_uv, c_vu):
        adj[u].append(len(to))
        to.append(v)
        cap.append(c_uv)
        adj[v].append(len(to))
        to.append(u)
        cap.append(c_vu)

    for e in range(g.n_edges):
        u, v, w = int(g.edge_u[e]), int(g.edge_v[e]), float(g.edge_weight[e])
        if g.directed:
            add_pair(u, v, w, 0.0)
        else:
            add_pair(u, v, w, w)
    return adj, to, cap


def max_flow(g: Graph, s: int, t: int) -> float:
    """Exact max-flow from s to t by shortest augmenting paths."""
    n = g.n_vertices
    s, t = int(s), int(t)
    if not (0 <= s < n and 0 <= t < n):
        raise GraphError(f"flow endpoints out of range: {s}, {t}")
    if s == t:
        raise GraphError("flow source and sink must differ")
    adj, to, cap = _residual_arcs(g)
    total = 0.0
    while True:
        parent_arc = [-1] * n
        parent_arc[s] = -2
        queue = deque([s])
        while queue and parent_arc[t] == -1:
            v = queue.popleft()
            for a in adj[v]:
                w = to[a]
                if parent_arc[w] == -1 and cap[a] > 0.0:
                    parent_arc[w] = a
                    queue.append(w)
        if parent_arc[t] == -1:
            return total
        bottleneck = np.inf
        v = t
        while v != s:
            a = parent_arc[v]
            bottleneck = min(bottleneck, cap[a])
            v = to[a ^ 1]
        v = t
        while v != s:
            a = parent_arc[v]
            cap[a] -= bottleneck
            cap[a ^ 1] += bottleneck
            v = to[a ^ 1]
        total += bottleneck


def _capacity_scale(*graphs) -> int:
    """One integer scale for a set of graphs so that scaled capacities and
    any single s-t flow stay far from the int32 limit."""
    if all(not g.weighted for g in graphs):
        return 1
    max_cut = 1.0
    for g in graphs:
        if g.n_arcs:
            max_cut = max(max_cut, float(g.weighted_degrees().max()))
    scale = int(min(10**6, (2**30) / max_cut))
    return max(scale, 1)


def _capacity_matrix(g: Graph, scale: int) -> csr_matrix:
    m = g.to_scipy_csr().copy()
    data = np.round(m.data * scale)
    data[data < 1] = 1  # keep positive capacities positive after rounding
    m.data = data
    return m.astype(np.int32)


def flow_stretch(g_sparse: Graph, g_full: Graph, n_pairs=1_000, seed=None, pairs=None) -> MetricReport:
    """Mean of flow_sparse(s,t)/flow_full(s,t) over sampled pairs with
    positive full-graph flow; pairs whose sparse flow is zero are excluded
    and counted in aux["zero_flow_fraction"]. Reweighted selections can
    legitimately push the ratio above 1."""
    check_same_vertex_set(g_sparse, g_full)
    if pairs is None:
        rng = ensure_seed(seed, ("flow",)).generator()
        pairs = sample_reachable_pairs(g_full, n_pairs, rng)  # reachable == positive flow
    ss, tt = pairs
    if not len(ss):
        return make_report("flow_stretch", g_sparse, 1.0, n_pairs=0, zero_flow_fraction=0.0)
    scale = _capacity_scale(g_sparse, g_full)
    full_m = _capacity_matrix(g_full, scale)
    sparse_m = _capacity_matrix(g_sparse, scale) if g_sparse.n_arcs else None
    ratios = []
    zero = 0
    for s, t in zip(ss, tt):
        fv = csgraph.maximum_flow(full_m, int(s), int(t)).flow_value
        if fv <= 0:
            zero += 1
            continue
        sv = csgraph.maximum_flow(sparse_m, int(s), int(t)).flow_value if sparse_m is not None else 0
        if sv <= 0:
            zero += 1
            continue
        ratios.append(sv / fv)
    if not ratios:
        return make_report(
            "flow_stretch", g_sparse, 0.0, n_pairs=len(ss), zero_flow_fraction=zero / len(ss)
        )
    return make_report(
        "flow_stretch", g_sparse, float(np.mean(ratios)),
        n_pairs=len(ss), zero_flow_fraction=zero / len(ss),
    )
