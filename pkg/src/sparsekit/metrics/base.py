"""Shared metric plumbing: report records, sampling profiles, and batched
shortest-path helpers built on scipy's csgraph routines.

Metrics never mutate graphs. Anything sampled (vertex pairs, sources,
probe vectors) draws from a RunSeed-derived generator so a whole sweep is
reproducible and independent of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from ..graph import Graph, GraphError


@dataclass
class MetricReport:
    """One metric evaluation: a scalar value plus auxiliary numbers
    (sample counts, excluded fractions, stddev once aggregated) and the run
    metadata the sweep harness fills in."""

    metric: str
    graph_id: str
    value: float
    aux: dict = field(default_factory=dict)
    sparsifier: object = None
    target_rho: float | None = None
    achieved_rho: float | None = None
    run_index: int = 0


def make_report(metric: str, g: Graph, value, **aux) -> MetricReport:
    return MetricReport(metric=metric, graph_id=g.graph_id, value=float(value), aux=dict(aux))


@dataclass(frozen=True)
class SamplingProfile:
    """Sampling budgets for the approximate metrics.

    "desk" keeps every protocol identical but tractable on a laptop;
    "paper" restores the full published budgets.
    """

    name: str
    spsp_pairs: int
    ecc_sources: int
    flow_pairs: int
    betweenness_pivots: int
    unreachable_pairs: int
    diameter_restarts: int = 10
    qf_vectors: int = 100
    topk: int = 100


PROFILES = {
    "desk": SamplingProfile("desk", 10_000, 200, 1_000, 100, 10_000),
    "paper": SamplingProfile("paper", 100_000, 1_000, 100_000, 500, 100_000),
}


def get_profile(name) -> SamplingProfile:
    if isinstance(name, SamplingProfile):
        return name
    if name not in PROFILES:
        raise GraphError(f"unknown sampling profile {name!r}; known: {', '.join(PROFILES)}")
    return PROFILES[name]


def check_same_vertex_set(g_sparse: Graph, g_full: Graph) -> None:
    if g_sparse.n_vertices != g_full.n_vertices:
        raise GraphError(
            f"vertex-set mismatch: {g_sparse.n_vertices} vs {g_full.n_vertices} vertices"
        )


# ---------------------------------------------------------------- distances


def distance_rows(g: Graph, sources) -> np.ndarray:
    """Shortest-path distances from each source to every vertex (np.inf when
    unreachable). BFS for unweighted graphs, Dijkstra otherwise. Both arc
    directions are already stored for undirected graphs, so the matrix is
    always traversed as directed."""
    sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    if g.n_arcs == 0:
        out = np.full((len(sources), g.n_vertices), np.inf)
        out[np.arange(len(sources)), sources] = 0.0
        return out
    return csgraph.dijkstra(
        g.to_scipy_csr(),
        directed=True,
        indices=sources,
        unweighted=not g.weighted,
    )


def pair_distances(g: Graph, sources, targets, chunk=256) -> np.ndarray:
    """d(s_i, t_i) for parallel index arrays, computed one source-chunk at a
    time to bound memory."""
    sources = np.asarray(sources, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    out = np.empty(len(sources))
    uniq = np.unique(sources)
    for lo in range(0, len(uniq), chunk):
        batch = uniq[lo : lo + chunk]
        rows = distance_rows(g, batch)
        pos = {int(s): i for i, s in enumerate(batch)}
        mask = np.isin(sources, batch)
        idx = np.flatnonzero(mask)
        row_idx = np.fromiter((pos[int(s)] for s in sources[idx]), dtype=np.int64, count=len(idx))
        out[idx] = rows[row_idx, targets[idx]]
    return out


def component_labels(g: Graph) -> np.ndarray:
    """Weakly connected component label per vertex."""
    if g.n_arcs == 0:
        return np.arange(g.n_vertices, dtype=np.int64)
    _, labels = csgraph.connected_components(g.to_scipy_csr(), directed=g.directed, connection="weak")
    return labels


def _all_pairs(n: int, directed: bool):
    if directed:
        s, t = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        keep = s != t
        return s[keep].ravel(), t[keep].ravel()
    s, t = np.triu_indices(n, k=1)
    return s, t


def sample_reachable_pairs(g_full: Graph, n_pairs: int, rng, max_rounds=50):
    """Distinct vertex pairs (s != t) that are reachable in g_full.

    Unordered for undirected graphs, ordered for directed. When n_pairs
    covers every possible pair the enumeration is exhaustive; otherwise
    pairs are drawn uniformly, deduplicated in draw order, and filtered by
    full-graph reachability. May return fewer than n_pairs when the graph
    simply does not have that many reachable pairs.
    """
    n = g_full.n_vertices
    total = n * (n - 1) if g_full.directed else n * (n - 1) // 2
    if total <= 0 or n_pairs <= 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)

    if not g_full.directed:
        labels = component_labels(g_full)

    def reachable(ss, tt):
        if not g_full.directed:
            return labels[ss] == labels[tt]
        return np.isfinite(pair_distances(g_full, ss, tt))

    if n_pairs >= total:
        ss, tt = _all_pairs(n, g_full.directed)
        keep = reachable(ss, tt)
        return ss[keep], tt[keep]

    seen = set()
    out_s, out_t = [], []
    for _ in range(max_rounds):
        need = n_pairs - len(out_s)
        if need <= 0:
            break
        draw = max(2 * need, 64)
        ss = rng.integers(n, size=draw)
        tt = rng.integers(n, size=draw)
        if not g_full.directed:
            ss, tt = np.minimum(ss, tt), np.maximum(ss, tt)
        valid = ss != tt
        ss, tt = ss[valid], tt[valid]
        fresh = np.ones(len(ss), dtype=bool)
        for i, (a, b) in enumerate(zip(ss, tt)):
            key = (int(a), int(b))
            if key in seen:
                fresh[i] = False
            else:
                seen.add(key)
        ss, tt = ss[fresh], tt[fresh]
        if not len(ss):
            continue
        keep = reachable(ss, tt)
        out_s.extend(int(x) for x in ss[keep])
        out_t.extend(int(x) for x in tt[keep])
    ss = np.array(out_s[:n_pairs], dtype=np.int64)
    tt = np.array(out_t[:n_pairs], dtype=np.int64)
    return ss, tt


def sample_vertices(g: Graph, n_sources: int, rng) -> np.ndarray:
    """Distinct vertices, uniformly at random (all of them if n_sources >= n)."""
    n = g.n_vertices
    if n_sources >= n:
        return np.arange(n, dtype=np.int64)
    return np.sort(rng.choice(n, size=n_sources, replace=False)).astype(np.int64)


def total_degrees(g: Graph) -> np.ndarray:
    """Unweighted degree; in-degree plus out-degree for directed graphs."""
    deg = g.degrees().copy()
    if g.directed:
        deg += np.bincount(g.targets, minlength=g.n_vertices)
    return deg
