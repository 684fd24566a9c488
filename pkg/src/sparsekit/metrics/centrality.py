"""Centrality vectors: sampled betweenness, closeness, eigenvector, Katz,
PageRank, and the top-k precision comparator.

All functions return plain numpy vectors indexed by vertex id; the sweep
harness turns (full, sparse) vector pairs into top-k precision reports.
Directed graphs rank by incoming importance where the definition calls for
it: eigenvector centrality uses the left eigenvector, Katz counts walks
ending at the vertex, PageRank distributes along arc direction.
"""

from __future__ import annotations

import heapq
from collections import deque

import numpy as np

from ..graph import Graph, GraphError
from ..seeding import ensure_seed
from .base import distance_rows, sample_vertices

_REL_TOL = 1e-12  # path-length equality slack for weighted Brandes


def _brandes_unweighted(g: Graph, source: int, scores: np.ndarray) -> None:
    n = g.n_vertices
    sigma = np.zeros(n)
    dist = np.full(n, -1, dtype=np.int64)
    preds = [[] for _ in range(n)]
    sigma[source] = 1.0
    dist[source] = 0
    order = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in g.neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(int(w))
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = np.zeros(n)
    for w in reversed(order):
        for v in preds[w]:
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
        if w != source:
            scores[w] += delta[w]


def _brandes_weighted(g: Graph, source: int, scores: np.ndarray) -> None:
    n = g.n_vertices
    sigma = np.zeros(n)
    dist = np.full(n, np.inf)
    preds = [[] for _ in range(n)]
    sigma[source] = 1.0
    dist[source] = 0.0
    order = []
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        sl = g.arc_slice(v)
        for w, wt in zip(g.targets[sl], g.weights[sl]):
            w = int(w)
            nd = d + wt
            slack = _REL_TOL * max(1.0, abs(nd))
            if nd < dist[w] - slack:
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif abs(nd - dist[w]) <= slack and not done[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = np.zeros(n)
    for w in reversed(order):
        for v in preds[w]:
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
        if w != source:
            scores[w] += delta[w]


def betweenness_sampled(g: Graph, n_pivots=500, seed=None) -> np.ndarray:
    """Pivot-sampled Brandes betweenness, scaled by n/n_pivots.

    With n_pivots >= n every vertex is a pivot and the result is exact.
    Undirected scores count unordered pairs (halved), directed count ordered;
    endpoints are never credited.
    """
    n = g.n_vertices
    scores = np.zeros(n)
    if n == 0 or g.n_edges == 0:
        return scores
    if n_pivots >= n:
        pivots = np.arange(n, dtype=np.int64)
    else:
        rng = ensure_seed(seed, ("betweenness",)).generator()
        pivots = sample_vertices(g, n_pivots, rng)
    sweep = _brandes_weighted if g.weighted else _brandes_unweighted
    for s in pivots:
        sweep(g, int(s), scores)
    scores *= n / len(pivots)
    if not g.directed:
        scores /= 2.0
    return scores


def closeness(g: Graph) -> np.ndarray:
    """C(v) = 1 / sum of distances from v to its reachable vertices; 0 when
    nothing else is reachable."""
    n = g.n_vertices
    out = np.zeros(n)
    chunk = 256
    for lo in range(0, n, chunk):
        batch = np.arange(lo, min(lo + chunk, n), dtype=np.int64)
        rows = distance_rows(g, batch)
        rows[~np.isfinite(rows)] = 0.0  # unreachable contributes nothing
        sums = rows.sum(axis=1)
        pos = sums > 0
        out[batch[pos]] = 1.0 / sums[pos]
    return out


def eigenvector_centrality(g: Graph, tol=1e-9, max_iter=1000) -> np.ndarray:
    """Dominant-eigenvector scores by power iteration, L2-normalized.

    Directed graphs use the left eigenvector (prestige flows along arcs into
    the vertex). Iterating A + I keeps bipartite structures from
    oscillating without changing the eigenvector."""
    n = g.n_vertices
    if n == 0:
        return np.zeros(0)
    adj = g.to_scipy_csr()
    op = adj.T if g.directed else adj
    x = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(max_iter):
        nxt = op @ x + x
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return x
        nxt /= norm
        delta = np.linalg.norm(nxt - x)
        x = nxt
        if delta < tol:
            return x
    raise GraphError(f"eigenvector centrality did not converge (last delta {delta:.3e})")


def katz_centrality(g: Graph, tol=1e-9, max_iter=1000, alpha=None) -> np.ndarray:
    """Katz scores: sum over walk lengths k of alpha^k * (number of weighted
    walks of length k ending at the vertex), accumulated term by term until
    the increment drops below tol. alpha defaults to 1/(max degree + 1),
    which keeps the series convergent."""
    n = g.n_vertices
    if n == 0:
        return np.zeros(0)
    if alpha is None:
        max_deg = float(g.weighted_degrees().max()) if g.n_arcs else 0.0
        alpha = 1.0 / (max_deg + 1.0)
    adj_t = g.to_scipy_csr().T.tocsr()
    term = np.ones(n)
    total = np.zeros(n)
    for _ in range(max_iter):
        term = alpha * (adj_t @ term)
        total += term
        if np.max(np.abs(term)) < tol:
            return total
    raise GraphError("katz centrality did not converge; alpha too large?")


def pagerank(g: Graph, damping=0.85, tol=1e-9, max_iter=10_000) -> np.ndarray:
    """PageRank with uniform teleport; dangling mass is spread uniformly.
    Weighted graphs split a vertex's rank across arcs in proportion to
    weight. Scores sum to 1."""
    n = g.n_vertices
    if n == 0:
        return np.zeros(0)
    adj_t = g.to_scipy_csr().T.tocsr()
    out_w = g.weighted_degrees()
    dangling = out_w == 0.0
    inv_out = np.where(dangling, 0.0, 1.0 / np.where(out_w == 0.0, 1.0, out_w))
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        spread = adj_t @ (x * inv_out)
        loose = x[dangling].sum()
        nxt = damping * (spread + loose / n) + (1.0 - damping) / n
        delta = np.abs(nxt - x).sum()
        x = nxt
        if delta < tol:
            return x / x.sum()
    raise GraphError(f"pagerank did not converge (last delta {delta:.3e})")


def topk_precision(full_scores, sparse_scores, k=100) -> float:
    """|top-k(full) intersect top-k(sparse)| / k, score ties broken by
    ascending vertex id."""
    full_scores = np.asarray(full_scores, dtype=np.float64)
    sparse_scores = np.asarray(sparse_scores, dtype=np.float64)
    if full_scores.shape != sparse_scores.shape:
        raise GraphError("centrality vectors must have equal length")
    n = len(full_scores)
    if k > n:
        raise GraphError(f"k={k} exceeds vector length {n}")
    ids = np.arange(n)
    top_full = set(ids[np.lexsort((ids, -full_scores))][:k].tolist())
    top_sparse = set(ids[np.lexsort((ids, -sparse_scores))][:k].tolist())
    return len(top_full & top_sparse) / k
