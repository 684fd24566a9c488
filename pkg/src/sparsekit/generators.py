"""Small graph builders used by tests, demos, and benchmarks.

The named fixtures (triangle, star, paths, the bridged double triangle) match
the worked examples in the test suite; the random families cover Erdos-Renyi
style G(n,p) graphs and preferential-attachment graphs with power-law degree
tails.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph
from .seeding import RunSeed, ensure_seed


def triangle() -> Graph:
    return Graph.from_edges(3, [0, 1, 0], [1, 2, 2], directed=False)


def path_graph(n: int) -> Graph:
    u = np.arange(n - 1)
    return Graph.from_edges(n, u, u + 1, directed=False)


def star_graph(n: int) -> Graph:
    """Vertex 0 joined to 1..n-1."""
    v = np.arange(1, n)
    return Graph.from_edges(n, np.zeros(n - 1, dtype=np.int64), v, directed=False)


def complete_graph(n: int, directed=False) -> Graph:
    u, v = np.triu_indices(n, k=1)
    if directed:
        u, v = np.concatenate([u, v]), np.concatenate([v, u])
    return Graph.from_edges(n, u, v, directed=directed)


def two_triangles() -> Graph:
    """Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.

    7 edges total; the bridge has canonical edge id 3.
    """
    u = [0, 0, 1, 2, 3, 3, 4]
    v = [1, 2, 2, 3, 4, 5, 5]
    return Graph.from_edges(6, u, v, directed=False)


def disjoint_triangles() -> Graph:
    """Two triangles with no connection between them."""
    u = [0, 0, 1, 3, 3, 4]
    v = [1, 2, 2, 4, 5, 5]
    return Graph.from_edges(6, u, v, directed=False)


def gnp_random_graph(n, p, seed, directed=False, weighted=False, connect=False) -> Graph:
    """G(n,p): each possible edge present independently with probability p.

    connect=True unions in a random spanning tree so the result is connected
    (weakly connected for directed graphs). Weighted graphs draw weights
    uniformly from [0.5, 2.0).
    """
    rng = ensure_seed(seed, ("gnp", n)).generator()
    u, v = np.triu_indices(n, k=1)
    if directed:
        u, v = np.concatenate([u, v]), np.concatenate([v, u])
    mask = rng.random(len(u)) < p
    u, v = u[mask], v[mask]
    if connect and n > 1:
        order = rng.permutation(n)
        attach = np.array([order[rng.integers(i)] for i in range(1, n)], dtype=np.int64)
        u = np.concatenate([u, order[1:]])
        v = np.concatenate([v, attach])
    w = rng.uniform(0.5, 2.0, size=len(u)) if weighted else None
    return Graph.from_edges(n, u, v, w, directed=directed, weighted=weighted)


def powerlaw_graph(n, m_attach, seed, weighted=False) -> Graph:
    """Preferential attachment: each new vertex attaches to m_attach existing
    vertices chosen proportionally to current degree. Degree distribution has
    a power-law tail."""
    if n < m_attach + 1:
        raise ValueError("need n > m_attach")
    rng = ensure_seed(seed, ("powerlaw", n)).generator()
    us, vs = [], []
    # endpoint pool: vertices appear once per incident edge
    pool = list(range(m_attach))
    for new in range(m_attach, n):
        chosen = set()
        while len(chosen) < m_attach:
            cand = int(pool[rng.integers(len(pool))])
            if cand != new:
                chosen.add(cand)
        for c in sorted(chosen):
            us.append(new)
            vs.append(c)
            pool.append(new)
            pool.append(c)
    w = rng.uniform(0.5, 2.0, size=len(us)) if weighted else None
    return Graph.from_edges(n, us, vs, w, directed=False, weighted=weighted)


def random_tree(n, seed, weighted=False) -> Graph:
    """Uniform-ish random labeled tree via random attachment."""
    rng = ensure_seed(seed, ("tree", n)).generator()
    u = np.arange(1, n)
    v = np.array([rng.integers(i) for i in range(1, n)], dtype=np.int64)
    w = rng.uniform(0.5, 2.0, size=n - 1) if weighted else None
    return Graph.from_edges(n, u, v, w, directed=False, weighted=weighted)
