"""Edge sparsifiers.

Every sparsifier maps (Graph, target prune rate, seed) to an EdgeSelection.
The prune rate rho is the fraction of edges removed, so a selection keeps
round((1-rho)*|E|) edges when the algorithm permits exact control ("fine"),
the closest attainable count for per-vertex rules ("coarse"), or a count
dictated purely by structure (spanning forest, spanner: "none").

Undirected graphs select logical edges (both arcs live or die together);
directed graphs select arcs, and every per-vertex rule ranks out-neighbors.
Random choices flow from a RunSeed, so results are reproducible and
independent of thread scheduling. Ties anywhere break by
(min endpoint, max endpoint, edge id), which the canonical edge-id order
encodes directly.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, make_selection
from .seeding import ensure_seed
from .similarity import jaccard_scores, scan_scores

_HUGE_RANK = np.iinfo(np.int64).max


def _check_rho(rho):
    rho = float(rho)
    if not (0.0 <= rho < 1.0):
        raise GraphError(f"prune rate must be in [0, 1), got {rho}")
    return rho


def keep_count(rho: float, n_edges: int) -> int:
    """Edges to keep at prune rate rho: round((1-rho)*|E|)."""
    return int(round((1.0 - rho) * n_edges))


def _top_by_score(g: Graph, scores: np.ndarray, rho: float, seed_label=""):
    """Keep the globally highest-scored (1-rho)|E| edges, ties by edge id."""
    k = keep_count(rho, g.n_edges)
    order = np.argsort(-scores, kind="stable")  # stable: equal scores fall back to id order
    return make_selection(g, order[:k], rho, seed=seed_label)


# ------------------------------------------------------------------- random


def random_sparsify(g: Graph, rho, seed=None):
    """Keep a uniform random subset of exactly round((1-rho)|E|) edges."""
    rho = _check_rho(rho)
    seed = ensure_seed(seed, ("random",))
    rng = seed.generator()
    k = keep_count(rho, g.n_edges)
    kept = rng.choice(g.n_edges, size=k, replace=False)
    return make_selection(g, kept, rho, seed=seed.label())


# --------------------------------------------------------------- k-neighbor


def _per_owner_ranks(g: Graph, sort_key_desc: np.ndarray) -> np.ndarray:
    """1-based rank of each arc within its source vertex's arc list, ordering
    arcs by sort_key_desc descending with ties by target id ascending."""
    owners = g.arc_sources()
    order = np.lexsort((g.targets, -sort_key_desc, owners))
    seg_start = np.repeat(g.offsets[:-1], g.degrees())
    ranks = np.empty(g.n_arcs, dtype=np.int64)
    ranks[order] = np.arange(g.n_arcs, dtype=np.int64) - seg_start
    return ranks + 1


def k_neighbor_sparsify(g: Graph, rho, seed=None, k=None):
    """Per-vertex weight-proportional sampling of up to k incident arcs.

    Every vertex of degree >= k ends up with at least k selected incident
    arcs; smaller vertices keep everything. When k is not given it is
    calibrated by dry-run counting so the achieved prune rate is the closest
    attainable to rho. Rates beyond the k=1 floor come back flagged
    "max_attainable".
    """
    rho = _check_rho(rho)
    seed = ensure_seed(seed, ("k_neighbor",))
    rng = seed.generator()
    m = g.n_edges
    if m == 0:
        return make_selection(g, [], rho, seed=seed.label())
    # exponential race: sorting Exp(1)/w ascending is a weight-proportional
    # draw without replacement within each vertex
    with np.errstate(divide="ignore"):
        keys = rng.exponential(size=g.n_arcs) / g.weights
    ranks = _per_owner_ranks(g, -keys)  # ascending keys == descending -keys
    edge_min_rank = np.full(m, _HUGE_RANK, dtype=np.int64)
    np.minimum.at(edge_min_rank, g.edge_ids, ranks)

    flags = ()
    if k is None:
        max_deg = int(g.degrees().max())
        counts = np.bincount(edge_min_rank, minlength=max_deg + 1)
        kept_by_k = np.cumsum(counts)[1:]  # index i -> kept edges at k=i+1
        rates = 1.0 - kept_by_k / m
        if rho > rates[0]:
            k = 1
            flags = ("max_attainable",)
        else:
            k = int(np.argmin(np.abs(rates - rho))) + 1  # first minimum: sparser side
    else:
        k = int(k)
        if k < 1:
            raise GraphError("k must be >= 1")
    kept = np.flatnonzero(edge_min_rank <= k)
    sel = make_selection(g, kept, rho, flags=flags, seed=seed.label())
    sel.params = {"k": k}
    return sel


# -------------------------------------------------------------- rank degree


def rank_degree_sparsify(g: Graph, rho, seed=None, seed_fraction=0.01, top_fraction=0.1):
    """Grow selections from random seed vertices toward high-degree neighbors.

    Each processed vertex contributes edges to the top fraction of its
    degree-ranked candidates (neighbors along still-unselected edges); the
    endpoints just reached queue up as new seeds. When the frontier drains
    before the target count is met, fresh seeds are drawn from untouched
    vertices, then from vertices that still have unselected edges.
    """
    rho = _check_rho(rho)
    seed = ensure_seed(seed, ("rank_degree",))
    rng = seed.generator()
    m = g.n_edges
    target = keep_count(rho, m)
    deg = g.degrees()
    selected = np.zeros(m, dtype=bool)
    n_sel = 0
    enqueued = np.zeros(g.n_vertices, dtype=bool)
    frontier = deque()

    def refill():
        untouched = np.flatnonzero(~enqueued)
        if len(untouched):
            want = max(1, round(seed_fraction * g.n_vertices))
            picks = rng.choice(untouched, size=min(want, len(untouched)), replace=False)
        else:
            remaining = np.flatnonzero(~selected)
            if not len(remaining):
                return False
            e = remaining[rng.integers(len(remaining))]
            picks = [g.edge_u[e]]
        for p in picks:
            enqueued[p] = True
            frontier.append(int(p))
        return True

    while n_sel < target:
        if not frontier:
            if not refill():
                break
            continue
        s = frontier.popleft()
        sl = g.arc_slice(s)
        eids = g.edge_ids[sl]
        tgts = g.targets[sl]
        avail = ~selected[eids]
        if not avail.any():
            continue
        eids, tgts = eids[avail], tgts[avail]
        order = np.lexsort((tgts, -deg[tgts]))  # degree desc, id asc
        take = max(1, round(top_fraction * len(tgts)))
        for i in order[:take]:
            e = int(eids[i])
            t = int(tgts[i])
            if not selected[e]:
                selected[e] = True
                n_sel += 1
            if not enqueued[t]:
                enqueued[t] = True
                frontier.append(t)
            if n_sel >= target:
                break

    sel = make_selection(g, np.flatnonzero(selected), rho, seed=seed.label())
    sel.params = {"seed_fraction": seed_fraction, "top_fraction": top_fraction}
    return sel


# ------------------------------------------------- threshold-calibrated pair


def _rank_rule_thresholds(g: Graph, sort_key_desc: np.ndarray) -> np.ndarray:
    """Per-edge survival thresholds for "keep arcs ranked <= ceil(deg^a)".

    An arc of rank r at a degree-d vertex survives parameter a iff
    ceil(d^a) >= r, i.e. iff a > log(r-1)/log(d); rank-1 arcs survive any
    a >= 0 and get threshold -1. An edge survives if any of its arcs does,
    so its threshold is the minimum over arcs.
    """
    ranks = _per_owner_ranks(g, sort_key_desc)
    deg_per_arc = g.degrees()[g.arc_sources()].astype(np.float64)
    tau = np.full(g.n_arcs, -1.0)
    above = ranks > 1  # implies owner degree >= 2
    tau[above] = np.log(ranks[above] - 1.0) / np.log(deg_per_arc[above])
    edge_tau = np.full(g.n_edges, np.inf)
    np.minimum.at(edge_tau, g.edge_ids, tau)
    return edge_tau


def _calibrate_rank_rule(g: Graph, edge_tau: np.ndarray, rho: float):
    """Pick the parameter value whose achieved rate is closest to rho.

    Candidate rates are exactly the jumps of the survival function, so this
    is a full dry-run count over every attainable rate. Returns
    (kept_ids, param, flags)."""
    m = g.n_edges
    uniq, counts = np.unique(edge_tau, return_counts=True)
    kept_cum = np.cumsum(counts)
    rates = 1.0 - kept_cum / m
    flags = ()
    if rho > rates[0] + 1e-12:
        idx = 0
        flags = ("max_attainable",)
    else:
        idx = int(np.argmin(np.abs(rates - rho)))  # ties resolve to the sparser side
    if uniq[idx] < 0:
        param = 0.0
    elif idx + 1 < len(uniq):
        param = float((uniq[idx] + uniq[idx + 1]) / 2.0)
    else:
        param = float((uniq[idx] + 1.0) / 2.0)
    kept = np.flatnonzero(edge_tau < param) if param > 0 else np.flatnonzero(edge_tau < 0)
    return kept, param, flags


def local_degree_sparsify(g: Graph, rho, alpha=None):
    """Keep each vertex's arcs to its ceil(deg(v)^alpha) highest-degree
    neighbors (ties by neighbor id). Deterministic; alpha is calibrated to
    the achievable rate closest to rho unless given explicitly. Every vertex
    keeps at least one arc, which caps the attainable prune rate."""
    rho = _check_rho(rho)
    if g.n_edges == 0:
        return make_selection(g, [], rho)
    key = g.degrees()[g.targets].astype(np.float64)
    edge_tau = _rank_rule_thresholds(g, key)
    if alpha is None:
        kept, alpha, flags = _calibrate_rank_rule(g, edge_tau, rho)
    else:
        alpha = float(alpha)
        if not (0.0 <= alpha <= 1.0):
            raise GraphError("alpha must lie in [0, 1]")
        kept = np.flatnonzero(edge_tau < alpha) if alpha > 0 else np.flatnonzero(edge_tau < 0)
        flags = ()
    sel = make_selection(g, kept, rho, flags=flags)
    sel.params = {"alpha": alpha}
    return sel


def l_spar_sparsify(g: Graph, rho, c=None):
    """Keep each vertex's arcs to its ceil(deg(v)^c) most Jaccard-similar
    neighbors (ties by neighbor id). Deterministic, coarse rate control."""
    rho = _check_rho(rho)
    if g.n_edges == 0:
        return make_selection(g, [], rho)
    scores = jaccard_scores(g).scores
    edge_tau = _rank_rule_thresholds(g, scores[g.edge_ids])
    if c is None:
        kept, c, flags = _calibrate_rank_rule(g, edge_tau, rho)
    else:
        c = float(c)
        if not (0.0 <= c <= 1.0):
            raise GraphError("c must lie in [0, 1]")
        kept = np.flatnonzero(edge_tau < c) if c > 0 else np.flatnonzero(edge_tau < 0)
        flags = ()
    sel = make_selection(g, kept, rho, flags=flags)
    sel.params = {"c": c}
    return sel


# ---------------------------------------------------------- spanning forest


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def spanning_forest(g: Graph):
    """Kruskal minimum-weight spanning forest: acyclic, same components as g,
    exactly n - #components edges. No prune-rate control."""
    if g.directed:
        raise GraphError("spanning forest requires an undirected graph")
    uf = _UnionFind(g.n_vertices)
    order = np.lexsort((np.arange(g.n_edges), g.edge_weight))
    kept = [int(e) for e in order if uf.union(int(g.edge_u[e]), int(g.edge_v[e]))]
    return make_selection(g, kept, None)


# ----------------------------------------------------------------- t-spanner


def _bounded_dijkstra(adj, source, sink, cutoff):
    """Distance from source to sink in the adjacency-list graph, or inf if it
    exceeds cutoff. Stops as soon as the frontier passes the cutoff."""
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > cutoff:
            return np.inf
        if v == sink:
            return d
        if d > dist.get(v, np.inf):
            continue
        for w, nbr in adj[v]:
            nd = d + w
            if nd <= cutoff and nd < dist.get(nbr, np.inf):
                dist[nbr] = nd
                heapq.heappush(heap, (nd, nbr))
    return np.inf


def t_spanner(g: Graph, t=2.0):
    """Greedy spanner: scan edges by nondecreasing weight and keep any whose
    endpoints are further than t*w apart in the spanner built so far.

    Guarantees d_spanner(u,v) <= t * d_g(u,v) for every vertex pair."""
    if g.directed:
        raise GraphError("t-spanner requires an undirected graph")
    t = float(t)
    if t <= 1.0:
        raise GraphError(f"stretch factor t must exceed 1, got {t}")
    order = np.lexsort((np.arange(g.n_edges), g.edge_v, g.edge_u, g.edge_weight))
    adj = [[] for _ in range(g.n_vertices)]
    kept = []
    for e in order:
        u, v, w = int(g.edge_u[e]), int(g.edge_v[e]), float(g.edge_weight[e])
        bound = t * w
        if _bounded_dijkstra(adj, u, v, bound) > bound * (1.0 + 1e-12):
            kept.append(int(e))
            adj[u].append((w, v))
            adj[v].append((w, u))
    sel = make_selection(g, kept, None)
    sel.params = {"t": t}
    return sel


# --------------------------------------------------------------- forest fire


def forest_fire_sparsify(g: Graph, rho, seed=None, p_burn=0.7):
    """Collect edges by burning from random ignition vertices.

    Each burning vertex spreads along a geometric(1-p_burn) number of arcs to
    vertices not yet visited by the current fire; traversed edges join the
    selection. Fires restart until (1-rho)|E| distinct edges are collected.
    If many consecutive fires make no progress the selection returns early
    with a "stagnated" flag.
    """
    rho = _check_rho(rho)
    p_burn = float(p_burn)
    if not (0.0 < p_burn < 1.0):
        raise GraphError("p_burn must lie strictly between 0 and 1")
    seed = ensure_seed(seed, ("forest_fire",))
    rng = seed.generator()
    m = g.n_edges
    # stop once the real-valued target is crossed, so tiny graphs still keep
    # an edge at any rho < 1
    target = max(0, int(np.ceil((1.0 - rho) * m - 1e-9)))
    selected = np.zeros(m, dtype=bool)
    n_sel = 0
    stamp = np.full(g.n_vertices, -1, dtype=np.int64)
    flags = ()
    stagnant = 0
    stagnation_limit = max(200, 4 * g.n_vertices)
    fire = 0
    while n_sel < target:
        before = n_sel
        start = int(rng.integers(g.n_vertices))
        stamp[start] = fire
        queue = deque([start])
        while queue and n_sel < target:
            v = queue.popleft()
            n_burn = int(rng.geometric(1.0 - p_burn)) - 1
            if n_burn <= 0:
                continue
            sl = g.arc_slice(v)
            tgts = g.targets[sl]
            eids = g.edge_ids[sl]
            cand = np.flatnonzero(stamp[tgts] != fire)
            if not len(cand):
                continue
            picks = rng.choice(cand, size=min(n_burn, len(cand)), replace=False)
            for i in picks:
                e = int(eids[i])
                w = int(tgts[i])
                if not selected[e]:
                    selected[e] = True
                    n_sel += 1
                stamp[w] = fire
                queue.append(w)
                if n_sel >= target:
                    break
        fire += 1
        if n_sel == before:
            stagnant += 1
            if stagnant >= stagnation_limit:
                flags = ("stagnated",)
                break
        else:
            stagnant = 0
    sel = make_selection(g, np.flatnonzero(selected), rho, flags=flags, seed=seed.label())
    sel.params = {"p_burn": p_burn}
    return sel


# ------------------------------------------------------- score-ranked family


def g_spar_sparsify(g: Graph, rho):
    """Keep the globally top (1-rho)|E| edges by Jaccard score."""
    rho = _check_rho(rho)
    return _top_by_score(g, jaccard_scores(g).scores, rho)


def scan_sparsify(g: Graph, rho):
    """Keep the globally top (1-rho)|E| edges by SCAN score."""
    rho = _check_rho(rho)
    return _top_by_score(g, scan_scores(g).scores, rho)


def local_similarity_sparsify(g: Graph, rho):
    """Rank each vertex's arcs by Jaccard score, convert rank r at a
    degree-d vertex into 1 - log(r)/log(d), score each edge by its best
    endpoint, and keep the global top (1-rho)|E|. Exact rate; deterministic.
    Degree-1 vertices score their only edge 1."""
    rho = _check_rho(rho)
    if g.n_edges == 0:
        return make_selection(g, [], rho)
    jac = jaccard_scores(g).scores
    ranks = _per_owner_ranks(g, jac[g.edge_ids])
    deg_per_arc = g.degrees()[g.arc_sources()].astype(np.float64)
    arc_score = np.ones(g.n_arcs, dtype=np.float64)
    above = ranks > 1
    arc_score[above] = 1.0 - np.log(ranks[above]) / np.log(deg_per_arc[above])
    edge_score = np.full(g.n_edges, -np.inf)
    np.maximum.at(edge_score, g.edge_ids, arc_score)
    return _top_by_score(g, edge_score, rho)


# ------------------------------------------------------------------ registry


@dataclass
class SparsifierSpec:
    """Declared capabilities of one sparsifier kind.

    prune_rate_control: "fine" hits round((1-rho)|E|) within one edge,
    "coarse" lands on the closest attainable rate, "none" ignores rho.
    directed_ok=False means directed inputs must be symmetrized first (the
    sweep harness does this automatically and tags the rows). weight_change
    marks the only family that rewrites surviving weights.
    """

    kind: str
    deterministic: bool
    prune_rate_control: str
    directed_ok: bool
    weight_change: bool = False
    params: dict = field(default_factory=dict)

    def label(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.kind}({inner})"


_REGISTRY = {
    "random": SparsifierSpec("random", False, "fine", True),
    "k_neighbor": SparsifierSpec("k_neighbor", False, "coarse", True),
    "rank_degree": SparsifierSpec("rank_degree", False, "coarse", True),
    "local_degree": SparsifierSpec("local_degree", True, "coarse", True),
    "spanning_forest": SparsifierSpec("spanning_forest", True, "none", False),
    "t_spanner": SparsifierSpec("t_spanner", True, "none", False),
    "forest_fire": SparsifierSpec("forest_fire", False, "coarse", True),
    "l_spar": SparsifierSpec("l_spar", True, "coarse", True),
    "g_spar": SparsifierSpec("g_spar", True, "fine", True),
    "local_similarity": SparsifierSpec("local_similarity", True, "coarse", True),
    "scan": SparsifierSpec("scan", True, "fine", True),
    "er_weighted": SparsifierSpec("er_weighted", False, "fine", False, weight_change=True),
    "er_unweighted": SparsifierSpec("er_unweighted", False, "fine", False),
}

_ALLOWED_PARAMS = {
    "random": set(),
    "k_neighbor": {"k"},
    "rank_degree": {"seed_fraction", "top_fraction"},
    "local_degree": {"alpha"},
    "spanning_forest": set(),
    "t_spanner": {"t"},
    "forest_fire": {"p_burn"},
    "l_spar": {"c"},
    "g_spar": set(),
    "local_similarity": set(),
    "scan": set(),
    "er_weighted": {"epsilon"},
    "er_unweighted": {"epsilon"},
}

SPARSIFIER_KINDS = tuple(_REGISTRY)


def sparsifier_spec(kind: str, **params) -> SparsifierSpec:
    """The declared SparsifierSpec for a kind, with params merged in."""
    if kind not in _REGISTRY:
        raise GraphError(f"unknown sparsifier {kind!r}; known: {', '.join(_REGISTRY)}")
    unknown = set(params) - _ALLOWED_PARAMS[kind]
    if unknown:
        raise GraphError(f"{kind} does not accept params {sorted(unknown)}")
    base = _REGISTRY[kind]
    return SparsifierSpec(
        kind=base.kind,
        deterministic=base.deterministic,
        prune_rate_control=base.prune_rate_control,
        directed_ok=base.directed_ok,
        weight_change=base.weight_change,
        params=dict(params),
    )


def sparsify(g: Graph, kind: str, rho=None, seed=None, resistances=None, **params):
    """Dispatch to a sparsifier by kind name.

    rho is required except for spanning_forest and t_spanner (which have no
    rate control). Directed graphs are rejected for undirected-only kinds;
    symmetrize first. resistances feeds a precomputed table to the ER kinds.
    """
    spec = sparsifier_spec(kind, **params)
    if g.directed and not spec.directed_ok:
        raise GraphError(f"{kind} requires undirected input; symmetrize the graph first")
    if spec.prune_rate_control != "none" and rho is None:
        raise GraphError(f"{kind} needs a target prune rate")
    p = spec.params
    if kind == "random":
        return random_sparsify(g, rho, seed)
    if kind == "k_neighbor":
        return k_neighbor_sparsify(g, rho, seed, k=p.get("k"))
    if kind == "rank_degree":
        return rank_degree_sparsify(
            g, rho, seed,
            seed_fraction=p.get("seed_fraction", 0.01),
            top_fraction=p.get("top_fraction", 0.1),
        )
    if kind == "local_degree":
        return local_degree_sparsify(g, rho, alpha=p.get("alpha"))
    if kind == "spanning_forest":
        return spanning_forest(g)
    if kind == "t_spanner":
        return t_spanner(g, t=p.get("t", 2.0))
    if kind == "forest_fire":
        return forest_fire_sparsify(g, rho, seed, p_burn=p.get("p_burn", 0.7))
    if kind == "l_spar":
        return l_spar_sparsify(g, rho, c=p.get("c"))
    if kind == "g_spar":
        return g_spar_sparsify(g, rho)
    if kind == "local_similarity":
        return local_similarity_sparsify(g, rho)
    if kind == "scan":
        return scan_sparsify(g, rho)
    # er_weighted / er_unweighted
    from .resistance import effective_resistances, er_sparsify

    rt = resistances
    if rt is None:
        rt = effective_resistances(g, epsilon=p.get("epsilon", 0.1), seed=seed)
    return er_sparsify(g, rho, seed, reweight=(kind == "er_weighted"), resistances=rt)
