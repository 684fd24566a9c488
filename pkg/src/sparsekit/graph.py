"""Immutable CSR graphs, edge-list ingestion, preprocessing, and selections.

A Graph stores arcs in compressed sparse row form. Undirected graphs keep two
arcs per edge (one per direction) sharing a single logical edge id; directed
graphs keep one arc per edge. Logical edges are numbered canonically by
(min endpoint, max endpoint, input order), so edge ids are reproducible for a
given input edge list and selections persisted by one run can be replayed by
another.
"""

from __future__ import annotations

import gzip
import hashlib
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class GraphError(ValueError):
    """Raised for malformed inputs or contract violations."""


@dataclass(eq=False)
class Graph:
    """Immutable graph in CSR form.

    Attributes:
        n_vertices: number of vertices (ids 0..n_vertices-1).
        directed: arc direction is meaningful.
        weighted: weights carry information; unweighted graphs store all 1.0.
        offsets: int64 array of length n_vertices+1; arcs of vertex v live in
            [offsets[v], offsets[v+1]).
        targets: int64 arc target ids, sorted within each vertex's slice.
        weights: float64 arc weights, parallel to targets.
        edge_ids: int64 logical edge id per arc; an undirected edge's two arcs
            share one id.
        edge_u, edge_v, edge_weight: per logical edge (indexed by edge id);
            for undirected graphs edge_u < edge_v.
    """

    n_vertices: int
    directed: bool
    weighted: bool
    offsets: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    edge_ids: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_weight: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    # ------------------------------------------------------------------ build

    @classmethod
    def from_edges(cls, n_vertices, u, v, w=None, directed=False, weighted=False):
        """Build a Graph from parallel endpoint arrays.

        Self-loops are dropped. Duplicate edges (ordered pairs for directed
        graphs, unordered for undirected) collapse to their first occurrence,
        keeping the first weight. Edge ids are assigned by sorting on
        (min endpoint, max endpoint, first occurrence).
        """
        n_vertices = int(n_vertices)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise GraphError("endpoint arrays differ in length")
        if w is None:
            w = np.ones(len(u), dtype=np.float64)
        else:
            w = np.asarray(w, dtype=np.float64)
            if w.shape != u.shape:
                raise GraphError("weight array length mismatch")
        if len(u) and (u.min() < 0 or v.min() < 0):
            raise GraphError("negative vertex id")
        if len(u) and n_vertices <= max(u.max(), v.max()):
            raise GraphError("vertex id out of range")
        if np.any(w < 0):
            raise GraphError("negative edge weight")
        if not weighted:
            w = np.ones(len(u), dtype=np.float64)

        keep = u != v  # drop self-loops
        u, v, w = u[keep], v[keep], w[keep]

        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        if directed:
            dedup_key = u * n_vertices + v if n_vertices else u
        else:
            dedup_key = lo * n_vertices + hi if n_vertices else lo
        # first occurrence of each key wins
        _, first_idx = np.unique(dedup_key, return_index=True)
        first_idx.sort()
        u, v, w, lo, hi = u[first_idx], v[first_idx], w[first_idx], lo[first_idx], hi[first_idx]

        # canonical edge order: (min endpoint, max endpoint, input order)
        order = np.lexsort((np.arange(len(u)), hi, lo))
        edge_u = u[order] if directed else lo[order]
        edge_v = v[order] if directed else hi[order]
        edge_weight = w[order]
        m = len(edge_u)

        if directed:
            arc_src = edge_u
            arc_dst = edge_v
            arc_w = edge_weight
            arc_eid = np.arange(m, dtype=np.int64)
        else:
            arc_src = np.concatenate([edge_u, edge_v])
            arc_dst = np.concatenate([edge_v, edge_u])
            arc_w = np.concatenate([edge_weight, edge_weight])
            arc_eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2)

        csr_order = np.lexsort((arc_dst, arc_src))
        arc_src = arc_src[csr_order]
        arc_dst = arc_dst[csr_order]
        arc_w = arc_w[csr_order]
        arc_eid = arc_eid[csr_order]

        offsets = np.zeros(n_vertices + 1, dtype=np.int64)
        np.add.at(offsets, arc_src + 1, 1)
        np.cumsum(offsets, out=offsets)

        g = cls(
            n_vertices=n_vertices,
            directed=bool(directed),
            weighted=bool(weighted),
            offsets=offsets,
            targets=arc_dst,
            weights=arc_w,
            edge_ids=arc_eid,
            edge_u=edge_u,
            edge_v=edge_v,
            edge_weight=edge_weight,
        )
        for a in (g.offsets, g.targets, g.weights, g.edge_ids, g.edge_u, g.edge_v, g.edge_weight):
            a.setflags(write=False)
        return g

    # ------------------------------------------------------------- properties

    @property
    def n_edges(self) -> int:
        """Logical edge count (undirected edges counted once)."""
        return len(self.edge_u)

    @property
    def n_arcs(self) -> int:
        return len(self.targets)

    @property
    def graph_id(self) -> str:
        """Content hash identifying the graph (structure + weights + flags)."""
        if "graph_id" not in self._cache:
            h = hashlib.blake2b(digest_size=16)
            h.update(f"{self.n_vertices},{int(self.directed)},{int(self.weighted)};".encode())
            h.update(self.edge_u.tobytes())
            h.update(self.edge_v.tobytes())
            h.update(self.edge_weight.tobytes())
            self._cache["graph_id"] = h.hexdigest()
        return self._cache["graph_id"]

    def neighbors(self, v: int) -> np.ndarray:
        """Out-neighbor ids of v, sorted ascending."""
        return self.targets[self.offsets[v] : self.offsets[v + 1]]

    def arc_slice(self, v: int) -> slice:
        return slice(int(self.offsets[v]), int(self.offsets[v + 1]))

    def degrees(self) -> np.ndarray:
        """Out-degree per vertex (== degree for undirected graphs)."""
        return np.diff(self.offsets)

    def weighted_degrees(self) -> np.ndarray:
        """Sum of out-arc weights per vertex."""
        out = np.zeros(self.n_vertices, dtype=np.float64)
        np.add.at(out, self.arc_sources(), self.weights)
        return out

    def arc_sources(self) -> np.ndarray:
        """Source vertex per arc (expanded from offsets)."""
        if "arc_src" not in self._cache:
            src = np.repeat(np.arange(self.n_vertices, dtype=np.int64), self.degrees())
            src.setflags(write=False)
            self._cache["arc_src"] = src
        return self._cache["arc_src"]

    def to_scipy_csr(self) -> sp.csr_matrix:
        """Weighted adjacency as a scipy CSR matrix (cached)."""
        if "csr" not in self._cache:
            mat = sp.csr_matrix(
                (self.weights, self.targets, self.offsets),
                shape=(self.n_vertices, self.n_vertices),
            )
            self._cache["csr"] = mat
        return self._cache["csr"]

    def same_vertex_set(self, other: "Graph") -> bool:
        return self.n_vertices == other.n_vertices

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        w = "weighted" if self.weighted else "unweighted"
        return f"Graph({kind}, {w}, n={self.n_vertices}, m={self.n_edges})"


# ---------------------------------------------------------------- selections


@dataclass
class EdgeSelection:
    """A sparsifier's output: the kept edge subset on a parent graph.

    kept_edge_ids is a sorted unique int64 array of parent edge ids.
    new_weights, when present, maps every kept edge id to its new weight
    (only resistance-based reweighting produces it). flags carries
    machine-readable notes such as "max_attainable" when a requested rate was
    out of reach, seed records the RunSeed label for provenance, and params
    records calibrated or fixed sparsifier parameters (k, alpha, c, t, ...).
    """

    parent_graph_id: str
    kept_edge_ids: np.ndarray
    new_weights: dict | None
    target_prune_rate: float | None
    achieved_prune_rate: float
    flags: tuple = ()
    seed: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = np.unique(np.asarray(self.kept_edge_ids, dtype=np.int64))
        self.kept_edge_ids = ids
        if self.new_weights is not None:
            covered = set(self.new_weights)
            if covered != set(int(i) for i in ids):
                raise GraphError("new_weights must cover exactly the kept edges")

    @property
    def n_kept(self) -> int:
        return len(self.kept_edge_ids)


def make_selection(g: Graph, kept_ids, target_rho, new_weights=None, flags=(), seed=""):
    """Assemble an EdgeSelection against g, computing the achieved rate."""
    kept_ids = np.unique(np.asarray(kept_ids, dtype=np.int64))
    if len(kept_ids) and (kept_ids[0] < 0 or kept_ids[-1] >= g.n_edges):
        raise GraphError("unknown edge id in selection")
    achieved = 1.0 - len(kept_ids) / g.n_edges if g.n_edges else 0.0
    return EdgeSelection(
        parent_graph_id=g.graph_id,
        kept_edge_ids=kept_ids,
        new_weights=new_weights,
        target_prune_rate=None if target_rho is None else float(target_rho),
        achieved_prune_rate=achieved,
        flags=tuple(flags),
        seed=seed,
    )


def subgraph(g: Graph, sel: EdgeSelection) -> Graph:
    """Materialize the sparsified graph: same vertex set, kept edges only.

    Vertices are retained even if all their edges were pruned. new_weights is
    applied when present, which makes the result weighted.
    """
    if sel.parent_graph_id != g.graph_id:
        raise GraphError("selection does not belong to this graph")
    ids = sel.kept_edge_ids
    if len(ids) and (ids[0] < 0 or ids[-1] >= g.n_edges):
        raise GraphError("unknown edge id in selection")
    w = g.edge_weight[ids]
    weighted = g.weighted
    if sel.new_weights is not None:
        w = np.array([sel.new_weights[int(i)] for i in ids], dtype=np.float64)
        weighted = True
    return Graph.from_edges(
        g.n_vertices, g.edge_u[ids], g.edge_v[ids], w, directed=g.directed, weighted=weighted
    )


def save_selection(sel: EdgeSelection, path) -> None:
    """Write a selection as text: a header line naming the fields, a value
    line, then one kept edge id per line ("id,weight" when reweighted)."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("parent,target_rho,achieved_rho,seed\n")
        target = "" if sel.target_prune_rate is None else repr(float(sel.target_prune_rate))
        f.write(f"{sel.parent_graph_id},{target},{float(sel.achieved_prune_rate)!r},{sel.seed}\n")
        if sel.flags:
            f.write("# flags: " + ",".join(sel.flags) + "\n")
        if sel.new_weights is None:
            for i in sel.kept_edge_ids:
                f.write(f"{int(i)}\n")
        else:
            for i in sel.kept_edge_ids:
                f.write(f"{int(i)},{float(sel.new_weights[int(i)])!r}\n")


def load_selection(path) -> EdgeSelection:
    """Read a selection written by save_selection."""
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != "parent,target_rho,achieved_rho,seed":
            raise GraphError(f"{path}: not a selection file")
        fields = f.readline().strip().split(",")
        if len(fields) != 4:
            raise GraphError(f"{path}: malformed selection header values")
        parent, target, achieved, seed = fields
        flags = ()
        ids = []
        weights = {}
        reweighted = False
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("# flags:"):
                flags = tuple(t for t in line[len("# flags:") :].strip().split(",") if t)
                continue
            if "," in line:
                sid, sw = line.split(",", 1)
                ids.append(int(sid))
                weights[int(sid)] = float(sw)
                reweighted = True
            else:
                ids.append(int(line))
    return EdgeSelection(
        parent_graph_id=parent,
        kept_edge_ids=np.array(ids, dtype=np.int64),
        new_weights=weights if reweighted else None,
        target_prune_rate=float(target) if target else None,
        achieved_prune_rate=float(achieved),
        flags=flags,
        seed=seed,
    )


# -------------------------------------------------------------- prep report


@dataclass
class PrepReport:
    """What preprocessing did: isolated removals, the id remap, and how many
    reverse arcs symmetrization added (0 when it did not run)."""

    removed_isolated: int
    id_remap: dict
    symmetrized_added: int = 0


# --------------------------------------------------------------- operations


def load_edge_list(path, directed=False, weighted=False) -> Graph:
    """Parse a whitespace-separated edge list ("src dst [weight]").

    Lines starting with '#' are comments. Vertex ids are taken verbatim, so
    the result may contain isolated vertices until preprocess() runs.
    Duplicate edges keep their first weight; self-loops are dropped. A weight
    column on an unweighted load is ignored with a single summary warning.
    """
    opener = gzip.open if str(path).endswith(".gz") else open
    us, vs, ws = [], [], []
    ignored_weights = 0
    with opener(path, "rt", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise GraphError(f"{path}:{lineno}: expected 'src dst [weight]'")
            try:
                u = int(parts[0])
                v = int(parts[1])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: non-integer vertex id") from None
            if u < 0 or v < 0:
                raise GraphError(f"{path}:{lineno}: negative vertex id")
            w = 1.0
            if len(parts) >= 3:
                if weighted:
                    try:
                        w = float(parts[2])
                    except ValueError:
                        raise GraphError(f"{path}:{lineno}: bad weight {parts[2]!r}") from None
                    if not np.isfinite(w):
                        raise GraphError(f"{path}:{lineno}: non-finite weight")
                    if w < 0:
                        raise GraphError(f"{path}:{lineno}: negative weight")
                else:
                    ignored_weights += 1
            us.append(u)
            vs.append(v)
            ws.append(w)
    if ignored_weights:
        warnings.warn(
            f"{path}: ignored weight column on {ignored_weights} line(s); "
            "pass weighted=True to use it",
            stacklevel=2,
        )
    n = (max(max(us), max(vs)) + 1) if us else 0
    return Graph.from_edges(n, us, vs, ws, directed=directed, weighted=weighted)


def preprocess(g: Graph):
    """Drop isolated vertices and re-index the rest to 0..n'-1 (ascending by
    old id). Idempotent. Returns (new_graph, PrepReport)."""
    deg = np.zeros(g.n_vertices, dtype=np.int64)
    np.add.at(deg, g.edge_u, 1)
    np.add.at(deg, g.edge_v, 1)
    keep = np.flatnonzero(deg > 0)
    removed = g.n_vertices - len(keep)
    remap_arr = np.full(g.n_vertices, -1, dtype=np.int64)
    remap_arr[keep] = np.arange(len(keep), dtype=np.int64)
    new_g = Graph.from_edges(
        len(keep),
        remap_arr[g.edge_u],
        remap_arr[g.edge_v],
        g.edge_weight,
        directed=g.directed,
        weighted=g.weighted,
    )
    report = PrepReport(
        removed_isolated=int(removed),
        id_remap={int(old): int(new) for old, new in zip(keep, remap_arr[keep])},
    )
    return new_g, report


def symmetrize(g: Graph) -> Graph:
    """Make a directed graph undirected by adding each arc's reverse.

    When both (u,v) and (v,u) exist with different weights, the maximum wins.
    Calling this on an undirected graph warns and returns it unchanged.
    """
    if not g.directed:
        warnings.warn("symmetrize: graph is already undirected; no-op", stacklevel=2)
        return g
    lo = np.minimum(g.edge_u, g.edge_v)
    hi = np.maximum(g.edge_u, g.edge_v)
    if g.n_edges == 0:
        return Graph.from_edges(g.n_vertices, [], [], [], directed=False, weighted=g.weighted)
    key = lo * max(g.n_vertices, 1) + hi
    order = np.argsort(key, kind="stable")
    key_sorted = key[order]
    w_sorted = g.edge_weight[order]
    boundaries = np.flatnonzero(np.r_[True, key_sorted[1:] != key_sorted[:-1]])
    group_max = np.maximum.reduceat(w_sorted, boundaries)
    return Graph.from_edges(
        g.n_vertices,
        lo[order][boundaries],
        hi[order][boundaries],
        group_max,
        directed=False,
        weighted=g.weighted,
    )


def prepare(g: Graph, symmetrize_directed=False):
    """preprocess() plus optional symmetrization, with a combined PrepReport."""
    g2, report = preprocess(g)
    if symmetrize_directed and g2.directed:
        arcs_before = g2.n_arcs
        g2 = symmetrize(g2)
        report.symmetrized_added = int(2 * g2.n_edges - arcs_before)
    return g2, report


def connected_components(g: Graph) -> np.ndarray:
    """Component id per vertex, ignoring arc direction (weak components).

    Ids are renumbered by first occurrence, so labels are deterministic.
    """
    if g.n_vertices == 0:
        return np.zeros(0, dtype=np.int64)
    n_comp, labels = csgraph.connected_components(
        g.to_scipy_csr(), directed=g.directed, connection="weak"
    )
    # renumber by first appearance for a canonical labeling
    _, first = np.unique(labels, return_index=True)
    rank = {labels[i]: r for r, i in enumerate(np.sort(first))}
    return np.array([rank[c] for c in labels], dtype=np.int64)


def quadratic_form(g: Graph, x) -> float:
    """Sum over undirected edges of w_uv * (x_u - x_v)^2.

    Equals x^T L x for the graph Laplacian L = D - A.
    """
    if g.directed:
        raise GraphError("quadratic form requires an undirected graph")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n_vertices,):
        raise GraphError(f"vector length {x.shape} does not match {g.n_vertices} vertices")
    diff = x[g.edge_u] - x[g.edge_v]
    return float(np.sum(g.edge_weight * diff * diff))


# ----------------------------------------------------------------- file I/O


def save_edge_list(g: Graph, path, comments=()) -> None:
    """Write g as an edge list, with flag metadata in '#' header comments."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# directed={str(g.directed).lower()} weighted={str(g.weighted).lower()}\n")
        f.write(f"# n_vertices={g.n_vertices} n_edges={g.n_edges}\n")
        for c in comments:
            f.write(f"# {c}\n")
        if g.weighted:
            for u, v, w in zip(g.edge_u, g.edge_v, g.edge_weight):
                f.write(f"{u} {v} {float(w)!r}\n")
        else:
            for u, v in zip(g.edge_u, g.edge_v):
                f.write(f"{u} {v}\n")


def sniff_edge_list_flags(path):
    """Read directed/weighted flags from a '# directed=... weighted=...'
    header comment, if present. Returns (directed, weighted) or (None, None)."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if not line.startswith("#"):
                break
            tokens = dict(
                t.split("=", 1) for t in line[1:].strip().split() if "=" in t
            )
            if "directed" in tokens or "weighted" in tokens:
                return (
                    tokens.get("directed") == "true",
                    tokens.get("weighted") == "true",
                )
    return None, None


def load_graph_file(path, directed=None, weighted=None) -> Graph:
    """load_edge_list with flags taken from the file header unless overridden."""
    sniffed_d, sniffed_w = sniff_edge_list_flags(path)
    if directed is None:
        directed = bool(sniffed_d) if sniffed_d is not None else False
    if weighted is None:
        weighted = bool(sniffed_w) if sniffed_w is not None else False
    return load_edge_list(path, directed=directed, weighted=weighted)
