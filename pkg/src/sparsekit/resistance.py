"""Effective resistance and resistance-based sparsification.

The effective resistance of an edge is the potential difference across its
endpoints when a unit current is injected at one and extracted at the other,
treating edge weights as conductances. Small graphs get the exact Laplacian
pseudoinverse; large ones get the classic sketch: project the weighted
incidence matrix with a random sign matrix, solve a handful of Laplacian
systems, and read resistances off squared column distances. Sampling edges
with probability proportional to w_e * r_eff(e) and reweighting survivors by
their inclusion probability preserves the graph's quadratic form.

Undirected graphs only; directed inputs must be symmetrized first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .graph import Graph, GraphError, make_selection
from .seeding import ensure_seed

EXACT_THRESHOLD = 4000  # auto mode switches to the sketch above this size
SKETCH_CONSTANT = 24.0  # rows in the sketch: ceil(C * ln n / epsilon^2)
CG_TOL = 1e-8


@dataclass
class ResistanceTable:
    """Per-edge effective resistances, indexed by canonical edge id."""

    graph_id: str
    method: str  # "exact" or "sketch"
    epsilon: float | None
    values: np.ndarray

    def __getitem__(self, edge_id):
        return float(self.values[edge_id])

    def __len__(self):
        return len(self.values)


def _component_views(g: Graph):
    """Yield (vertices, local_index, edge_ids) per connected component with
    at least one edge. local_index maps global vertex id to a component-local
    position, -1 elsewhere."""
    adj = g.to_scipy_csr()
    _, labels = csgraph.connected_components(adj, directed=False)
    comp_of_edge = labels[g.edge_u]
    for c in np.unique(comp_of_edge):
        verts = np.flatnonzero(labels == c)
        lidx = np.full(g.n_vertices, -1, dtype=np.int64)
        lidx[verts] = np.arange(len(verts))
        yield verts, lidx, np.flatnonzero(comp_of_edge == c)


def _exact_resistances(g: Graph) -> np.ndarray:
    values = np.zeros(g.n_edges)
    for verts, lidx, eids in _component_views(g):
        nc = len(verts)
        lu = lidx[g.edge_u[eids]]
        lv = lidx[g.edge_v[eids]]
        w = g.edge_weight[eids]
        lap = np.zeros((nc, nc))
        np.add.at(lap, (lu, lu), w)
        np.add.at(lap, (lv, lv), w)
        np.add.at(lap, (lu, lv), -w)
        np.add.at(lap, (lv, lu), -w)
        pinv = np.linalg.pinv(lap, hermitian=True)
        values[eids] = pinv[lu, lu] + pinv[lv, lv] - 2.0 * pinv[lu, lv]
    return values


def _block_cg(mat, jacobi_inv, rhs, tol=CG_TOL, maxiter=5000):
    """Jacobi-preconditioned CG on an SPD sparse matrix for a whole block of
    right-hand sides at once. Columns converge independently; converged ones
    freeze while the rest keep iterating."""
    x = np.zeros_like(rhs)
    r = rhs.copy()
    z = jacobi_inv[:, None] * r
    p = z.copy()
    rhs_norm = np.linalg.norm(rhs, axis=0)
    rhs_norm[rhs_norm == 0.0] = 1.0
    rz = np.einsum("ij,ij->j", r, z)
    for _ in range(maxiter):
        active = np.linalg.norm(r, axis=0) > tol * rhs_norm
        if not active.any():
            break
        q = mat @ p
        pq = np.einsum("ij,ij->j", p, q)
        safe_pq = np.where(pq == 0.0, 1.0, pq)
        alpha = np.where(active & (pq > 0.0), rz / safe_pq, 0.0)
        x += alpha * p
        r -= alpha * q
        z = jacobi_inv[:, None] * r
        rz_next = np.einsum("ij,ij->j", r, z)
        safe_rz = np.where(rz == 0.0, 1.0, rz)
        beta = np.where(active & (rz > 0.0), rz_next / safe_rz, 0.0)
        p = z + beta * p
        rz = rz_next
    return x


def _sketch_resistances(g: Graph, epsilon: float, rng) -> np.ndarray:
    n, m = g.n_vertices, g.n_edges
    k = int(np.ceil(SKETCH_CONSTANT * np.log(max(n, 2)) / (epsilon * epsilon)))
    sw = np.sqrt(g.edge_weight)
    # incidence scaled by sqrt(w): row e has +sqrt(w_e) at u and -sqrt(w_e) at v
    rows = np.repeat(np.arange(m), 2)
    cols = np.stack([g.edge_u, g.edge_v], axis=1).ravel()
    vals = np.stack([sw, -sw], axis=1).ravel()
    incidence = sparse.csr_matrix((vals, (rows, cols)), shape=(m, n))

    comps = []
    for verts, lidx, eids in _component_views(g):
        # ground the first vertex: drop its row/column to make the grounded
        # Laplacian positive definite; its potential is fixed at zero
        grounded = verts[1:]
        gidx = np.full(g.n_vertices, -1, dtype=np.int64)
        gidx[grounded] = np.arange(len(grounded))
        lu = gidx[g.edge_u[eids]]
        lv = gidx[g.edge_v[eids]]
        w = g.edge_weight[eids]
        nc = len(grounded)
        lap = sparse.coo_matrix((nc, nc))
        if nc:
            pairs = []
            keep_uu = lu >= 0
            keep_vv = lv >= 0
            both = keep_uu & keep_vv
            pairs.append((lu[keep_uu], lu[keep_uu], w[keep_uu]))
            pairs.append((lv[keep_vv], lv[keep_vv], w[keep_vv]))
            pairs.append((lu[both], lv[both], -w[both]))
            pairs.append((lv[both], lu[both], -w[both]))
            ii = np.concatenate([p[0] for p in pairs])
            jj = np.concatenate([p[1] for p in pairs])
            vv = np.concatenate([p[2] for p in pairs])
            lap = sparse.coo_matrix((vv, (ii, jj)), shape=(nc, nc))
        lap = lap.tocsr()
        diag = lap.diagonal()
        jacobi_inv = np.where(diag > 0, 1.0 / np.where(diag == 0, 1.0, diag), 1.0)
        comps.append((grounded, gidx, eids, lu, lv, lap, jacobi_inv))

    values = np.zeros(m)
    block = int(min(k, max(32, 2e7 // max(m, 1))))
    done = 0
    while done < k:
        b = min(block, k - done)
        signs = rng.integers(0, 2, size=(m, b)).astype(np.float64) * 2.0 - 1.0
        signs /= np.sqrt(k)
        proj = incidence.T @ signs  # n x b: columns are sketched currents
        for grounded, gidx, eids, lu, lv, lap, jacobi_inv in comps:
            if not len(grounded):
                continue
            sol = _block_cg(lap, jacobi_inv, proj[grounded])
            padded = np.vstack([sol, np.zeros((1, b))])  # grounded vertex -> 0
            diff = padded[lu] - padded[lv]
            values[eids] += np.einsum("ij,ij->i", diff, diff)
        done += b
    return values


def effective_resistances(g: Graph, mode="auto", epsilon=0.1, seed=None) -> ResistanceTable:
    """Effective resistance of every edge, weights taken as conductances.

    mode "exact" computes the Laplacian pseudoinverse densely per component;
    "sketch" uses randomized projection with ceil(24 ln n / epsilon^2) probe
    vectors and grounded conjugate-gradient solves, giving each resistance to
    within a (1 +- epsilon) factor with high probability; "auto" picks exact
    up to 4000 vertices. Disconnected inputs are handled per component.
    """
    if g.directed:
        raise GraphError("effective resistance requires an undirected graph; symmetrize first")
    if mode not in ("auto", "exact", "sketch"):
        raise GraphError(f"unknown resistance mode {mode!r}")
    if mode == "auto":
        mode = "exact" if g.n_vertices <= EXACT_THRESHOLD else "sketch"
    if g.n_edges == 0:
        return ResistanceTable(g.graph_id, mode, None if mode == "exact" else float(epsilon), np.zeros(0))
    if mode == "exact":
        return ResistanceTable(g.graph_id, "exact", None, _exact_resistances(g))
    epsilon = float(epsilon)
    if not (0.0 < epsilon < 1.0):
        raise GraphError("epsilon must lie strictly between 0 and 1")
    rng = ensure_seed(seed, ("resistance", "sketch")).generator()
    return ResistanceTable(g.graph_id, "sketch", epsilon, _sketch_resistances(g, epsilon, rng))


def foster_sum(g: Graph, table: ResistanceTable) -> float:
    """Sum of w_e * r_eff(e); equals n - #components on exact tables."""
    return float(np.dot(g.edge_weight, table.values))


def er_sparsify(g: Graph, rho, seed=None, reweight=True, resistances=None, epsilon=0.1):
    """Sample round((1-rho)|E|) edges with probability proportional to
    w_e * r_eff(e), without replacement.

    With reweight=True each survivor's weight becomes w_e / pi_e where
    pi_e = min(1, k * p_e) approximates its inclusion probability; that is
    the variant that preserves quadratic forms. With reweight=False the
    original weights are kept.
    """
    if g.directed:
        raise GraphError("resistance sampling requires an undirected graph; symmetrize first")
    rho = float(rho)
    if not (0.0 <= rho < 1.0):
        raise GraphError(f"prune rate must be in [0, 1), got {rho}")
    seed = ensure_seed(seed, ("er",))
    m = g.n_edges
    k = int(round((1.0 - rho) * m))
    if m == 0 or k == 0:
        return make_selection(g, [], rho, seed=seed.label())
    if resistances is None:
        resistances = effective_resistances(g, epsilon=epsilon, seed=seed.derive("resistance"))
    if resistances.graph_id != g.graph_id:
        raise GraphError("resistance table belongs to a different graph")
    scores = g.edge_weight * np.maximum(resistances.values, 0.0)
    total = scores.sum()
    if total <= 0.0:
        raise GraphError("resistance scores sum to zero; cannot sample")
    p = scores / total
    rng = seed.generator()
    with np.errstate(divide="ignore"):
        keys = rng.exponential(size=m) / p  # weighted draw without replacement
    kept = np.sort(np.argsort(keys, kind="stable")[:k])
    new_weights = None
    if reweight:
        pi = np.minimum(1.0, k * p[kept])
        w = g.edge_weight[kept]
        vals = np.where(pi > 0.0, w / np.where(pi == 0.0, 1.0, pi), w)
        new_weights = {int(e): float(x) for e, x in zip(kept, vals)}
    sel = make_selection(g, kept, rho, new_weights=new_weights, seed=seed.label())
    sel.params = {"method": resistances.method}
    if resistances.epsilon is not None:
        sel.params["epsilon"] = resistances.epsilon
    return sel


def save_resistances(table: ResistanceTable, path) -> None:
    """Write a resistance table as CSV with a provenance comment line."""
    with open(path, "w", encoding="utf-8") as f:
        eps = "" if table.epsilon is None else repr(float(table.epsilon))
        f.write(f"# method={table.method} epsilon={eps} graph={table.graph_id}\n")
        f.write("edge_id,r_eff\n")
        for i, v in enumerate(table.values):
            f.write(f"{i},{float(v)!r}\n")


def load_resistances(path) -> ResistanceTable:
    """Read a table written by save_resistances."""
    method, epsilon, graph_id = "exact", None, ""
    rows = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("method="):
                        method = tok[len("method="):]
                    elif tok.startswith("epsilon="):
                        val = tok[len("epsilon="):]
                        epsilon = float(val) if val else None
                    elif tok.startswith("graph="):
                        graph_id = tok[len("graph="):]
                continue
            if line == "edge_id,r_eff":
                continue
            sid, sval = line.split(",", 1)
            rows[int(sid)] = float(sval)
    values = np.zeros(len(rows))
    for i, v in rows.items():
        if not (0 <= i < len(rows)):
            raise GraphError(f"{path}: non-contiguous edge ids")
        values[i] = v
    return ResistanceTable(graph_id, method, epsilon, values)
