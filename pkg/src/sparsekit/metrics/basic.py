"""Connectivity ratios, degree-distribution distance, quadratic-form ratio.

These are the cheap per-selection metrics: two admissibility ratios (what
fraction of previously-connected pairs broke, what fraction of vertices went
silent), a Bhattacharyya distance between binned degree histograms, and the
Laplacian quadratic-form ratio that spectral sparsifiers are designed to
pin near 1.
"""

from __future__ import annotations

import numpy as np

from ..graph import Graph, GraphError
from ..seeding import ensure_seed
from .base import (
    MetricReport,
    check_same_vertex_set,
    component_labels,
    make_report,
    pair_distances,
    sample_reachable_pairs,
    total_degrees,
)


def pair_unreachable_ratio(g_sparse: Graph, g_full: Graph, n_pairs=10_000, seed=None, pairs=None) -> MetricReport:
    """Fraction of sampled vertex pairs, reachable in the full graph, that
    have no path in the sparse graph. pairs may carry a precomputed
    (sources, targets) sample to share across evaluations."""
    check_same_vertex_set(g_sparse, g_full)
    if pairs is None:
        rng = ensure_seed(seed, ("unreachable",)).generator()
        pairs = sample_reachable_pairs(g_full, n_pairs, rng)
    ss, tt = pairs
    if not len(ss):
        return make_report("unreachable_ratio", g_sparse, 0.0, n_pairs=0)
    if g_sparse.directed:
        bad = ~np.isfinite(pair_distances(g_sparse, ss, tt))
    else:
        labels = component_labels(g_sparse)
        bad = labels[ss] != labels[tt]
    return make_report("unreachable_ratio", g_sparse, bad.mean(), n_pairs=len(ss))


def vertex_isolated_ratio(g_sparse: Graph) -> MetricReport:
    """Fraction of vertices with no incident edge (in either direction)."""
    if g_sparse.n_vertices == 0:
        return make_report("isolated_ratio", g_sparse, 0.0)
    ratio = float(np.mean(total_degrees(g_sparse) == 0))
    return make_report("isolated_ratio", g_sparse, ratio)


def _binned_degree_histogram(g: Graph, n_bins: int, max_degree: int) -> np.ndarray:
    deg = np.clip(total_degrees(g), 0, max_degree)
    hist, _ = np.histogram(deg, bins=n_bins, range=(0.0, float(max(max_degree, 1))))
    return hist / max(g.n_vertices, 1)


def degree_distribution_distance(g_sparse: Graph, g_full: Graph, n_bins=100) -> MetricReport:
    """Bhattacharyya distance -ln sum(sqrt(P*Q)) between degree histograms.

    Both graphs bin evenly over [0, max_degree(full)] so the supports align;
    identical distributions give 0, disjoint supports give the +inf
    sentinel."""
    check_same_vertex_set(g_sparse, g_full)
    max_deg = int(total_degrees(g_full).max()) if g_full.n_vertices else 0
    p = _binned_degree_histogram(g_full, n_bins, max_deg)
    q = _binned_degree_histogram(g_sparse, n_bins, max_deg)
    coeff = float(np.sqrt(p * q).sum())
    value = np.inf if coeff <= 0.0 else max(0.0, -np.log(min(coeff, 1.0)))
    return make_report("degree_distance", g_sparse, value, n_bins=n_bins)


def bhattacharyya_distance(p, q) -> float:
    """-ln sum(sqrt(p_i q_i)) for two aligned discrete distributions."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise GraphError("distributions must have equal length")
    coeff = float(np.sqrt(p * q).sum())
    return np.inf if coeff <= 0.0 else max(0.0, -np.log(min(coeff, 1.0)))


def _quadratic_forms(g: Graph, x: np.ndarray) -> np.ndarray:
    """x^T L x for each column of x, via the edge list."""
    if g.n_edges == 0:
        return np.zeros(x.shape[1])
    diff = x[g.edge_u] - x[g.edge_v]
    return g.edge_weight @ (diff * diff)


def quadratic_form_similarity(g_sparse: Graph, g_full: Graph, n_vectors=100, seed=None) -> MetricReport:
    """Mean over standard-normal vectors x of (x^T L_sparse x)/(x^T L_full x).

    Near 1 means the sparse graph preserves the full Laplacian's quadratic
    form. Vectors whose denominator vanishes are resampled. Undirected only.
    """
    if g_sparse.directed or g_full.directed:
        raise GraphError("quadratic form requires undirected graphs")
    check_same_vertex_set(g_sparse, g_full)
    rng = ensure_seed(seed, ("quadratic_form",)).generator()
    n = g_full.n_vertices
    ratios = np.empty(n_vectors)
    filled = 0
    for _ in range(200):
        if filled >= n_vectors:
            break
        x = rng.standard_normal((n, n_vectors - filled))
        den = _quadratic_forms(g_full, x)
        num = _quadratic_forms(g_sparse, x)
        ok = den >= 1e-12
        take = int(ok.sum())
        ratios[filled : filled + take] = num[ok] / den[ok]
        filled += take
    if filled < n_vectors:
        raise GraphError("quadratic form denominator keeps vanishing; is the full graph empty?")
    return make_report("quadratic_form", g_sparse, ratios.mean(), n_vectors=n_vectors)
