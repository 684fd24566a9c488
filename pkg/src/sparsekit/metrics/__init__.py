"""Metric registry and the caching evaluation context.

MetricContext wraps one full graph plus a sampling profile and a seed. It
lazily computes and caches everything that depends only on the full graph
(sampled pairs, centrality vectors, the reference partition), so evaluating
many sparsified versions of the same graph pays the full-graph cost once.
Sampled quantities reuse the same derived seed on the full and sparse side,
keeping comparisons paired.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph, GraphError
from ..seeding import ensure_seed
from .base import (
    MetricReport,
    PROFILES,
    SamplingProfile,
    get_profile,
    make_report,
    pair_distances,
    sample_reachable_pairs,
    sample_vertices,
)
from .basic import (
    bhattacharyya_distance,
    degree_distribution_distance,
    pair_unreachable_ratio,
    quadratic_form_similarity,
    vertex_isolated_ratio,
)
from .centrality import (
    betweenness_sampled,
    closeness,
    eigenvector_centrality,
    katz_centrality,
    pagerank,
    topk_precision,
)
from .clustering import (
    clustering_coefficients,
    clustering_f1,
    community_count,
    louvain_communities,
)
from .distance import approx_diameter, eccentricity_stretch, spsp_stretch
from .flow import flow_stretch, max_flow

__all__ = [
    "MetricReport", "SamplingProfile", "PROFILES", "get_profile", "make_report",
    "pair_unreachable_ratio", "vertex_isolated_ratio", "degree_distribution_distance",
    "quadratic_form_similarity", "bhattacharyya_distance",
    "spsp_stretch", "eccentricity_stretch", "approx_diameter",
    "betweenness_sampled", "closeness", "eigenvector_centrality", "katz_centrality",
    "pagerank", "topk_precision",
    "louvain_communities", "community_count", "clustering_coefficients", "clustering_f1",
    "max_flow", "flow_stretch",
    "MetricInfo", "METRICS", "DEFAULT_METRICS", "MetricContext",
]


@dataclass(frozen=True)
class MetricInfo:
    name: str
    directed_ok: bool
    description: str


METRICS = {
    info.name: info
    for info in [
        MetricInfo("unreachable_ratio", True, "fraction of full-graph-reachable pairs broken"),
        MetricInfo("isolated_ratio", True, "fraction of vertices left with no edge"),
        MetricInfo("degree_distance", True, "Bhattacharyya distance between degree histograms"),
        MetricInfo("quadratic_form", False, "mean Laplacian quadratic-form ratio"),
        MetricInfo("spsp_stretch", True, "mean shortest-path stretch over sampled pairs"),
        MetricInfo("eccentricity_stretch", True, "mean eccentricity ratio over sampled sources"),
        MetricInfo("diameter", True, "approximate diameter (double-sweep mean over restarts)"),
        MetricInfo("betweenness_topk", True, "top-k overlap of sampled betweenness rankings"),
        MetricInfo("closeness_topk", True, "top-k overlap of closeness rankings"),
        MetricInfo("eigenvector_topk", True, "top-k overlap of eigenvector rankings"),
        MetricInfo("katz_topk", True, "top-k overlap of Katz rankings"),
        MetricInfo("pagerank_topk", True, "top-k overlap of PageRank rankings"),
        MetricInfo("community_count", False, "number of Louvain communities"),
        MetricInfo("clustering_f1", False, "partition F1 against the full graph's communities"),
        MetricInfo("mcc", True, "mean local clustering coefficient"),
        MetricInfo("gcc", True, "global clustering coefficient"),
        MetricInfo("flow_stretch", True, "mean max-flow stretch over sampled pairs"),
    ]
}

DEFAULT_METRICS = tuple(METRICS)

_CENTRALITY_FOR_TOPK = {
    "betweenness_topk": "betweenness",
    "closeness_topk": "closeness",
    "eigenvector_topk": "eigenvector",
    "katz_topk": "katz",
    "pagerank_topk": "pagerank",
}


class MetricContext:
    """Evaluates metrics for sparsified versions of one full graph."""

    def __init__(self, g_full: Graph, profile="desk", seed=None):
        self.full = g_full
        self.profile = get_profile(profile)
        self.seed = ensure_seed(seed, ("metrics",))
        self._cache = {}

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # ---------------------------------------------- full-graph artifacts

    def unreachable_pairs(self):
        def build():
            rng = self.seed.derive("unreachable").generator()
            return sample_reachable_pairs(self.full, self.profile.unreachable_pairs, rng)

        return self._cached("unreachable_pairs", build)

    def spsp_pairs(self):
        def build():
            rng = self.seed.derive("spsp").generator()
            ss, tt = sample_reachable_pairs(self.full, self.profile.spsp_pairs, rng)
            full_d = pair_distances(self.full, ss, tt) if len(ss) else np.zeros(0)
            return ss, tt, full_d

        return self._cached("spsp_pairs", build)

    def ecc_sources(self):
        def build():
            rng = self.seed.derive("eccentricity").generator()
            return sample_vertices(self.full, self.profile.ecc_sources, rng)

        return self._cached("ecc_sources", build)

    def flow_pairs(self):
        def build():
            rng = self.seed.derive("flow").generator()
            return sample_reachable_pairs(self.full, self.profile.flow_pairs, rng)

        return self._cached("flow_pairs", build)

    def centrality(self, which: str, g: Graph | None = None) -> np.ndarray:
        """A centrality vector; g=None means the (cached) full graph."""
        target = self.full if g is None else g
        key = ("centrality", which) if g is None else None

        def build():
            if which == "betweenness":
                return betweenness_sampled(
                    target, self.profile.betweenness_pivots, self.seed.derive("betweenness")
                )
            if which == "closeness":
                return closeness(target)
            if which == "eigenvector":
                return eigenvector_centrality(target)
            if which == "katz":
                return katz_centrality(target)
            if which == "pagerank":
                return pagerank(target)
            raise GraphError(f"unknown centrality {which!r}")

        return self._cached(key, build) if key else build()

    def full_partition(self) -> np.ndarray:
        return self._cached(
            "full_partition", lambda: louvain_communities(self.full, self.seed.derive("louvain"))
        )

    def full_coefficients(self):
        return self._cached("full_coefficients", lambda: clustering_coefficients(self.full))

    def full_diameter(self) -> MetricReport:
        return self._cached(
            "full_diameter",
            lambda: approx_diameter(
                self.full, self.profile.diameter_restarts, self.seed.derive("diameter")
            ),
        )

    # ------------------------------------------------------- evaluation

    def evaluate(self, name: str, g_sparse: Graph) -> MetricReport:
        """One metric for one sparsified graph, against the cached full graph."""
        if name not in METRICS:
            raise GraphError(f"unknown metric {name!r}; known: {', '.join(METRICS)}")
        full = self.full
        prof = self.profile

        if name == "unreachable_ratio":
            return pair_unreachable_ratio(g_sparse, full, pairs=self.unreachable_pairs())
        if name == "isolated_ratio":
            return vertex_isolated_ratio(g_sparse)
        if name == "degree_distance":
            return degree_distribution_distance(g_sparse, full)
        if name == "quadratic_form":
            return quadratic_form_similarity(
                g_sparse, full, prof.qf_vectors, self.seed.derive("quadratic_form")
            )
        if name == "spsp_stretch":
            ss, tt, full_d = self.spsp_pairs()
            return spsp_stretch(g_sparse, full, pairs=(ss, tt), full_dists=full_d)
        if name == "eccentricity_stretch":
            return eccentricity_stretch(g_sparse, full, sources=self.ecc_sources())
        if name == "diameter":
            rep = approx_diameter(g_sparse, prof.diameter_restarts, self.seed.derive("diameter"))
            ref = self.full_diameter()
            rep.aux["full_mean"] = ref.value
            rep.aux["full_max"] = ref.aux["max"]
            return rep
        if name in _CENTRALITY_FOR_TOPK:
            which = _CENTRALITY_FOR_TOPK[name]
            k = min(prof.topk, full.n_vertices)
            if k == 0:
                raise GraphError("top-k precision needs at least one vertex")
            value = topk_precision(
                self.centrality(which), self.centrality(which, g_sparse), k
            )
            return make_report(name, g_sparse, value, k=k)
        if name == "community_count":
            labels = louvain_communities(g_sparse, self.seed.derive("louvain"))
            count = int(labels.max()) + 1 if len(labels) else 0
            full_count = int(self.full_partition().max()) + 1 if full.n_vertices else 0
            return make_report(name, g_sparse, count, full_count=full_count)
        if name == "clustering_f1":
            sparse_labels = louvain_communities(g_sparse, self.seed.derive("louvain"))
            return make_report(
                name, g_sparse, clustering_f1(self.full_partition(), sparse_labels)
            )
        if name == "mcc":
            _, mcc, _ = clustering_coefficients(g_sparse)
            return make_report(name, g_sparse, mcc, full=self.full_coefficients()[1])
        if name == "gcc":
            _, _, gcc = clustering_coefficients(g_sparse)
            return make_report(name, g_sparse, gcc, full=self.full_coefficients()[2])
        if name == "flow_stretch":
            return flow_stretch(g_sparse, full, pairs=self.flow_pairs())
        raise GraphError(f"metric {name!r} has no evaluator")  # unreachable
