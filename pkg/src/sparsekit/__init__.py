"""sparsekit: graph sparsification algorithms, a metric suite measuring what
they preserve, and a deterministic sweep harness tying them together.

The core object is an immutable CSR Graph. Sparsifiers map a Graph and a
target prune rate to an EdgeSelection (the kept edge ids, optionally
reweighted); metrics compare the materialized subgraph against the original;
the harness runs the full cross-product with seeded reproducibility.
"""

from .graph import (
    EdgeSelection,
    Graph,
    GraphError,
    PrepReport,
    connected_components,
    load_edge_list,
    load_graph_file,
    load_selection,
    make_selection,
    prepare,
    preprocess,
    quadratic_form,
    save_edge_list,
    save_selection,
    subgraph,
    symmetrize,
)
from .harness import (
    ResultRow,
    SweepPlan,
    SweepResult,
    parse_plan,
    parse_sparsifier,
    report,
    run_sweep,
    save_result,
    load_result,
)
from .metrics import (
    DEFAULT_METRICS,
    METRICS,
    MetricContext,
    MetricReport,
    PROFILES,
    approx_diameter,
    betweenness_sampled,
    bhattacharyya_distance,
    closeness,
    clustering_coefficients,
    clustering_f1,
    community_count,
    degree_distribution_distance,
    eccentricity_stretch,
    eigenvector_centrality,
    flow_stretch,
    katz_centrality,
    louvain_communities,
    max_flow,
    pagerank,
    pair_unreachable_ratio,
    quadratic_form_similarity,
    spsp_stretch,
    topk_precision,
    vertex_isolated_ratio,
)
from .resistance import (
    ResistanceTable,
    effective_resistances,
    er_sparsify,
    foster_sum,
    load_resistances,
    save_resistances,
)
from .seeding import RunSeed, ensure_seed
from .similarity import ScoreTable, jaccard_scores, load_scores, save_scores, scan_scores
from .sparsifiers import (
    SPARSIFIER_KINDS,
    SparsifierSpec,
    forest_fire_sparsify,
    g_spar_sparsify,
    k_neighbor_sparsify,
    keep_count,
    l_spar_sparsify,
    local_degree_sparsify,
    local_similarity_sparsify,
    random_sparsify,
    rank_degree_sparsify,
    scan_sparsify,
    spanning_forest,
    sparsifier_spec,
    sparsify,
    t_spanner,
)

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphError", "EdgeSelection", "PrepReport",
    "load_edge_list", "load_graph_file", "save_edge_list",
    "load_selection", "save_selection", "make_selection", "subgraph",
    "preprocess", "prepare", "symmetrize", "connected_components", "quadratic_form",
    "RunSeed", "ensure_seed",
    "ScoreTable", "jaccard_scores", "scan_scores", "save_scores", "load_scores",
    "SparsifierSpec", "SPARSIFIER_KINDS", "sparsifier_spec", "sparsify", "keep_count",
    "random_sparsify", "k_neighbor_sparsify", "rank_degree_sparsify",
    "local_degree_sparsify", "spanning_forest", "t_spanner", "forest_fire_sparsify",
    "l_spar_sparsify", "g_spar_sparsify", "local_similarity_sparsify", "scan_sparsify",
    "ResistanceTable", "effective_resistances", "er_sparsify", "foster_sum",
    "save_resistances", "load_resistances",
    "MetricReport", "MetricContext", "METRICS", "DEFAULT_METRICS", "PROFILES",
    "pair_unreachable_ratio", "vertex_isolated_ratio", "degree_distribution_distance",
    "quadratic_form_similarity", "bhattacharyya_distance",
    "spsp_stretch", "eccentricity_stretch", "approx_diameter",
    "betweenness_sampled", "closeness", "eigenvector_centrality",
    "katz_centrality", "pagerank", "topk_precision",
    "louvain_communities", "community_count", "clustering_coefficients", "clustering_f1",
    "max_flow", "flow_stretch",
    "SweepPlan", "SweepResult", "ResultRow", "parse_plan", "parse_sparsifier",
    "run_sweep", "report", "save_result", "load_result",
]
