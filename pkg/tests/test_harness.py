import csv
import json
import random as pyrandom
import time

import numpy as np
import pytest

from sparsekit.generators import gnp_random_graph, triangle, two_triangles
from sparsekit.graph import Graph, GraphError, save_edge_list
from sparsekit.harness import (
    ADMISSIBLE_DELTA,
    CSV_COLUMNS,
    DEFAULT_RATES,
    SweepPlan,
    SweepResult,
    load_result,
    parse_plan,
    parse_sparsifier,
    report,
    resolve_graph,
    run_sweep,
    save_result,
)
from sparsekit.sparsifiers import sparsifier_spec, sparsify


def _write_graph(g, path):
    save_edge_list(g, path)
    return str(path)


def _data_rows(result):
    return [r for r in result.rows if r.rep != "mean"]


def _mean_rows(result):
    return [r for r in result.rows if r.rep == "mean"]


# ---------------------------------------------------------------- plan files


def test_parse_plan_full(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    plan_text = f"""
# sweep over one toy graph
graphs = {gpath}
sparsifiers = random, t_spanner:t=2, l_spar:c=1.5
rates = 0.2, 0.5   # two rates
metrics = gcc, diameter
reps_nondeterministic = 3
reps_deterministic = 1
master_seed = 11
scale = desk
"""
    p = tmp_path / "plan.txt"
    p.write_text(plan_text, encoding="utf-8")
    plan = parse_plan(p)
    assert plan.graphs == [gpath]
    assert [s.label() for s in plan.sparsifiers] == [
        "random", "t_spanner(t=2)", "l_spar(c=1.5)"]
    assert plan.sparsifiers[1].params == {"t": 2}
    assert plan.sparsifiers[2].params == {"c": 1.5}
    assert plan.rates == (0.2, 0.5)
    assert plan.metrics == ("gcc", "diameter")
    assert plan.reps_nondeterministic == 3
    assert plan.master_seed == 11


def test_parse_plan_defaults(tmp_path):
    p = tmp_path / "plan.txt"
    p.write_text("graphs = g.txt\nsparsifiers = random\n", encoding="utf-8")
    plan = parse_plan(p)
    assert plan.rates == DEFAULT_RATES
    assert plan.reps_nondeterministic == 10
    assert plan.reps_deterministic == 1
    assert plan.master_seed == 0
    assert plan.scale == "desk"


@pytest.mark.parametrize("text,msg", [
    ("graphs = g\n", "needs at least"),
    ("sparsifiers = random\n", "needs at least"),
    ("graphs = g\ngraphs = h\nsparsifiers = random\n", "duplicate key"),
    ("graphs = g\nsparsifiers = random\ncolor = blue\n", "unknown plan keys"),
    ("graphs g\nsparsifiers = random\n", "expected `key = value`"),
    ("graphs = g\nsparsifiers = random\nrates = 0.5, 1.5\n", "inside"),
    ("graphs = g\nsparsifiers = random\nrates = 0.5, 0.2\n", "strictly increasing"),
    ("graphs = g\nsparsifiers = random\nmetrics = vibes\n", "unknown metric"),
    ("graphs = g\nsparsifiers = local_degree:alpha\n", "malformed sparsifier"),
    ("graphs = g\nsparsifiers = k_neighbor:k=abc\n", "cannot parse parameter"),
    ("graphs = g\nsparsifiers = random\nreps_nondeterministic = 0\n", "repetition"),
    ("graphs = g\nsparsifiers = random\nscale = galactic\n", "sampling profile"),
])
def test_parse_plan_errors(tmp_path, text, msg):
    p = tmp_path / "plan.txt"
    p.write_text(text, encoding="utf-8")
    with pytest.raises(GraphError, match=msg):
        parse_plan(p)


def test_parse_sparsifier_tokens():
    assert parse_sparsifier("random").label() == "random"
    spec = parse_sparsifier(" k_neighbor : k=3 ")
    assert spec.kind == "k_neighbor" and spec.params == {"k": 3}
    with pytest.raises(GraphError, match="empty sparsifier"):
        parse_sparsifier(":")
    with pytest.raises(GraphError):
        parse_sparsifier("frobnicate")


def test_resolve_graph_label_strips_suffixes(tmp_path):
    gpath = tmp_path / "toy.edges"
    save_edge_list(two_triangles(), gpath)
    label, g = resolve_graph(str(gpath))
    assert label == "toy"
    assert g.n_edges == 7


# -------------------------------------------------------------------- sweeps


def test_sweep_cardinality_random(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.5,), reps_nondeterministic=10,
                     metrics=("degree_distance",))
    result = run_sweep(plan)
    reps = _data_rows(result)
    means = _mean_rows(result)
    assert len(reps) == 10
    assert len(means) == 1
    assert means[0].aux == {"n_reps": 10}
    assert all(r.graph == "tri" and r.sparsifier == "random" for r in reps)
    assert all(r.target_rho == 0.5 for r in reps)
    assert {r.rep for r in reps} == set(range(10))


def test_sweep_prune_rate_control_none_single_row(tmp_path):
    gpath = _write_graph(two_triangles(), tmp_path / "tt.txt")
    plan = SweepPlan(graphs=[gpath],
                     sparsifiers=[sparsifier_spec("spanning_forest")],
                     rates=(0.2, 0.5, 0.8), metrics=("unreachable_ratio",))
    result = run_sweep(plan)
    # rate-free sparsifier: one row total, requested rates ignored
    assert len(result.rows) == 1
    row = result.rows[0]
    assert row.target_rho is None
    assert row.value == 0.0  # a spanning forest keeps everything reachable
    assert row.achieved_rho == pytest.approx(1 - 5 / 7)


def test_sweep_grid_cardinality(tmp_path):
    gpath = _write_graph(two_triangles(), tmp_path / "tt.txt")
    plan = SweepPlan(
        graphs=[gpath],
        sparsifiers=[sparsifier_spec("random"), sparsifier_spec("local_degree")],
        rates=(0.3, 0.6), reps_nondeterministic=2, reps_deterministic=1,
        metrics=("isolated_ratio",),
    )
    result = run_sweep(plan)
    reps = _data_rows(result)
    means = _mean_rows(result)
    # random: 2 rates x 2 reps; local_degree (deterministic): 2 rates x 1 rep
    assert len(reps) == 6
    assert len([r for r in reps if r.sparsifier == "random"]) == 4
    # aggregates only where something repeated
    assert len(means) == 2
    assert all(r.sparsifier == "random" for r in means)


def test_deterministic_reps_identical_and_stddev_zero(tmp_path):
    gpath = _write_graph(two_triangles(), tmp_path / "tt.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("l_spar")],
                     rates=(0.3,), reps_deterministic=3,
                     metrics=("degree_distance",))
    result = run_sweep(plan)
    reps = _data_rows(result)
    means = _mean_rows(result)
    assert len(reps) == 3
    assert len({r.value for r in reps}) == 1
    assert len({r.achieved_rho for r in reps}) == 1
    assert means[0].stddev == 0.0


def test_sweep_duplicate_graph_label_rejected(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    plan = SweepPlan(graphs=[gpath, gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.5,), metrics=("isolated_ratio",))
    with pytest.raises(GraphError, match="duplicate graph label"):
        run_sweep(plan)


def test_sweep_inf_value_and_admissibility(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.9,), reps_nondeterministic=2,
                     metrics=("degree_distance", "unreachable_ratio"))
    result = run_sweep(plan)
    # rho=0.9 on 3 edges keeps none: degree histograms stop overlapping
    dd = [r for r in _data_rows(result) if r.metric == "degree_distance"]
    assert all(np.isinf(r.value) for r in dd)
    assert all(r.admissible is False for r in dd)
    out = tmp_path / "r.csv"
    report(result, out=out)
    text = out.read_text(encoding="utf-8")
    rows = list(csv.DictReader(text.splitlines()))
    cells = [r for r in rows if r["metric"] == "degree_distance" and r["rep"] != "mean"]
    assert all(r["value"] == "inf" for r in cells)
    assert all(r["admissible"] == "false" for r in cells)
    mean_cell = [r for r in rows if r["metric"] == "degree_distance" and r["rep"] == "mean"]
    assert mean_cell[0]["value"] == "inf"
    # both reps landed on the same inf sentinel: no spread to report
    assert mean_cell[0]["stddev"] == "0.0"


def test_sweep_skips_undirected_only_metrics_on_directed(tmp_path):
    g = Graph.from_edges(3, [0, 1, 2], [1, 2, 0], directed=True)
    gpath = _write_graph(g, tmp_path / "d3.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.3,), reps_nondeterministic=1,
                     metrics=("quadratic_form", "unreachable_ratio"))
    result = run_sweep(plan)
    by_metric = {r.metric: r for r in _data_rows(result)}
    qf = by_metric["quadratic_form"]
    assert qf.value is None
    assert qf.aux["skip"] == "metric requires an undirected graph"
    assert by_metric["unreachable_ratio"].value is not None
    out = tmp_path / "r.csv"
    report(result, out=out)
    rows = list(csv.DictReader(out.read_text(encoding="utf-8").splitlines()))
    assert [r["value"] for r in rows if r["metric"] == "quadratic_form"] == [""]


def test_sweep_symmetrized_variant_for_undirected_only_sparsifiers(tmp_path):
    g = Graph.from_edges(3, [0, 1, 2], [1, 2, 0], directed=True)
    gpath = _write_graph(g, tmp_path / "d3.txt")
    plan = SweepPlan(
        graphs=[gpath],
        sparsifiers=[sparsifier_spec("random"), sparsifier_spec("spanning_forest")],
        rates=(0.3,), reps_nondeterministic=1, metrics=("quadratic_form",),
    )
    result = run_sweep(plan)
    rows = _data_rows(result)
    labels = {(r.graph, r.sparsifier) for r in rows}
    assert labels == {("d3", "random"), ("d3+sym", "spanning_forest")}
    sym = [r for r in rows if r.graph == "d3+sym"][0]
    # the symmetrized variant is undirected, so the metric actually runs
    assert sym.value is not None and "skip" not in sym.aux


def test_sweep_partial_failure_recorded_not_raised(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    # k=0 fails k_neighbor's validation inside the job
    plan = SweepPlan(graphs=[gpath],
                     sparsifiers=[sparsifier_spec("k_neighbor", k=0),
                                  sparsifier_spec("random")],
                     rates=(0.5,), reps_nondeterministic=1,
                     metrics=("isolated_ratio",))
    result = run_sweep(plan)
    rows = _data_rows(result)
    bad = [r for r in rows if r.sparsifier == "k_neighbor(k=0)"]
    good = [r for r in rows if r.sparsifier == "random"]
    assert len(bad) == 1 and bad[0].value is None
    assert "error" in bad[0].aux and "GraphError" in bad[0].aux["error"]
    assert len(good) == 1 and good[0].value is not None


def test_sweep_worker_count_does_not_change_output(tmp_path):
    g = gnp_random_graph(20, 0.3, seed=5, connect=True)
    gpath = _write_graph(g, tmp_path / "g20.txt")
    plan = SweepPlan(
        graphs=[gpath],
        sparsifiers=[sparsifier_spec("random"), sparsifier_spec("er_unweighted")],
        rates=(0.4,), reps_nondeterministic=2,
        metrics=("unreachable_ratio", "gcc"), master_seed=3,
    )
    outs = []
    for workers in (1, 8):
        result = run_sweep(plan, workers=workers)
        out = tmp_path / f"w{workers}.csv"
        report(result, out=out, include_timing=False)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_report_sorts_rows(tmp_path):
    gpath = _write_graph(two_triangles(), tmp_path / "tt.txt")
    plan = SweepPlan(
        graphs=[gpath],
        sparsifiers=[sparsifier_spec("random"), sparsifier_spec("local_degree")],
        rates=(0.3, 0.6), reps_nondeterministic=2,
        metrics=("isolated_ratio", "gcc"),
    )
    result = run_sweep(plan)
    out_a = tmp_path / "a.csv"
    report(result, out=out_a, include_timing=False)
    shuffled = list(result.rows)
    pyrandom.Random(0).shuffle(shuffled)
    out_b = tmp_path / "b.csv"
    report(SweepResult(plan=plan, rows=shuffled), out=out_b, include_timing=False)
    assert out_a.read_bytes() == out_b.read_bytes()
    # spot-check ordering: rep rows before the mean row within a group
    rows = list(csv.DictReader(out_a.read_text(encoding="utf-8").splitlines()))
    group = [r["rep"] for r in rows
             if r["sparsifier"] == "random" and r["target_rho"] == "0.3"
             and r["metric"] == "gcc"]
    assert group == ["0", "1", "mean"]


def test_report_empty_metrics_header_only(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.5,), reps_nondeterministic=1, metrics=())
    result = run_sweep(plan)
    out = tmp_path / "r.csv"
    report(result, out=out)
    assert out.read_bytes() == (",".join(CSV_COLUMNS) + "\r\n").encode()


def test_report_timing_columns_and_stripping(tmp_path):
    g = gnp_random_graph(12, 0.4, seed=2, connect=True)
    gpath = _write_graph(g, tmp_path / "g12.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("er_unweighted")],
                     rates=(0.4,), reps_nondeterministic=1, metrics=("gcc",))
    result = run_sweep(plan)
    row = _data_rows(result)[0]
    assert row.sparsify_seconds > 0 and row.eval_seconds >= 0
    # resistance precomputation is reported separately from sparsify time
    assert row.aux["resistance_seconds"] >= 0
    with_timing = tmp_path / "t.csv"
    without = tmp_path / "nt.csv"
    report(result, out=with_timing, include_timing=True)
    report(result, out=without, include_timing=False)
    assert "resistance_seconds" in with_timing.read_text(encoding="utf-8")
    rows = list(csv.DictReader(without.read_text(encoding="utf-8").splitlines()))
    assert "resistance_seconds" not in rows[0]["aux_json"]
    assert rows[0]["sparsify_seconds"] == "" and rows[0]["eval_seconds"] == ""


def test_report_json_format(tmp_path):
    gpath = _write_graph(triangle(), tmp_path / "tri.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.5,), reps_nondeterministic=1, metrics=("gcc",))
    result = run_sweep(plan)
    out = tmp_path / "r.json"
    report(result, format="json", out=out)
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["plan"]["sparsifiers"] == ["random"]
    assert [set(r) for r in payload["rows"]] == [set(CSV_COLUMNS)]
    with pytest.raises(GraphError, match="format"):
        report(result, format="yaml", out=tmp_path / "x")
    with pytest.raises(GraphError, match="output path"):
        report(result)


def test_save_load_result_round_trip(tmp_path):
    gpath = _write_graph(two_triangles(), tmp_path / "tt.txt")
    plan = SweepPlan(graphs=[gpath], sparsifiers=[sparsifier_spec("random")],
                     rates=(0.4,), reps_nondeterministic=2,
                     metrics=("gcc", "degree_distance"))
    result = run_sweep(plan)
    raw = tmp_path / "raw.json"
    save_result(result, raw)
    loaded = load_result(raw)
    assert loaded.plan["master_seed"] == 0
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    report(result, out=out_a)
    report(loaded, out=out_b)
    assert out_a.read_bytes() == out_b.read_bytes()
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]\n", encoding="utf-8")
    with pytest.raises(GraphError, match="result file"):
        load_result(bad)


def test_admissibility_threshold_value():
    assert ADMISSIBLE_DELTA == 0.2


def test_sparsify_time_tracks_kept_edges():
    # the sweep's sparsify_seconds wraps exactly this call, so the ordering
    # between prune rates is checked at the call site: higher rho keeps
    # fewer edges and must not cost more (median over 5 runs)
    rng = np.random.default_rng(7)
    n = 300_000
    u = rng.integers(n, size=1_800_000)
    v = rng.integers(n, size=1_800_000)
    g = Graph.from_edges(n, u, v)

    def median_seconds(rho):
        ts = []
        for i in range(5):
            t0 = time.perf_counter()
            sparsify(g, "random", rho=rho, seed=i)
            ts.append(time.perf_counter() - t0)
        return float(np.median(ts))

    assert median_seconds(0.9) < median_seconds(0.1)
