"""Sweep orchestration: run every (graph x sparsifier x rate x repetition)
job in a plan, evaluate the requested metrics, and flatten everything into a
diff-stable result table.

Determinism is the organizing principle. Every job derives its own RunSeed
from the plan's master seed and the job coordinates, full-graph artifacts are
cached per graph, and rows are sorted on output, so the same plan produces
byte-identical reports no matter how many workers ran it (timing columns
aside; pass include_timing=False to strip them).

Directed graphs route undirected-only sparsifiers (spanning forest,
spanner, resistance sampling) through a symmetrized copy, tagged by a "+sym"
suffix on the graph label. Metrics that require undirected input are skipped
on directed rows with a machine-readable reason in aux_json.

A selection is admissible when neither the unreachable-pair ratio nor the
isolated-vertex ratio rises by 0.2 or more over the full graph's (both zero
after preprocessing); rows carry the verdict in the admissible column.
"""

from __future__ import annotations

import csv
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError, load_graph_file, preprocess, subgraph, symmetrize
from .metrics import METRICS, DEFAULT_METRICS, MetricContext, get_profile
from .resistance import effective_resistances
from .seeding import RunSeed
from .sparsifiers import SparsifierSpec, sparsifier_spec, sparsify

ADMISSIBLE_DELTA = 0.2  # ratio increase that marks a selection inadmissible

DEFAULT_RATES = tuple(round(0.1 * i, 1) for i in range(1, 10))

CSV_COLUMNS = (
    "graph", "sparsifier", "target_rho", "achieved_rho", "rep", "metric",
    "value", "stddev", "aux_json", "sparsify_seconds", "eval_seconds", "admissible",
)


@dataclass
class SweepPlan:
    """Everything a sweep needs: inputs, algorithms, rates, repetition
    policy, metric list, master seed, and the sampling-budget profile."""

    graphs: list
    sparsifiers: list
    rates: tuple = DEFAULT_RATES
    reps_nondeterministic: int = 10
    reps_deterministic: int = 1
    metrics: tuple = DEFAULT_METRICS
    master_seed: int = 0
    scale: str = "desk"

    def validate(self) -> None:
        if not self.graphs:
            raise GraphError("plan lists no graphs")
        if not self.sparsifiers:
            raise GraphError("plan lists no sparsifiers")
        for spec in self.sparsifiers:
            if not isinstance(spec, SparsifierSpec):
                raise GraphError(f"not a sparsifier spec: {spec!r}")
        rates = tuple(float(r) for r in self.rates)
        if any(not (0.0 < r < 1.0) for r in rates):
            raise GraphError("rates must lie strictly inside (0, 1)")
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise GraphError("rates must be strictly increasing")
        if self.reps_nondeterministic < 1 or self.reps_deterministic < 1:
            raise GraphError("repetition counts must be >= 1")
        for m in self.metrics:
            if m not in METRICS:
                raise GraphError(f"unknown metric {m!r}; known: {', '.join(METRICS)}")
        get_profile(self.scale)
        int(self.master_seed)


@dataclass
class ResultRow:
    """One (graph, sparsifier, rate, rep, metric) cell of the result table.
    value None marks a skipped or failed evaluation, with the reason in aux
    under "skip" or "error"."""

    graph: str
    sparsifier: str
    target_rho: float | None
    achieved_rho: float | None
    rep: object  # repetition index, or "mean" for aggregates
    metric: str
    value: float | None
    stddev: float | None = None
    aux: dict = field(default_factory=dict)
    sparsify_seconds: float | None = None
    eval_seconds: float | None = None
    admissible: bool | None = None


@dataclass
class SweepResult:
    plan: object  # SweepPlan, or a plain dict when loaded from disk
    rows: list


# -------------------------------------------------------------- plan files


def _parse_param_value(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise GraphError(f"cannot parse parameter value {text!r}") from None


def parse_sparsifier(token: str) -> SparsifierSpec:
    """Parse "kind" or "kind:param=value:param=value" into a spec."""
    parts = [p.strip() for p in token.split(":") if p.strip()]
    if not parts:
        raise GraphError("empty sparsifier token")
    params = {}
    for p in parts[1:]:
        if "=" not in p:
            raise GraphError(f"malformed sparsifier parameter {p!r} (expected name=value)")
        k, v = p.split("=", 1)
        params[k.strip()] = _parse_param_value(v)
    return sparsifier_spec(parts[0], **params)


def parse_plan(path) -> SweepPlan:
    """Read a plan file: one `key = value` per line, '#' comments, commas
    separating list items. Keys: graphs, sparsifiers, rates, metrics,
    reps_nondeterministic, reps_deterministic, master_seed, scale."""
    values = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise GraphError(f"{path}:{lineno}: expected `key = value`")
            key, val = line.split("=", 1)
            key = key.strip()
            if key in values:
                raise GraphError(f"{path}:{lineno}: duplicate key {key!r}")
            values[key] = val.strip()

    known = {
        "graphs", "sparsifiers", "rates", "metrics",
        "reps_nondeterministic", "reps_deterministic", "master_seed", "scale",
    }
    unknown = set(values) - known
    if unknown:
        raise GraphError(f"{path}: unknown plan keys {sorted(unknown)}")
    if "graphs" not in values or "sparsifiers" not in values:
        raise GraphError(f"{path}: plan needs at least `graphs` and `sparsifiers`")

    def split_list(key):
        return [t.strip() for t in values[key].split(",") if t.strip()]

    plan = SweepPlan(
        graphs=split_list("graphs"),
        sparsifiers=[parse_sparsifier(t) for t in split_list("sparsifiers")],
    )
    if "rates" in values:
        plan.rates = tuple(float(t) for t in split_list("rates"))
    if "metrics" in values:
        plan.metrics = tuple(split_list("metrics"))
    if "reps_nondeterministic" in values:
        plan.reps_nondeterministic = int(values["reps_nondeterministic"])
    if "reps_deterministic" in values:
        plan.reps_deterministic = int(values["reps_deterministic"])
    if "master_seed" in values:
        plan.master_seed = int(values["master_seed"])
    if "scale" in values:
        plan.scale = values["scale"]
    plan.validate()
    return plan


# ---------------------------------------------------------- graph resolving


_EDGE_SUFFIXES = {".txt", ".csv", ".edges", ".tsv", ".gz"}


def _label_for_path(path: Path) -> str:
    name = path.name
    while True:
        stem, dot, suffix = name.rpartition(".")
        if dot and ("." + suffix) in _EDGE_SUFFIXES:
            name = stem
        else:
            return name


def resolve_graph(ref: str):
    """Turn a plan graph ref (file path or dataset name) into (label, Graph)."""
    p = Path(ref)
    if p.exists():
        return _label_for_path(p), load_graph_file(p)
    from . import datasets

    info = datasets.dataset_info(ref)
    path = datasets.fetch_dataset(ref)
    from .graph import load_edge_list

    return ref, load_edge_list(path, directed=info.directed, weighted=info.weighted)


# -------------------------------------------------------------------- sweep


@dataclass(frozen=True)
class _Job:
    index: int
    variant: str
    spec: SparsifierSpec
    rate: float | None
    rep: int
    n_reps: int


def _error_text(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _run_job(job: _Job, g: Graph, ctx: MetricContext, plan: SweepPlan, resistance_for) -> list:
    rate_part = "none" if job.rate is None else round(float(job.rate), 10)
    seed = RunSeed(plan.master_seed, (job.variant, job.spec.label(), rate_part, job.rep))
    label = job.spec.label()
    aux_extra = {}
    t0 = time.perf_counter()
    try:
        if job.spec.kind in ("er_weighted", "er_unweighted"):
            table, table_seconds = resistance_for(job.variant)
            aux_extra["resistance_seconds"] = table_seconds
            sel = sparsify(g, job.spec.kind, rho=job.rate, seed=seed,
                           resistances=table, **job.spec.params)
        else:
            sel = sparsify(g, job.spec.kind, rho=job.rate, seed=seed, **job.spec.params)
    except Exception as exc:
        dt = time.perf_counter() - t0
        return [
            ResultRow(job.variant, label, job.rate, None, job.rep, metric, None,
                      aux={"error": _error_text(exc)}, sparsify_seconds=dt)
            for metric in plan.metrics
        ]
    sparsify_seconds = time.perf_counter() - t0
    sub = subgraph(g, sel)

    if sel.flags:
        aux_extra["flags"] = ",".join(sel.flags)
    for k, v in sel.params.items():
        aux_extra[f"param_{k}"] = v

    precomputed = {}
    admissible = None
    try:
        t1 = time.perf_counter()
        unreach = ctx.evaluate("unreachable_ratio", sub)
        precomputed["unreachable_ratio"] = (unreach, time.perf_counter() - t1)
        t1 = time.perf_counter()
        isolated = ctx.evaluate("isolated_ratio", sub)
        precomputed["isolated_ratio"] = (isolated, time.perf_counter() - t1)
        # full-graph ratios are zero by construction (pairs are sampled
        # reachable, preprocessing removed isolated vertices)
        admissible = bool(
            unreach.value < ADMISSIBLE_DELTA and isolated.value < ADMISSIBLE_DELTA
        )
    except Exception:
        admissible = None

    rows = []
    for metric in plan.metrics:
        if sub.directed and not METRICS[metric].directed_ok:
            rows.append(ResultRow(
                job.variant, label, job.rate, sel.achieved_prune_rate, job.rep, metric,
                None, aux={"skip": "metric requires an undirected graph", **aux_extra},
                sparsify_seconds=sparsify_seconds, admissible=admissible,
            ))
            continue
        if metric in precomputed:
            rep_report, dt = precomputed[metric]
        else:
            t1 = time.perf_counter()
            try:
                rep_report = ctx.evaluate(metric, sub)
            except Exception as exc:
                rows.append(ResultRow(
                    job.variant, label, job.rate, sel.achieved_prune_rate, job.rep, metric,
                    None, aux={"error": _error_text(exc), **aux_extra},
                    sparsify_seconds=sparsify_seconds,
                    eval_seconds=time.perf_counter() - t1, admissible=admissible,
                ))
                continue
            dt = time.perf_counter() - t1
        rows.append(ResultRow(
            job.variant, label, job.rate, sel.achieved_prune_rate, job.rep, metric,
            rep_report.value, aux={**rep_report.aux, **aux_extra},
            sparsify_seconds=sparsify_seconds, eval_seconds=dt, admissible=admissible,
        ))
    return rows


def run_sweep(plan: SweepPlan, workers: int = 1) -> SweepResult:
    """Execute a plan. Jobs may run on several threads; per-job seeds and an
    ordered merge keep the result identical for any worker count."""
    plan.validate()

    base = {}
    for ref in plan.graphs:
        label, g = resolve_graph(str(ref))
        if label in base:
            raise GraphError(f"duplicate graph label {label!r} in plan")
        g, _ = preprocess(g)
        base[label] = g

    graphs = {}

    def variant_for(label: str, spec: SparsifierSpec) -> str:
        g = base[label]
        if g.directed and not spec.directed_ok:
            vlabel = label + "+sym"
            if vlabel not in graphs:
                graphs[vlabel] = symmetrize(g)
            return vlabel
        graphs.setdefault(label, g)
        return label

    jobs = []
    for label in base:
        for spec in plan.sparsifiers:
            vlabel = variant_for(label, spec)
            rates = (None,) if spec.prune_rate_control == "none" else plan.rates
            n_reps = plan.reps_deterministic if spec.deterministic else plan.reps_nondeterministic
            for rate in rates:
                for rep in range(n_reps):
                    jobs.append(_Job(len(jobs), vlabel, spec, rate, rep, n_reps))

    contexts = {
        vlabel: MetricContext(g, plan.scale, RunSeed(plan.master_seed, (vlabel, "metrics")))
        for vlabel, g in graphs.items()
    }

    resistance_cache = {}
    resistance_lock = threading.Lock()

    def resistance_for(vlabel: str):
        with resistance_lock:
            if vlabel not in resistance_cache:
                t0 = time.perf_counter()
                table = effective_resistances(
                    graphs[vlabel], seed=RunSeed(plan.master_seed, (vlabel, "resistance"))
                )
                resistance_cache[vlabel] = (table, time.perf_counter() - t0)
            return resistance_cache[vlabel]

    def execute(job: _Job):
        return _run_job(job, graphs[job.variant], contexts[job.variant], plan, resistance_for)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_job = list(pool.map(execute, jobs))
    else:
        per_job = [execute(job) for job in jobs]

    rows = [row for rows_ in per_job for row in rows_]
    rows.extend(_aggregate_rows(jobs, per_job))
    rows.sort(key=_row_sort_key)
    return SweepResult(plan=plan, rows=rows)


def _aggregate_rows(jobs, per_job):
    """Mean/stddev rows (rep="mean") for every repeated combination."""
    groups = {}
    for job, rows in zip(jobs, per_job):
        if job.n_reps <= 1:
            continue
        for r in rows:
            if r.value is None:
                continue
            groups.setdefault((r.graph, r.sparsifier, r.target_rho, r.metric), []).append(r)
    out = []
    for (graph, sparsifier, target, metric), rs in groups.items():
        vals = np.array([r.value for r in rs], dtype=np.float64)
        finite = np.isfinite(vals)
        if len(vals) <= 1 or np.all(vals == vals[0]):
            stddev = 0.0  # repeated deterministic runs report exactly zero
        elif finite.all():
            stddev = float(np.std(vals, ddof=1))
        else:
            stddev = float("nan")
        achieved = [r.achieved_rho for r in rs if r.achieved_rho is not None]
        spars = [r.sparsify_seconds for r in rs if r.sparsify_seconds is not None]
        evals = [r.eval_seconds for r in rs if r.eval_seconds is not None]
        adm = [r.admissible for r in rs if r.admissible is not None]
        out.append(ResultRow(
            graph, sparsifier, target,
            float(np.mean(achieved)) if achieved else None,
            "mean", metric, float(np.mean(vals)), stddev,
            aux={"n_reps": len(rs)},
            sparsify_seconds=float(np.mean(spars)) if spars else None,
            eval_seconds=float(np.mean(evals)) if evals else None,
            admissible=all(adm) if adm else None,
        ))
    return out


def _row_sort_key(r: ResultRow):
    rate = r.target_rho if r.target_rho is not None else -1.0
    rep_key = (1, 0) if r.rep == "mean" else (0, int(r.rep))
    return (r.graph, r.sparsifier, rate, r.metric, rep_key)


# ------------------------------------------------------------------ reports


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _row_cells(r: ResultRow, include_timing: bool):
    aux = r.aux
    if not include_timing:
        aux = {k: v for k, v in aux.items() if not k.endswith("_seconds")}
    return [
        r.graph,
        r.sparsifier,
        _fmt(r.target_rho),
        _fmt(r.achieved_rho),
        str(r.rep),
        r.metric,
        "" if r.value is None else ("inf" if np.isinf(r.value) else repr(float(r.value))),
        _fmt(r.stddev),
        json.dumps(aux, sort_keys=True, separators=(",", ":")) if aux else "",
        _fmt(r.sparsify_seconds) if include_timing else "",
        _fmt(r.eval_seconds) if include_timing else "",
        "" if r.admissible is None else ("true" if r.admissible else "false"),
    ]


def _plan_to_dict(plan) -> dict:
    if plan is None:
        return {}
    if isinstance(plan, dict):
        return plan
    return {
        "graphs": [str(g) for g in plan.graphs],
        "sparsifiers": [s.label() for s in plan.sparsifiers],
        "rates": list(plan.rates),
        "reps_nondeterministic": plan.reps_nondeterministic,
        "reps_deterministic": plan.reps_deterministic,
        "metrics": list(plan.metrics),
        "master_seed": plan.master_seed,
        "scale": plan.scale,
    }


def report(result: SweepResult, format: str = "csv", out=None, include_timing: bool = True):
    """Write the flat result table, sorted by (graph, sparsifier, rate,
    metric, rep). include_timing=False blanks the wall-time columns (and any
    *_seconds aux entries) so outputs can be compared byte for byte."""
    if format not in ("csv", "json"):
        raise GraphError(f"unknown report format {format!r}")
    if out is None:
        raise GraphError("report needs an output path")
    out = Path(out)
    rows = sorted(result.rows, key=_row_sort_key)
    if format == "csv":
        with open(out, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow(_row_cells(r, include_timing))
        return out
    payload = {
        "plan": _plan_to_dict(result.plan),
        "rows": [dict(zip(CSV_COLUMNS, _row_cells(r, include_timing))) for r in rows],
    }
    with open(out, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return out


def save_result(result: SweepResult, path) -> None:
    """Persist the raw (unformatted) result for later reporting."""
    rows = []
    for r in sorted(result.rows, key=_row_sort_key):
        rows.append({
            "graph": r.graph, "sparsifier": r.sparsifier,
            "target_rho": r.target_rho, "achieved_rho": r.achieved_rho,
            "rep": r.rep, "metric": r.metric,
            "value": None if r.value is None else float(r.value),
            "stddev": r.stddev, "aux": r.aux,
            "sparsify_seconds": r.sparsify_seconds, "eval_seconds": r.eval_seconds,
            "admissible": r.admissible,
        })
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"plan": _plan_to_dict(result.plan), "rows": rows}, f, indent=2, sort_keys=True)
        f.write("\n")


def load_result(path) -> SweepResult:
    """Read a file written by save_result."""
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    if not isinstance(payload, dict) or "rows" not in payload:
        raise GraphError(f"{path}: not a sweep result file")
    rows = [
        ResultRow(
            graph=d["graph"], sparsifier=d["sparsifier"],
            target_rho=d.get("target_rho"), achieved_rho=d.get("achieved_rho"),
            rep=d.get("rep", 0), metric=d["metric"], value=d.get("value"),
            stddev=d.get("stddev"), aux=d.get("aux", {}),
            sparsify_seconds=d.get("sparsify_seconds"),
            eval_seconds=d.get("eval_seconds"), admissible=d.get("admissible"),
        )
        for d in payload["rows"]
    ]
    return SweepResult(plan=payload.get("plan", {}), rows=rows)
