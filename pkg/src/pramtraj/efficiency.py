"""Capacity, node efficiency, edge efficiency, and scaling reports.

Capacity is width x depth of a trace.  Node efficiency divides the executed
operation count by capacity (the share of node-layer slots doing useful
work); the graph-feature update counts as one extra operation per layer and
is also reported excluded.  Edge efficiency is the per-trace mean share of
active edges per layer, reported as the minimum (the worst-case estimator
over the sampled inputs) and the mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .algorithms import run
from .harness import exhaustive_instances, generate_instance, sample_seed
from .machine import StepLimitExceeded, Trace, mapped_edge_count, operated_edge_count
from .trajectory import dumps_canonical


def capacity(trace: Trace) -> int:
    return trace.width * trace.depth


def node_efficiency(trace: Trace, include_graph_ops: bool = True) -> float:
    """Operations per node-layer slot; a zero-depth trace counts as 1."""
    if trace.depth == 0:
        return 1.0
    if include_graph_ops:
        ops = sum(rec.op_count for rec in trace.activity)
    else:
        ops = sum(len(rec.active_nodes) for rec in trace.activity)
    return ops / capacity(trace)


def trace_edge_shares(trace: Trace) -> list[float]:
    m = operated_edge_count(trace)
    if m == 0:
        return [0.0 for _ in trace.activity]
    return [mapped_edge_count(trace, rec) / m for rec in trace.activity]


def edge_efficiency(traces: list[Trace]) -> tuple[float, float]:
    """(eps_min, eps_mean) over traces of one algorithm at one size.

    eps_min is the worst case over the supplied inputs -- a lower estimate of
    the true worst case unless the inputs enumerate the whole space.
    """
    if not traces:
        raise ValueError("empty trace list")
    algos = {t.algo_id for t in traces}
    widths = {t.width for t in traces}
    ms = {operated_edge_count(t) for t in traces}
    if len(algos) > 1 or len(widths) > 1 or len(ms) > 1:
        raise ValueError("traces must share algorithm, size, and edge count")
    eps = []
    for t in traces:
        shares = trace_edge_shares(t)
        eps.append(sum(shares) / len(shares) if shares else 0.0)
    return min(eps), sum(eps) / len(eps)


@dataclass(frozen=True)
class SizeRecord:
    """Aggregated metrics for one algorithm at one input size."""

    n: int
    m: float
    width: int
    depth: float
    capacity: float
    op_total: float
    eta: float
    eta_nodes: float
    eps_min: float
    eps_mean: float
    edge_max: int
    edge_mean: float
    zero_depth: int


@dataclass(frozen=True)
class EfficiencyReport:
    algo: str
    records: tuple[SizeRecord, ...]
    slopes: dict
    classes: dict


_FAMILY = {
    "parallel_search": "search",
    "binary_search": "search",
    "oets": "sort",
    "bubble_sort": "sort",
    "dcsc": "scc",
    "kosaraju": "scc",
}

# Asymptotic classes, per task family, to annotate fitted slopes with.
_CAPACITY_CLASSES = {
    "search": (("n", lambda n, m: n), ("n log n", lambda n, m: n * math.log2(max(n, 2)))),
    "sort": (("n^2", lambda n, m: n**2), ("n^3", lambda n, m: n**3)),
    "scc": (
        ("n+m", lambda n, m: n + m),
        ("n(n+m)", lambda n, m: n * (n + m)),
        ("n^3", lambda n, m: n**3),
    ),
}
_ETA_CLASSES = (("1", lambda n, m: 1.0), ("n^-1", lambda n, m: 1.0 / n))
_EPS_CLASSES = {
    "search": (("1", lambda n, m: 1.0), ("n^-2", lambda n, m: n**-2.0)),
    "sort": (("n^-1", lambda n, m: 1.0 / n), ("n^-2", lambda n, m: n**-2.0)),
    "scc": (("m^-1", lambda n, m: 1.0 / max(m, 1.0)), ("1", lambda n, m: 1.0)),
}


def _loglog_slope(ns, values) -> float | None:
    if any(v <= 0 for v in values):
        return None
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def _nearest_class(ns, ms, measured_slope, candidates) -> str | None:
    if measured_slope is None:
        return None
    best = None
    best_gap = None
    for label, fn in candidates:
        slope = _loglog_slope(ns, [fn(n, m) for n, m in zip(ns, ms)])
        gap = abs(measured_slope - slope)
        if best_gap is None or gap < best_gap:
            best, best_gap = label, gap
    return best


def scaling_report(
    algo_id: str,
    n_list: list[int],
    samples_per_n: int,
    seed: int,
    *,
    max_degree: int = 3,
    exhaustive: bool = False,
) -> EfficiencyReport:
    """Run the algorithm across sizes and aggregate metrics per size.

    With ``exhaustive`` the sampled inputs are replaced by the whole input
    space (searching: every rank position; sorting: every permutation;
    n <= 6), so eps_min is the true worst case over that space.
    """
    if list(n_list) != sorted(set(n_list)) or len(n_list) < 3:
        raise ValueError("n_list must be ascending with at least 3 sizes")
    records = []
    for n in n_list:
        if exhaustive:
            instances = [(None, inst) for inst in exhaustive_instances(algo_id, n)]
        else:
            seeds = [sample_seed(seed, algo_id, n, i) for i in range(samples_per_n)]
            instances = [
                (s, generate_instance(algo_id, n, s, max_degree)) for s in seeds
            ]
        depths, caps, ops, ops_nodes, eps, ms = [], [], [], [], [], []
        edge_max, edge_sum, edge_steps, zero_depth = 0, 0, 0, 0
        width = None
        for inst_seed, inst in instances:
            try:
                _, trace = run(algo_id, inst)
            except StepLimitExceeded as err:
                raise StepLimitExceeded(f"{err} (instance seed {inst_seed})") from err
            width = trace.width
            depths.append(trace.depth)
            caps.append(capacity(trace))
            ops.append(sum(rec.op_count for rec in trace.activity))
            ops_nodes.append(sum(len(rec.active_nodes) for rec in trace.activity))
            shares = trace_edge_shares(trace)
            eps.append(sum(shares) / len(shares) if shares else 0.0)
            ms.append(operated_edge_count(trace))
            counts = [mapped_edge_count(trace, rec) for rec in trace.activity]
            if counts:
                edge_max = max(edge_max, max(counts))
                edge_sum += sum(counts)
                edge_steps += len(counts)
            if trace.depth == 0:
                zero_depth += 1
        k = len(instances)
        cap_mean = sum(caps) / k
        records.append(
            SizeRecord(
                n=n,
                m=sum(ms) / k,
                width=width,
                depth=sum(depths) / k,
                capacity=cap_mean,
                op_total=sum(ops) / k,
                eta=(sum(ops) / k) / cap_mean if cap_mean else 1.0,
                eta_nodes=(sum(ops_nodes) / k) / cap_mean if cap_mean else 1.0,
                eps_min=min(eps),
                eps_mean=sum(eps) / k,
                edge_max=edge_max,
                edge_mean=edge_sum / edge_steps if edge_steps else 0.0,
                zero_depth=zero_depth,
            )
        )
    ns = [r.n for r in records]
    ms = [max(r.m, 1.0) for r in records]
    family = _FAMILY[algo_id]
    slopes = {
        "capacity": _loglog_slope(ns, [r.capacity for r in records]),
        "depth": _loglog_slope(ns, [r.depth for r in records]),
        "eta": _loglog_slope(ns, [r.eta for r in records]),
        "eps": _loglog_slope(ns, [r.eps_mean for r in records]),
    }
    classes = {
        "capacity": _nearest_class(ns, ms, slopes["capacity"], _CAPACITY_CLASSES[family]),
        "eta": _nearest_class(ns, ms, slopes["eta"], _ETA_CLASSES),
        "eps": _nearest_class(ns, ms, slopes["eps"], _EPS_CLASSES[family]),
    }
    return EfficiencyReport(algo_id, tuple(records), slopes, classes)


def report_ndjson(report: EfficiencyReport) -> bytes:
    lines = []
    for rec in report.records:
        obj = {"algo": report.algo}
        obj.update(asdict(rec))
        lines.append(dumps_canonical(obj))
    lines.append(
        dumps_canonical(
            {"algo": report.algo, "summary": {"classes": report.classes, "slopes": report.slopes}}
        )
    )
    return ("\n".join(lines) + "\n").encode("utf-8")


def render_table(report: EfficiencyReport) -> str:
    header = ("algo", "n", "m", "width", "depth", "capacity", "eta", "eps_min", "eps_mean", "class")
    rows = [header]
    for rec in report.records:
        rows.append(
            (
                report.algo,
                str(rec.n),
                f"{rec.m:g}",
                str(rec.width),
                f"{rec.depth:g}",
                f"{rec.capacity:g}",
                f"{rec.eta:.4f}",
                f"{rec.eps_min:.5f}",
                f"{rec.eps_mean:.5f}",
                report.classes["capacity"] or "-",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    out = []
    for row in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out)


def pair_metrics(
    algo_id: str, n: int, samples: int, seed: int, max_degree: int = 3
) -> dict:
    """Per-sample eta/eps aggregates for one algorithm at one size."""
    etas, eps, depths, caps = [], [], [], []
    for index in range(samples):
        s = sample_seed(seed, algo_id, n, index)
        inst = generate_instance(algo_id, n, s, max_degree)
        _, trace = run(algo_id, inst)
        etas.append(node_efficiency(trace))
        shares = trace_edge_shares(trace)
        eps.append(sum(shares) / len(shares) if shares else 0.0)
        depths.append(trace.depth)
        caps.append(capacity(trace))
    k = len(etas)
    return {
        "algo": algo_id,
        "n": n,
        "eta_mean": sum(etas) / k,
        "eta_min": min(etas),
        "eps_mean": sum(eps) / k,
        "eps_min": min(eps),
        "depth_mean": sum(depths) / k,
        "capacity_mean": sum(caps) / k,
    }


def render_pair_table(seq: dict, par: dict) -> str:
    header = (
        "role", "algo", "n",
        "eta_mean", "eta_min", "eps_mean", "eps_min", "depth", "capacity",
    )
    rows = [header]
    for role, rec in (("sequential", seq), ("parallel", par)):
        rows.append(
            (
                role,
                rec["algo"],
                str(rec["n"]),
                f"{rec['eta_mean']:.4f}",
                f"{rec['eta_min']:.4f}",
                f"{rec['eps_mean']:.5f}",
                f"{rec['eps_min']:.5f}",
                f"{rec['depth_mean']:g}",
                f"{rec['capacity_mean']:g}",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows
    )
