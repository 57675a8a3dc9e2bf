"""Multi-trial benchmark harness: build or load a graph once, run the engine
over trials and sources, verify against the reference oracle, and aggregate
mean / sample-standard-deviation statistics per (algorithm, preset) row.

Wall times are reported but never compared against anything; work counts are
the portable signal.
"""
from __future__ import annotations

import csv
import io
import json
import os
import statistics
from dataclasses import dataclass, field

import numpy as np

from .engine import EngineConfig, RunStats, WorkerTopology, run, write_trace
from .graphs import (
    FixedWeight,
    Graph,
    RmatParams,
    UniformWeight,
    generate_rmat,
    load_dimacs_gr,
    load_edge_list,
)
from .hierarchy import PRESETS, SpatialHierarchy, preset
from .model import OrderingSpec
from .verify import dijkstra_reference, verify_distances

__all__ = [
    "BenchSpec",
    "BenchRow",
    "BenchReport",
    "VerificationFailure",
    "run_bench",
    "matrix",
    "emit_report",
    "relaxation_trend",
]


class VerificationFailure(RuntimeError):
    """Engine distances disagreed with the oracle."""

    def __init__(self, message: str, report):
        super().__init__(message)
        self.report = report


@dataclass
class BenchSpec:
    """One benchmark configuration."""

    ordering: OrderingSpec
    rmat: RmatParams | None = None
    input_path: str | None = None
    input_format: str = "edgelist"
    graph_label: str | None = None
    preset_name: str = "buffer"
    hierarchy: SpatialHierarchy | None = None
    topology: WorkerTopology = WorkerTopology()
    sources: int | list[int] = 1
    trials: int = 1
    seed: int = 0
    verify: bool = True
    output: str = "csv"
    trace_path: str | None = None
    batch_limit: int = 64
    matrix: bool = False

    def __post_init__(self):
        if (self.rmat is None) == (self.input_path is None):
            raise ValueError("exactly one of rmat params or input_path must be given")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.preset_name not in PRESETS:
            raise ValueError(f"unknown preset {self.preset_name!r}")
        if self.input_format not in ("edgelist", "dimacs"):
            raise ValueError(f"unknown input format {self.input_format!r}")
        if self.output not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output!r}")

    def label(self) -> str:
        if self.graph_label:
            return self.graph_label
        if self.rmat is not None:
            return f"rmat-s{self.rmat.scale}-ef{self.rmat.edge_factor}-seed{self.rmat.seed}"
        return os.path.basename(self.input_path)

    def resolved_hierarchy(self, ordering: OrderingSpec | None = None) -> SpatialHierarchy:
        if self.hierarchy is not None:
            return self.hierarchy
        return preset(self.preset_name, ordering or self.ordering)


@dataclass
class BenchRow:
    """Aggregate of all runs for one (algorithm, preset) cell."""

    graph: str
    vertices: int
    edges: int
    workers: int
    algorithm: str
    preset: str
    mean_time_s: float
    sigma_time: float
    mean_useful_relax: float
    mean_stale_relax: float
    epochs: float
    messages_routed: float
    verified: bool
    per_trial: list[RunStats] = field(default_factory=list)


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _load_graph(spec: BenchSpec) -> Graph:
    if spec.rmat is not None:
        return generate_rmat(spec.rmat)
    with open(spec.input_path, encoding="utf-8") as fh:
        if spec.input_format == "dimacs":
            return load_dimacs_gr(fh)
        return load_edge_list(fh, UniformWeight(1, 100, spec.seed))


def _pick_sources(graph: Graph, spec: BenchSpec) -> list[int]:
    if isinstance(spec.sources, list):
        return spec.sources
    degrees = np.diff(graph.row_offsets)
    candidates = np.flatnonzero(degrees > 0)
    if candidates.size == 0:
        candidates = np.arange(graph.vertex_count)
    rng = np.random.default_rng(spec.seed)
    count = min(spec.sources, candidates.size)
    return rng.choice(candidates, size=count, replace=False).tolist()


def _mean_sigma(values: list[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    sigma = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sigma


def _run_cell(
    graph: Graph,
    spec: BenchSpec,
    ordering: OrderingSpec,
    preset_name: str,
    sources: list[int],
    oracles: dict,
) -> tuple[BenchRow, list[str]]:
    config = EngineConfig(
        ordering=ordering,
        topology=spec.topology,
        hierarchy=spec.hierarchy if spec.hierarchy is not None else preset(preset_name, ordering),
        batch_limit=spec.batch_limit,
        record_trace=spec.trace_path is not None,
    )
    runs: list[RunStats] = []
    failures: list[str] = []
    trace_written = False
    for _ in range(spec.trials):
        for source in sources:
            dist, stats = run(graph, config, source)
            if spec.trace_path and not trace_written:
                write_trace(stats.trace, spec.trace_path)
                trace_written = True
            stats.trace = None
            runs.append(stats)
            if spec.verify:
                if source not in oracles:
                    oracles[source] = dijkstra_reference(graph, source)
                report = verify_distances(dist, oracles[source])
                if not report.ok:
                    failures.append(
                        f"{ordering.describe()}/{preset_name} source {source}: {report.summary()}"
                    )
    mean_t, sigma_t = _mean_sigma([s.wall_time_s for s in runs])
    row = BenchRow(
        graph=spec.label(),
        vertices=graph.vertex_count,
        edges=graph.edge_count,
        workers=spec.topology.total_workers,
        algorithm=ordering.describe(),
        preset=preset_name,
        mean_time_s=mean_t,
        sigma_time=sigma_t,
        mean_useful_relax=statistics.fmean(s.relaxations_useful for s in runs),
        mean_stale_relax=statistics.fmean(s.relaxations_stale for s in runs),
        epochs=statistics.fmean(s.epochs for s in runs),
        messages_routed=statistics.fmean(s.messages_routed for s in runs),
        verified=spec.verify and not failures,
        per_trial=runs,
    )
    return row, failures


def run_bench(spec: BenchSpec) -> BenchReport:
    """Run one configuration; raises VerificationFailure if verify is on and
    any run disagrees with the oracle."""
    graph = _load_graph(spec)
    sources = _pick_sources(graph, spec)
    oracles: dict = {}
    row, failures = _run_cell(graph, spec, spec.ordering, spec.preset_name, sources, oracles)
    report = BenchReport(rows=[row], failures=failures)
    if failures:
        raise VerificationFailure("; ".join(failures), report)
    return report


def matrix(
    spec: BenchSpec,
    orderings: list[OrderingSpec] | None = None,
    presets: list[str] | None = None,
) -> BenchReport:
    """Run the full orderings-by-presets grid on one graph; verification
    failures are recorded per cell and the matrix keeps going."""
    if orderings is None:
        orderings = [spec.ordering]
    if presets is None:
        presets = list(PRESETS)
    graph = _load_graph(spec)
    sources = _pick_sources(graph, spec)
    report = BenchReport()
    oracles: dict = {}
    for ordering in orderings:
        for preset_name in presets:
            row, failures = _run_cell(graph, spec, ordering, preset_name, sources, oracles)
            report.rows.append(row)
            report.failures.extend(failures)
    return report


def default_matrix_orderings(spec: BenchSpec) -> list[OrderingSpec]:
    """The standard three-algorithm grid; delta/kla parameters come from the
    spec's ordering when it carries them, else 3 and 1."""
    delta = spec.ordering.delta if spec.ordering.kind == "delta" else 3
    k = spec.ordering.k if spec.ordering.kind == "kla" else 1
    return [
        OrderingSpec.delta_stepping(delta),
        OrderingSpec.kla(k),
        OrderingSpec.chaotic(),
    ]


_CSV_COLUMNS = [
    "graph",
    "vertices",
    "edges",
    "workers",
    "algorithm",
    "preset",
    "mean_time_s",
    "sigma_time",
    "mean_useful_relax",
    "mean_stale_relax",
    "epochs",
    "messages_routed",
]


def emit_report(report: BenchReport, format: str = "csv") -> str:
    """Render a report as CSV (header + one line per row) or JSON."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(_CSV_COLUMNS)
        for r in report.rows:
            writer.writerow(
                [
                    r.graph,
                    r.vertices,
                    r.edges,
                    r.workers,
                    r.algorithm,
                    r.preset,
                    f"{r.mean_time_s:.6f}",
                    f"{r.sigma_time:.6f}",
                    r.mean_useful_relax,
                    r.mean_stale_relax,
                    r.epochs,
                    r.messages_routed,
                ]
            )
        return buf.getvalue()
    if format == "json":
        return json.dumps(
            {
                "rows": [{col: getattr(r, col) for col in _CSV_COLUMNS} for r in report.rows],
                "failures": report.failures,
            },
            indent=2,
        )
    raise ValueError(f"unknown output format {format!r}")


def relaxation_trend(rows: list[BenchRow]) -> dict[str, float]:
    """Mean total relaxations (useful + stale) per algorithm, for the
    ordering-reduces-work comparison."""
    by_algorithm: dict[str, list[float]] = {}
    for r in rows:
        by_algorithm.setdefault(r.algorithm, []).append(r.mean_useful_relax + r.mean_stale_relax)
    return {alg: statistics.fmean(vals) for alg, vals in by_algorithm.items()}
