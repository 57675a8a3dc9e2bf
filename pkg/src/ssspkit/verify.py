"""Independent reference algorithms and post-hoc validators.

Two mutually independent oracles (priority-queue relaxation and repeated
full-edge relaxation) plus direct checks of the shortest-path fixed point and
of recorded execution traces. All distance arithmetic is exact (integer
weights), so every comparison here is exact equality.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

import numpy as np

from .engine import TraceRecord
from .graphs import Graph, PartitionMap
from .model import INFINITY, DistanceMap, OrderingSpec, class_key

__all__ = [
    "VerifyReport",
    "dijkstra_reference",
    "bellman_ford_reference",
    "shortest_path_hops",
    "verify_distances",
    "verify_fixed_point",
    "verify_trace",
    "load_trace",
]


@dataclass
class VerifyReport:
    ok: bool
    violations: list = field(default_factory=list)
    checked: int = 0

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{status} ({self.checked} checks, {len(self.violations)} violations)"]
        lines += [f"  {v}" for v in self.violations[:10]]
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {"ok": self.ok, "checked": self.checked, "violations": [str(v) for v in self.violations]}
        )


def dijkstra_reference(graph: Graph, source: int) -> DistanceMap:
    """Sequential priority-queue shortest paths; the primary ground truth."""
    off, tgt, wts = graph.adjacency_lists()
    dist = DistanceMap(graph.vertex_count)
    vals = dist.values
    vals[source] = 0
    heap = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > vals[v]:
            continue
        lo, hi = off[v], off[v + 1]
        for i in range(lo, hi):
            nd = d + wts[i]
            u = tgt[i]
            if nd < vals[u]:
                vals[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def bellman_ford_reference(graph: Graph, source: int) -> DistanceMap:
    """Rounds of full-edge relaxation (at most V-1, stopping early once a
    round changes nothing); independent cross-check for the first oracle."""
    src, dst, wts = graph.edge_arrays()
    vals = np.full(graph.vertex_count, np.inf)
    vals[source] = 0
    wts_f = wts.astype(np.float64)
    for _ in range(max(graph.vertex_count - 1, 0)):
        before = vals.copy()
        candidate = vals[src] + wts_f
        np.minimum.at(vals, dst, candidate)
        if np.array_equal(before, vals):
            break
    dist = DistanceMap(graph.vertex_count)
    dist.values[:] = [INFINITY if not np.isfinite(x) else (int(x) if float(x).is_integer() else float(x)) for x in vals]
    return dist


def _values(dist) -> list:
    """Accept either a DistanceMap or a plain sequence of distances."""
    return dist.values if isinstance(dist, DistanceMap) else list(dist)


def shortest_path_hops(graph: Graph, source: int) -> tuple[list, list[int]]:
    """Shortest distances plus, per vertex, the minimum edge count among
    shortest paths (lexicographic (distance, hops) search). Unreached
    vertices get hop count -1."""
    off, tgt, wts = graph.adjacency_lists()
    vals = [INFINITY] * graph.vertex_count
    hops = [-1] * graph.vertex_count
    vals[source] = 0
    hops[source] = 0
    heap = [(0, 0, source)]
    while heap:
        d, h, v = heapq.heappop(heap)
        if d > vals[v] or (d == vals[v] and h > hops[v]):
            continue
        lo, hi = off[v], off[v + 1]
        for i in range(lo, hi):
            nd = d + wts[i]
            u = tgt[i]
            if nd < vals[u] or (nd == vals[u] and h + 1 < hops[u]):
                vals[u] = nd
                hops[u] = h + 1
                heapq.heappush(heap, (nd, h + 1, u))
    return vals, hops


def verify_distances(result, oracle) -> VerifyReport:
    """Exact per-vertex equality; reports the first 10 mismatches.

    Both arguments may be DistanceMaps or plain sequences of distances.
    """
    got_vals = _values(result)
    want_vals = _values(oracle)
    if len(got_vals) != len(want_vals):
        raise ValueError(f"size mismatch: {len(got_vals)} vs {len(want_vals)}")
    violations = []
    for v, (got, want) in enumerate(zip(got_vals, want_vals)):
        if got != want:
            violations.append(f"vertex {v}: got {got}, oracle {want}")
            if len(violations) >= 10:
                break
    return VerifyReport(ok=not violations, violations=violations, checked=len(got_vals))


def verify_fixed_point(graph: Graph, dist, source: int) -> VerifyReport:
    """Direct check of the shortest-path fixed point: the source sits at 0 and
    every other reachable vertex equals the minimum over its in-edges of the
    predecessor distance plus the edge weight. Evaluated over the transposed
    edge set, independently of any oracle."""
    vals = np.asarray(_values(dist), dtype=np.float64)
    violations = []
    if vals[source] != 0:
        violations.append(f"source {source}: distance {vals[source]} != 0")
    src, dst, wts = graph.edge_arrays()
    best = np.full(graph.vertex_count, np.inf)
    finite_src = np.isfinite(vals[src])
    if finite_src.any():
        np.minimum.at(best, dst[finite_src], vals[src[finite_src]] + wts[finite_src])
    for v in range(graph.vertex_count):
        if v == source:
            continue
        expected = best[v]
        got = vals[v]
        if np.isinf(expected) and np.isinf(got):
            continue
        if got != expected:
            violations.append(f"vertex {v}: distance {got} != min over in-edges {expected}")
            if len(violations) >= 10:
                break
    return VerifyReport(ok=not violations, violations=violations, checked=graph.vertex_count)


def verify_trace(
    trace: list[TraceRecord], order: OrderingSpec, pmap: PartitionMap
) -> VerifyReport:
    """Validate a completed run's trace: epoch (class) keys must not overlap
    or decrease over time, every item must have been processed on its owner
    partition, and every generated item must belong to the draining class or
    a greater one."""
    violations = []
    checked = 0

    # (a) Barrier ordering: keys non-decreasing in start order, and no record
    # of a later class starting before every record of an earlier class ended.
    records = sorted(trace, key=lambda r: r.t_start)
    last_key = None
    max_end_prev_classes = -np.inf
    current_class_max_end = -np.inf
    for r in records:
        checked += 1
        if last_key is not None and r.class_key != last_key:
            if r.class_key < last_key:
                violations.append(
                    f"class key decreased: {r.class_key} after {last_key} (item {r.item})"
                )
            max_end_prev_classes = max(max_end_prev_classes, current_class_max_end)
            current_class_max_end = -np.inf
        if r.t_start < max_end_prev_classes:
            violations.append(
                f"item {r.item} of class {r.class_key} started before an earlier class finished"
            )
        current_class_max_end = max(current_class_max_end, r.t_end)
        last_key = r.class_key

    # (b) Owner-computes.
    for r in records:
        if pmap.owner(r.item[0]) != r.partition:
            violations.append(
                f"item {r.item} processed on partition {r.partition}, owner is {pmap.owner(r.item[0])}"
            )

    # (c) Generated-class legality.
    for r in records:
        for g in r.generated:
            if class_key(order, tuple(g)) < r.class_key:
                violations.append(
                    f"item {tuple(g)} generated into class {class_key(order, tuple(g))} "
                    f"< draining class {r.class_key}"
                )

    return VerifyReport(ok=not violations, violations=violations[:50], checked=checked)


def load_trace(path) -> list[TraceRecord]:
    """Read JSON-lines trace records written by the engine."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            records.append(
                TraceRecord(
                    item=tuple(obj["item"]),
                    class_key=obj["class_key"],
                    worker=obj["worker"],
                    partition=obj["partition"],
                    t_start=obj["t_start"],
                    t_end=obj["t_end"],
                    useful=obj["useful"],
                    generated=tuple(tuple(g) for g in obj["generated"]),
                )
            )
    return records
