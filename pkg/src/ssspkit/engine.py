"""Epoch-based execution of ordered work-item relaxation.

The engine repeatedly drains the globally smallest equivalence class of
pending work items, processes its items (in parallel when the topology has
more than one worker), parks items generated for later classes, and stops at
quiescence. Vertices are block-partitioned and every item is processed on its
owner partition's workers; cross-partition item transfers are counted as
routed messages.

Two paths share one semantics: a lock-free inline loop for the single-worker
topology (deterministic, used for debugging and replay), and a threaded path
for everything else. The threaded path is a single-address-space simulation
of a distributed run; partitions and NUMA groups are worker groupings with
their own shared level queues, not separate memory spaces.
"""
from __future__ import annotations

import json
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from heapq import heappop, heappush

from .graphs import Graph, PartitionMap, partition_1d
from .hierarchy import LevelQueue, SpatialHierarchy, preset
from .model import INFINITY, DistanceMap, OrderingSpec, WorkItem, class_key

__all__ = [
    "WorkerTopology",
    "EngineConfig",
    "ActiveWorkCounter",
    "RunStats",
    "TraceRecord",
    "OrderingViolationError",
    "run",
    "route",
    "atomic_min_update",
    "detect_quiescence",
    "write_trace",
]


class OrderingViolationError(RuntimeError):
    """A work item was generated for a strictly smaller class than the one
    being drained; the ordering/processing-function pairing is broken."""


@dataclass(frozen=True)
class WorkerTopology:
    """Worker counts per spatial level; total workers is the product."""

    partitions: int = 1
    groups_per_partition: int = 1
    workers_per_group: int = 1

    def __post_init__(self):
        if min(self.partitions, self.groups_per_partition, self.workers_per_group) < 1:
            raise ValueError("all topology counts must be >= 1")

    @property
    def total_workers(self) -> int:
        return self.partitions * self.groups_per_partition * self.workers_per_group

    def describe(self) -> str:
        return f"{self.partitions}x{self.groups_per_partition}x{self.workers_per_group}"


@dataclass(frozen=True)
class EngineConfig:
    ordering: OrderingSpec
    topology: WorkerTopology = WorkerTopology()
    hierarchy: SpatialHierarchy | None = None
    batch_limit: int = 64
    record_trace: bool = False
    collect_class_sizes: bool = True

    def __post_init__(self):
        if self.hierarchy is not None and self.hierarchy.root != self.ordering:
            raise ValueError("hierarchy root ordering must equal the engine ordering")
        if self.batch_limit < 1:
            raise ValueError("batch_limit must be >= 1")

    def resolved_hierarchy(self) -> SpatialHierarchy:
        return self.hierarchy if self.hierarchy is not None else preset("buffer", self.ordering)


class ActiveWorkCounter:
    """Linearizable counter of work items produced for the current epoch but
    not yet fully processed. Zero (with empty queues) means quiescence."""

    __slots__ = ("_lock", "_value")

    def __init__(self, value: int = 0):
        self._lock = threading.Lock()
        self._value = value

    @property
    def value(self) -> int:
        return self._value

    def add(self, delta: int) -> int:
        with self._lock:
            self._value += delta
            if self._value < 0:
                raise RuntimeError("active work counter went negative")
            return self._value

    def reset(self, value: int) -> None:
        with self._lock:
            self._value = value


@dataclass
class RunStats:
    """Work accounting for one engine run."""

    epochs: int = 0
    items_processed: int = 0
    relaxations_useful: int = 0
    relaxations_stale: int = 0
    messages_routed: int = 0
    epoch_keys: list = field(default_factory=list)
    class_sizes: list = field(default_factory=list)
    wall_time_s: float = 0.0
    workers: int = 1
    trace: "list[TraceRecord] | None" = None

    def work_counts(self) -> dict:
        """Deterministic fields only (no wall time / trace), for replay
        comparison."""
        return {
            "epochs": self.epochs,
            "items_processed": self.items_processed,
            "relaxations_useful": self.relaxations_useful,
            "relaxations_stale": self.relaxations_stale,
            "messages_routed": self.messages_routed,
            "epoch_keys": list(self.epoch_keys),
            "class_sizes": list(self.class_sizes),
            "workers": self.workers,
        }


@dataclass(frozen=True)
class TraceRecord:
    """One processed work item, for post-hoc validation."""

    item: tuple
    class_key: object
    worker: int
    partition: int
    t_start: float
    t_end: float
    useful: bool
    generated: tuple = ()


def write_trace(records: list[TraceRecord], path) -> None:
    """Write trace records as JSON lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {
                        "item": list(r.item),
                        "class_key": r.class_key,
                        "worker": r.worker,
                        "partition": r.partition,
                        "t_start": r.t_start,
                        "t_end": r.t_end,
                        "useful": r.useful,
                        "generated": [list(g) for g in r.generated],
                    }
                )
                + "\n"
            )


def route(pmap: PartitionMap, w: WorkItem) -> int:
    """Owner partition of a work item; the engine only processes an item on
    workers of this partition."""
    return pmap.owner(w[0])


def atomic_min_update(dist: DistanceMap, v: int, d) -> bool:
    """Conditional minimum: set ``dist[v] = d`` iff ``d < dist[v]``,
    atomically; returns whether the update happened."""
    return dist.update_min(v, d)


def detect_quiescence(counter: ActiveWorkCounter, queues) -> bool:
    """True iff no item of the current epoch is in flight or queued."""
    return counter.value == 0 and all(q.empty() for q in queues)


def _key_fn(ordering: OrderingSpec):
    kind = ordering.kind
    if kind == "chaotic":
        return lambda w: 0
    if kind == "dijkstra":
        return lambda w: w[1]
    if kind == "delta":
        delta = ordering.delta
        return lambda w: int(w[1] // delta)
    k = ordering.k
    return lambda w: w[2] // k


def run(graph: Graph, config: EngineConfig, source: int) -> tuple[DistanceMap, RunStats]:
    """Execute the machine from the seed item at ``source``; returns final
    distances (shortest paths; unreached vertices hold the infinity sentinel)
    and work statistics."""
    if not 0 <= source < graph.vertex_count:
        raise IndexError(f"source {source} out of range [0, {graph.vertex_count})")
    if config.ordering.uses_levels:
        seed = (source, 0, 0)
    else:
        seed = (source, 0)
    t0 = time.perf_counter()
    if config.topology.total_workers == 1:
        dist, stats = _run_serial(graph, config, seed)
    else:
        dist, stats = _run_threaded(graph, config, seed)
    stats.wall_time_s = time.perf_counter() - t0
    stats.workers = config.topology.total_workers
    return dist, stats


# ---------------------------------------------------------------------------
# Single-worker path
# ---------------------------------------------------------------------------


def _run_serial(graph: Graph, config: EngineConfig, seed: WorkItem) -> tuple[DistanceMap, RunStats]:
    off, tgt, wts = graph.adjacency_lists()
    dist = DistanceMap(graph.vertex_count)
    vals = dist.values
    ordering = config.ordering
    kind = ordering.kind
    kla = ordering.uses_levels
    delta = ordering.delta
    klev = ordering.k
    key_of = _key_fn(ordering)
    # For bucketed orderings, parked items that went stale are condition-
    # checked in bulk at class selection and dropped (counted as stale
    # relaxations); classes left empty are skipped, which keeps the epoch
    # count bounded by the bucket range of the shortest distances. Exact-
    # distance classes are drained even when fully stale.
    purge = kind in ("delta", "kla")
    ordered_drain = config.resolved_hierarchy().ordered_level is not None
    tracing = config.record_trace
    trace: list[TraceRecord] = [] if tracing else None

    stats = RunStats()
    pending: dict = {key_of(seed): [seed]}
    processed = useful = 0

    while pending:
        key = min(pending)
        items = pending.pop(key)
        if purge:
            live = [w for w in items if w[1] < vals[w[0]]]
            processed += len(items) - len(live)  # bulk stale evaluations
            items = live
            if not items:
                continue
        stats.epochs += 1
        stats.epoch_keys.append(key)
        epoch_start_processed = processed
        if ordered_drain:
            q = []
            for w in items:
                heappush(q, (w[1], w))
        else:
            q = deque(items)
        while q:
            w = heappop(q)[1] if ordered_drain else q.popleft()
            if tracing:
                t_start = time.perf_counter()
                generated = []
            processed += 1
            v = w[0]
            d = w[1]
            if d < vals[v]:
                vals[v] = d
                useful += 1
                is_useful = True
                lo = off[v]
                hi = off[v + 1]
                if kla:
                    lvl = w[2] + 1
                for i in range(lo, hi):
                    nd = d + wts[i]
                    nw = (tgt[i], nd, lvl) if kla else (tgt[i], nd)
                    if kind == "chaotic":
                        k2 = 0
                    elif kind == "dijkstra":
                        k2 = nd
                    elif kind == "delta":
                        k2 = int(nd // delta)
                    else:
                        k2 = lvl // klev
                    if tracing:
                        generated.append(nw)
                    if k2 == key:
                        if ordered_drain:
                            heappush(q, (nd, nw))
                        else:
                            q.append(nw)
                    elif k2 > key:
                        pending.setdefault(k2, []).append(nw)
                    else:
                        raise OrderingViolationError(
                            f"item {nw} has class key {k2} < current class {key}"
                        )
            else:
                is_useful = False
            if tracing:
                trace.append(
                    TraceRecord(
                        item=w,
                        class_key=key,
                        worker=0,
                        partition=0,
                        t_start=t_start,
                        t_end=time.perf_counter(),
                        useful=is_useful,
                        generated=tuple(generated),
                    )
                )
        if config.collect_class_sizes:
            stats.class_sizes.append(processed - epoch_start_processed)

    stats.items_processed = processed
    stats.relaxations_useful = useful
    stats.relaxations_stale = processed - useful
    stats.trace = trace
    return dist, stats


# ---------------------------------------------------------------------------
# Threaded path
# ---------------------------------------------------------------------------


class _SharedState:
    __slots__ = ("current_key", "stop", "error", "epoch_processed", "epoch_useful", "lock")

    def __init__(self):
        self.current_key = None
        self.stop = False
        self.error = None
        self.epoch_processed = 0
        self.epoch_useful = 0
        self.lock = threading.Lock()


def _run_threaded(graph: Graph, config: EngineConfig, seed: WorkItem) -> tuple[DistanceMap, RunStats]:
    topo = config.topology
    n_parts = topo.partitions
    groups = topo.groups_per_partition
    wpg = topo.workers_per_group
    wpp = groups * wpg
    total = topo.total_workers
    pmap = partition_1d(graph, n_parts)
    owners = pmap.owner_array().tolist()

    hierarchy = config.resolved_hierarchy()
    level = hierarchy.ordered_level
    queue_kind = "dijkstra" if level is not None else "chaotic"
    if level == "process":
        n_queues = n_parts
    elif level == "numa":
        n_queues = n_parts * groups
    else:  # thread-level queues, ordered (threadq) or FIFO (buffer)
        n_queues = total

    def queue_index(part: int, v: int) -> int:
        if level == "process":
            return part
        if level == "numa":
            return part * groups + v % groups
        return part * wpp + v % wpp

    ordering = config.ordering
    key_of = _key_fn(ordering)
    purge = ordering.kind in ("delta", "kla")
    kla = ordering.uses_levels
    tracing = config.record_trace

    dist = DistanceMap(graph.vertex_count)
    counter = ActiveWorkCounter()
    state = _SharedState()
    barrier = threading.Barrier(total + 1)
    pending_locks = [threading.Lock() for _ in range(n_parts)]
    pending: list[dict] = [dict() for _ in range(n_parts)]
    queues: list[LevelQueue] = []
    stats = RunStats()
    worker_traces: list[list[TraceRecord]] = [[] for _ in range(total)]
    totals_lock = threading.Lock()
    totals = {"processed": 0, "useful": 0, "routed": 0}

    off, tgt, wts = graph.adjacency_lists()
    vals = dist.values
    locks = dist._locks
    n_locks = len(locks)

    def worker(wid: int, part: int):
        my_trace = worker_traces[wid]
        batch_limit = config.batch_limit
        while True:
            barrier.wait()
            if state.stop:
                return
            key = state.current_key
            if level == "process":
                my_q = queues[part]
            elif level == "numa":
                my_q = queues[part * groups + (wid % wpp) // wpg]
            else:
                my_q = queues[wid]
            processed = useful = routed = 0
            outstanding = 0
            try:
                while True:
                    batch = my_q.drain(batch_limit)
                    if not batch:
                        if counter.value == 0:
                            break
                        time.sleep(5e-6)
                        continue
                    outstanding = len(batch)
                    out_epoch: dict[int, list] = {}
                    out_pend: dict[int, list] = {}
                    n_same = 0
                    for w in batch:
                        if tracing:
                            t_start = time.perf_counter()
                            generated = []
                        processed += 1
                        v = w[0]
                        d = w[1]
                        is_useful = False
                        if d < vals[v]:
                            lock = locks[v % n_locks]
                            lock.acquire()
                            if d < vals[v]:
                                vals[v] = d
                                is_useful = True
                            lock.release()
                        if is_useful:
                            useful += 1
                            lo = off[v]
                            hi = off[v + 1]
                            if kla:
                                lvl = w[2] + 1
                            for i in range(lo, hi):
                                nd = d + wts[i]
                                nw = (tgt[i], nd, lvl) if kla else (tgt[i], nd)
                                k2 = key_of(nw)
                                dest = owners[nw[0]]
                                if dest != part:
                                    routed += 1
                                if tracing:
                                    generated.append(nw)
                                if k2 == key:
                                    out_epoch.setdefault(queue_index(dest, nw[0]), []).append(nw)
                                    n_same += 1
                                elif k2 > key:
                                    out_pend.setdefault(dest, []).append(nw)
                                else:
                                    raise OrderingViolationError(
                                        f"item {nw} has class key {k2} < current class {key}"
                                    )
                        if tracing:
                            my_trace.append(
                                TraceRecord(
                                    item=w,
                                    class_key=key,
                                    worker=wid,
                                    partition=part,
                                    t_start=t_start,
                                    t_end=time.perf_counter(),
                                    useful=is_useful,
                                    generated=tuple(generated),
                                )
                            )
                    if n_same:
                        counter.add(n_same)
                        for qi, items in out_epoch.items():
                            queues[qi].enqueue_many(items)
                    for dest, items in out_pend.items():
                        with pending_locks[dest]:
                            pools = pending[dest]
                            for nw in items:
                                k2 = key_of(nw)
                                if k2 in pools:
                                    pools[k2].append(nw)
                                else:
                                    pools[k2] = [nw]
                    counter.add(-len(batch))
                    outstanding = 0
            except Exception as exc:  # surfaced by the coordinator after the epoch
                with state.lock:
                    if state.error is None:
                        state.error = exc
                # Release the aborted batch, then drain the remaining work so
                # every worker reaches quiescence and the end barrier.
                if outstanding:
                    counter.add(-outstanding)
                while counter.value != 0:
                    leftover = my_q.drain(batch_limit)
                    if leftover:
                        counter.add(-len(leftover))
                        processed += len(leftover)
                    else:
                        time.sleep(5e-6)
            with state.lock:
                state.epoch_processed += processed
                state.epoch_useful += useful
            with totals_lock:
                totals["processed"] += processed
                totals["useful"] += useful
                totals["routed"] += routed
            barrier.wait()

    threads = []
    for part in range(n_parts):
        for local in range(wpp):
            wid = part * wpp + local
            t = threading.Thread(target=worker, args=(wid, part), daemon=True)
            threads.append(t)
            t.start()

    # Seed at the owner partition of the source vertex.
    seed_key = key_of(seed)
    pending[owners[seed[0]]][seed_key] = [seed]

    try:
        while True:
            next_key = None
            for pools in pending:
                if pools:
                    k = min(pools)
                    if next_key is None or k < next_key:
                        next_key = k
            if next_key is None:
                break
            epoch_items: list[list[WorkItem]] = []
            for pools in pending:
                batch = pools.pop(next_key, None)
                if batch:
                    if purge:
                        live = [w for w in batch if w[1] < vals[w[0]]]
                        totals["processed"] += len(batch) - len(live)
                        batch = live
                    if batch:
                        epoch_items.append(batch)
            n_items = sum(len(b) for b in epoch_items)
            if n_items == 0:
                continue
            queues.clear()
            queues.extend(LevelQueue(queue_kind) for _ in range(n_queues))
            for batch in epoch_items:
                grouped: dict[int, list] = {}
                for w in batch:
                    grouped.setdefault(queue_index(owners[w[0]], w[0]), []).append(w)
                for qi, items in grouped.items():
                    queues[qi].enqueue_many(items)
            counter.reset(n_items)
            state.current_key = next_key
            state.epoch_processed = 0
            state.epoch_useful = 0
            stats.epochs += 1
            stats.epoch_keys.append(next_key)
            barrier.wait()  # epoch start
            barrier.wait()  # epoch end
            for q in queues:
                q.close()
            if state.error is not None:
                raise state.error
            if config.collect_class_sizes:
                stats.class_sizes.append(state.epoch_processed)
    finally:
        state.stop = True
        try:
            barrier.wait(timeout=30)
        except threading.BrokenBarrierError:
            pass
        for t in threads:
            t.join(timeout=30)

    stats.items_processed = totals["processed"]
    stats.relaxations_useful = totals["useful"]
    stats.relaxations_stale = totals["processed"] - totals["useful"]
    stats.messages_routed = totals["routed"]
    if tracing:
        merged = [r for worker_trace in worker_traces for r in worker_trace]
        merged.sort(key=lambda r: r.t_start)
        stats.trace = merged
    return dist, stats
