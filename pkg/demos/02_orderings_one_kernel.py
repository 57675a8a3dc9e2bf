#!/usr/bin/env python3
"""
One relaxation kernel, four scheduling disciplines
==================================================

The same self-stabilizing relaxation step -- "if this offer improves the
distance, take it and offer to the neighbours" -- yields four classic
shortest-path algorithms depending only on the strict weak ordering used to
group work items into equivalence classes:

  chaotic      everything is one class          -> pure chaotic relaxation
  dijkstra     order by exact distance          -> Dijkstra's algorithm
  delta(width) order by distance bucket         -> delta-stepping
  kla(k)       order by traversal-level block   -> k-level-asynchronous

This script makes the class structure visible, then shows how it trades
epoch count (synchronization) against wasted relaxations (redundant work).
"""
from ssspkit import (
    EngineConfig,
    OrderingSpec,
    class_key,
    compare,
    dijkstra_reference,
    generate_rmat,
    rmat1_params,
    run,
    validate_swo,
)

# ---------------------------------------------------------------------
# Work items are plain tuples: (vertex, tentative distance) or, for the
# level-aware ordering, (vertex, distance, level).
# ---------------------------------------------------------------------
w1, w2 = ("a", 4, 2), ("b", 7, 3)
for order in [
    OrderingSpec.chaotic(),
    OrderingSpec.dijkstra(),
    OrderingSpec.delta_stepping(3),
    OrderingSpec.kla(2),
]:
    print(
        f"{order.describe():10s} compare{(w1, w2)} -> {compare(order, w1, w2).name:13s}"
        f"  keys {class_key(order, w1)}, {class_key(order, w2)}"
    )

# Each ordering really is a strict weak ordering (irreflexive, asymmetric,
# transitive, with transitive incomparability) -- checked exhaustively on a
# random universe.
universe = [(v, (v * 13) % 50, v % 9) for v in range(120)]
for order in [OrderingSpec.dijkstra(), OrderingSpec.delta_stepping(3)]:
    report = validate_swo(order, universe)
    print(f"axioms for {order.describe()}: {'ok' if report.ok else report.violations[0]}")

# ---------------------------------------------------------------------
# The engine drains one equivalence class per epoch, smallest key first.
# The ordering decides everything about the run's shape.
# ---------------------------------------------------------------------
graph = generate_rmat(rmat1_params(11, seed=2))
source = 0
oracle = dijkstra_reference(graph, source)

print(f"\nscale-11 graph, {graph.edge_count} edges, source {source}")
print(f"{'ordering':12s} {'epochs':>7s} {'useful':>8s} {'stale':>8s} {'total':>8s}")
for order in [
    OrderingSpec.chaotic(),
    OrderingSpec.dijkstra(),
    OrderingSpec.delta_stepping(1),
    OrderingSpec.delta_stepping(3),
    OrderingSpec.delta_stepping(7),
    OrderingSpec.kla(1),
    OrderingSpec.kla(3),
]:
    dist, stats = run(graph, EngineConfig(ordering=order), source)
    assert dist.values == oracle.values  # every discipline lands on the oracle
    print(
        f"{order.describe():12s} {stats.epochs:7d} {stats.relaxations_useful:8d} "
        f"{stats.relaxations_stale:8d} {stats.items_processed:8d}"
    )

print(
    "\nReading the table: chaotic needs exactly one epoch but relaxes the most\n"
    "items; dijkstra does near-minimal work at the cost of one epoch per\n"
    "distinct distance; delta and kla interpolate between the two extremes by\n"
    "widening the classes. All of them produce identical distances."
)
