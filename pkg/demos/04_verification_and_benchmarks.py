#!/usr/bin/env python3
"""
Oracles, fault injection, and the benchmark harness
===================================================

Correctness rests on three mutually independent checks, and the benchmark
harness refuses to report a timing row whose distances fail them. The same
harness backs the ``sssp-bench`` command line.
"""
from ssspkit import (
    BenchSpec,
    OrderingSpec,
    bellman_ford_reference,
    default_matrix_orderings,
    dijkstra_reference,
    emit_report,
    generate_rmat,
    matrix,
    relaxation_trend,
    rmat1_params,
    run_bench,
    verify_distances,
    verify_fixed_point,
)

graph = generate_rmat(rmat1_params(10, seed=9))

# ---------------------------------------------------------------------
# Two oracles built on different principles (priority-queue search vs.
# repeated full-edge relaxation) agree exactly; a third check tests the
# shortest-path fixed-point equations directly, with no oracle at all.
# ---------------------------------------------------------------------
a = dijkstra_reference(graph, 0)
b = bellman_ford_reference(graph, 0)
print("oracles agree:", a.values == b.values)
print("fixed point:  ", verify_fixed_point(graph, a.values, 0).summary())

# Perturb one entry and both detectors fire.
broken = list(a.values)
broken[100] += 1
print("\nafter corrupting vertex 100:")
print("  vs oracle:   ", verify_distances(broken, a).summary().splitlines()[0])
print("  fixed point: ", verify_fixed_point(graph, broken, 0).summary().splitlines()[0])

# ---------------------------------------------------------------------
# One benchmark cell: build the graph once, run trials x sources, verify
# every run, report mean and sample-sigma.
# ---------------------------------------------------------------------
spec = BenchSpec(
    ordering=OrderingSpec.delta_stepping(3),
    rmat=rmat1_params(10, seed=9),
    preset_name="threadq",
    sources=2,
    trials=3,
)
report = run_bench(spec)
print("\nsingle cell (CSV):")
print(emit_report(report, "csv"))

# ---------------------------------------------------------------------
# The full matrix: three algorithms x four presets on one graph. The
# equivalent command line is:
#   sssp-bench --rmat1 --scale 10 --seed 9 --ordering delta --delta 3 --matrix
# ---------------------------------------------------------------------
grid = matrix(spec, orderings=default_matrix_orderings(spec))
print(f"matrix: {len(grid.rows)} cells, all verified: {all(r.verified for r in grid.rows)}")
trend = relaxation_trend(grid.rows)
print("mean relaxations by algorithm:")
for alg, mean in sorted(trend.items(), key=lambda kv: kv[1]):
    print(f"  {alg:10s} {mean:12.1f}")
print(
    "\nDistance-aware bucketing (delta) does the least total work here;\n"
    "chaotic pays redundant relaxations for its single epoch; level-ordered\n"
    "kla(1) re-relaxes heavily because traversal level ignores distance.\n"
    "Every row above was verified against the oracle before being reported."
)
