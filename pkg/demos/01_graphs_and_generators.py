#!/usr/bin/env python3
"""
Graph storage, loaders, and scale-free generators
=================================================

Everything downstream (the relaxation engine, the verification oracles, the
benchmark harness) consumes one immutable CSR structure. This walk-through
builds graphs three ways: by hand, from text formats, and with the recursive
Kronecker generator used for all the benchmark runs.
"""
import numpy as np

from ssspkit import (
    build_csr,
    generate_rmat,
    load_dimacs_gr,
    load_edge_list,
    partition_1d,
    rmat1_params,
    rmat2_params,
)

# ---------------------------------------------------------------------
# A graph is a list of (source, target, weight) triples packed into CSR.
# ---------------------------------------------------------------------
triangle = build_csr([(0, 1, 2), (0, 2, 5), (1, 2, 1)], vertex_count=3)
print("triangle:", triangle.vertex_count, "vertices,", triangle.edge_count, "edges")
for v in range(3):
    print(f"  out-edges of {v}:", list(triangle.neighbors(v)))

# The same graph from the two supported text formats.
edge_list_text = """\
# src dst weight
0 1 2
0 2 5
1 2 1
"""
dimacs_text = """\
c 1-based vertex ids
p sp 3 3
a 1 2 2
a 1 3 5
a 2 3 1
"""
g1 = load_edge_list(edge_list_text)
g2 = load_dimacs_gr(dimacs_text)
assert np.array_equal(g1.column_targets, g2.column_targets)
print("\nedge-list and DIMACS loaders agree on the triangle")

# ---------------------------------------------------------------------
# RMAT generation: recursively pick a quadrant of the adjacency matrix.
# RMAT1 is strongly skewed (a=0.57) with weights 1..100; RMAT2 is milder
# (a=0.5) with weights 1..255.
# ---------------------------------------------------------------------
for name, params in [("RMAT1", rmat1_params(10, seed=7)), ("RMAT2", rmat2_params(10, seed=7))]:
    g = generate_rmat(params)
    degrees = np.diff(g.row_offsets)
    print(
        f"\n{name} scale 10: {g.vertex_count} vertices, {g.edge_count} edges, "
        f"max out-degree {degrees.max()}, weights {g.weights.min()}..{g.weights.max()}"
    )
    # The skew shows up as a heavy degree tail.
    for q in (50, 90, 99, 100):
        print(f"  degree p{q}: {int(np.percentile(degrees, q))}")

# Generation is deterministic in the seed -- the benchmark matrix depends on it.
a = generate_rmat(rmat1_params(8, seed=3))
b = generate_rmat(rmat1_params(8, seed=3))
assert np.array_equal(a.column_targets, b.column_targets)
print("\nsame seed, same graph: reproducible benchmark inputs")

# ---------------------------------------------------------------------
# 1-D block partitioning assigns each vertex an owning partition; the
# engine routes every generated work item to the owner of its vertex.
# ---------------------------------------------------------------------
g = generate_rmat(rmat1_params(8, seed=3))
pmap = partition_1d(g, 4)
print("\npartition sizes over 4 owners:", pmap.sizes())
print("vertex 200 is owned by partition", pmap.owner(200))
