"""Graph storage and construction: CSR graphs, RMAT generation, file loaders,
and 1D block partitioning.

Graphs are directed with non-negative integer edge weights and are immutable
after construction; all readers may share a Graph freely across threads.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

__all__ = [
    "Graph",
    "GraphFormatError",
    "RmatParams",
    "rmat1_params",
    "rmat2_params",
    "FixedWeight",
    "UniformWeight",
    "PartitionMap",
    "build_csr",
    "generate_rmat",
    "load_edge_list",
    "load_dimacs_gr",
    "partition_1d",
    "neighbors",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph input files (carries the offending line number)."""


@dataclass(frozen=True)
class Graph:
    """Directed weighted graph in compressed sparse row form.

    ``row_offsets`` has length ``vertex_count + 1``; the out-edges of vertex
    ``v`` occupy ``column_targets[row_offsets[v]:row_offsets[v+1]]`` with
    aligned ``weights``. Parallel edges and self-loops are kept as given.
    """

    vertex_count: int
    row_offsets: np.ndarray
    column_targets: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        off = self.row_offsets
        if len(off) != self.vertex_count + 1 or off[0] != 0:
            raise ValueError("row_offsets must have length vertex_count+1 and start at 0")
        if np.any(np.diff(off) < 0):
            raise ValueError("row_offsets must be non-decreasing")
        if off[-1] != len(self.column_targets) or len(self.column_targets) != len(self.weights):
            raise ValueError("row_offsets[-1] must equal the number of edges")
        if len(self.column_targets) and self.column_targets.max(initial=0) >= self.vertex_count:
            raise ValueError("edge target out of range")
        if len(self.column_targets) and self.column_targets.min(initial=0) < 0:
            raise ValueError("edge target out of range")
        if len(self.weights) and self.weights.min(initial=0) < 0:
            raise ValueError("negative edge weight")

    @property
    def edge_count(self) -> int:
        return int(self.row_offsets[-1])

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.row_offsets[v + 1] - self.row_offsets[v])

    def neighbors(self, v: int) -> Iterator[tuple[int, int]]:
        """Yield ``(target, weight)`` for the CSR slice of ``v`` in storage order."""
        self._check_vertex(v)
        lo, hi = int(self.row_offsets[v]), int(self.row_offsets[v + 1])
        for i in range(lo, hi):
            yield int(self.column_targets[i]), int(self.weights[i])

    def adjacency_lists(self) -> tuple[list[int], list[int], list[int]]:
        """CSR arrays as plain Python lists (cached); used by scalar-heavy loops
        where list indexing beats ndarray indexing."""
        cached = self.__dict__.get("_adj_lists")
        if cached is None:
            cached = (
                self.row_offsets.tolist(),
                self.column_targets.tolist(),
                self.weights.tolist(),
            )
            object.__setattr__(self, "_adj_lists", cached)
        return cached

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edges as ``(sources, targets, weights)`` arrays, one entry per edge."""
        sources = getattr(self, "_edge_sources", None)
        if sources is None:
            sources = np.repeat(
                np.arange(self.vertex_count, dtype=np.int64), np.diff(self.row_offsets)
            )
            object.__setattr__(self, "_edge_sources", sources)
        return sources, self.column_targets, self.weights

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} out of range [0, {self.vertex_count})")


def neighbors(graph: Graph, v: int) -> Iterator[tuple[int, int]]:
    """Out-edges of ``v`` as ``(target, weight)`` pairs in storage order."""
    return graph.neighbors(v)


def build_csr(edges: Iterable[tuple[int, int, int]], vertex_count: int) -> Graph:
    """Build a CSR graph from ``(source, target, weight)`` triples.

    Edges are grouped by source, preserving input order within each source.
    Rejects negative weights and out-of-range endpoints.
    """
    edge_list = list(edges)
    if not edge_list:
        return Graph(
            vertex_count=vertex_count,
            row_offsets=np.zeros(vertex_count + 1, dtype=np.int64),
            column_targets=np.empty(0, dtype=np.int64),
            weights=np.empty(0, dtype=np.int64),
        )
    arr = np.asarray(edge_list, dtype=np.int64)
    src, dst, wgt = arr[:, 0], arr[:, 1], arr[:, 2]
    if src.min() < 0 or src.max() >= vertex_count or dst.min() < 0 or dst.max() >= vertex_count:
        raise ValueError("edge endpoint out of range")
    if wgt.min() < 0:
        raise ValueError("negative edge weight")
    order = np.argsort(src, kind="stable")
    counts = np.bincount(src, minlength=vertex_count)
    row_offsets = np.concatenate(([0], np.cumsum(counts)))
    return Graph(
        vertex_count=vertex_count,
        row_offsets=row_offsets.astype(np.int64),
        column_targets=dst[order],
        weights=wgt[order],
    )


# ---------------------------------------------------------------------------
# Synthetic RMAT generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RmatParams:
    """Recursive-quadrant (RMAT) generator parameters; 2^scale vertices and
    edge_factor * 2^scale directed edges."""

    scale: int
    edge_factor: int
    a: float
    b: float
    c: float
    d: float
    wmin: int
    wmax: int
    seed: int

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be non-negative")
        if self.edge_factor < 0:
            raise ValueError("edge_factor must be non-negative")
        if abs(self.a + self.b + self.c + self.d - 1.0) > 1e-9:
            raise ValueError("quadrant probabilities must sum to 1")
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("quadrant probabilities must be non-negative")
        # wmin = 0 is allowed so zero-weighted road-network style inputs can be
        # reproduced; strict-improvement relaxation keeps zero weights safe.
        if not (0 <= self.wmin <= self.wmax):
            raise ValueError("need 0 <= wmin <= wmax")


def rmat1_params(scale: int, edge_factor: int = 16, seed: int = 0) -> RmatParams:
    """Graph500 BFS-benchmark quadrant probabilities with weights in [1, 100]."""
    return RmatParams(scale, edge_factor, 0.57, 0.19, 0.19, 0.05, 1, 100, seed)


def rmat2_params(scale: int, edge_factor: int = 16, seed: int = 0) -> RmatParams:
    """Graph500 SSSP-benchmark quadrant probabilities with weights in [1, 255]."""
    return RmatParams(scale, edge_factor, 0.50, 0.10, 0.10, 0.30, 1, 255, seed)


def generate_rmat(params: RmatParams) -> Graph:
    """Generate an RMAT graph by per-edge independent recursive quadrant descent.

    Duplicates and self-loops are kept, so the edge count is exactly
    ``edge_factor * 2**scale``. Deterministic for a fixed seed.
    """
    n = 1 << params.scale
    m = params.edge_factor * n
    rng = np.random.default_rng(params.seed)
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    # Quadrants: 0 = (0,0), 1 = (0,1), 2 = (1,0), 3 = (1,1) in (src, dst) bits.
    t_ab = params.a + params.b
    t_abc = t_ab + params.c
    for bit in range(params.scale):
        r = rng.random(m)
        quadrant = (r >= params.a).astype(np.int64) + (r >= t_ab) + (r >= t_abc)
        src |= (quadrant >> 1) << bit
        dst |= (quadrant & 1) << bit
    weights = rng.integers(params.wmin, params.wmax + 1, size=m, dtype=np.int64)
    order = np.argsort(src, kind="stable")
    counts = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
    row_offsets = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    return Graph(
        vertex_count=n,
        row_offsets=row_offsets,
        column_targets=dst[order],
        weights=weights[order],
    )


# ---------------------------------------------------------------------------
# File loaders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedWeight:
    """Fill missing edge weights with a constant."""

    weight: int


@dataclass(frozen=True)
class UniformWeight:
    """Fill missing edge weights uniformly from [wmin, wmax], seeded."""

    wmin: int
    wmax: int
    seed: int = 0


def _as_lines(stream: str | TextIO | Iterable[str]) -> Iterable[str]:
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def load_edge_list(
    stream: str | TextIO | Iterable[str],
    default_weight_policy: FixedWeight | UniformWeight = FixedWeight(1),
    *,
    symmetrize: bool = False,
    vertex_count: int | None = None,
) -> Graph:
    """Load a ``src dst [weight]`` text edge list ('#' starts a comment line).

    Missing weights are filled by the policy. The vertex count is inferred as
    ``max id + 1`` unless given. ``symmetrize`` adds the reverse of every edge
    (for undirected inputs; SSSP itself is always directional).
    """
    edges: list[tuple[int, int, int]] = []
    missing: list[int] = []
    for lineno, raw in enumerate(_as_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'src dst [weight]', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = int(parts[2]) if len(parts) == 3 else -1
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field in {line!r}") from None
        if len(parts) == 2:
            missing.append(len(edges))
        edges.append((u, v, w))
    if missing:
        if isinstance(default_weight_policy, FixedWeight):
            fill = [default_weight_policy.weight] * len(missing)
        else:
            rng = np.random.default_rng(default_weight_policy.seed)
            fill = rng.integers(
                default_weight_policy.wmin, default_weight_policy.wmax + 1, size=len(missing)
            ).tolist()
        for idx, w in zip(missing, fill):
            u, v, _ = edges[idx]
            edges[idx] = (u, v, int(w))
    if symmetrize:
        edges = edges + [(v, u, w) for (u, v, w) in edges]
    if vertex_count is None:
        vertex_count = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return build_csr(edges, max(vertex_count, 0))


def load_dimacs_gr(stream: str | TextIO | Iterable[str]) -> Graph:
    """Load a DIMACS shortest-path ``.gr`` file (1-based vertices, ``a u v w``
    arc lines); vertices are shifted to 0-based."""
    n = m = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(_as_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "sp":
                raise GraphFormatError(f"line {lineno}: malformed problem line {line!r}")
            n, m = int(parts[2]), int(parts[3])
        elif parts[0] == "a":
            if n is None:
                raise GraphFormatError(f"line {lineno}: arc before problem line")
            if len(parts) != 4:
                raise GraphFormatError(f"line {lineno}: malformed arc line {line!r}")
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer field in {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex id out of range in {line!r}")
            edges.append((u - 1, v - 1, w))
        else:
            raise GraphFormatError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise GraphFormatError("missing problem line ('p sp n m')")
    if len(edges) != m:
        raise GraphFormatError(f"arc count mismatch: problem line declares {m}, found {len(edges)}")
    return build_csr(edges, n)


# ---------------------------------------------------------------------------
# 1D block partitioning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionMap:
    """Contiguous block ownership of vertices: the first ``vertex_count %
    num_partitions`` partitions hold one extra vertex, so sizes differ by at
    most one."""

    vertex_count: int
    num_partitions: int

    def __post_init__(self):
        if self.num_partitions < 1:
            raise ValueError("num_partitions must be >= 1")

    def owner(self, v: int) -> int:
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} out of range [0, {self.vertex_count})")
        base, extra = divmod(self.vertex_count, self.num_partitions)
        if base == 0:
            return v
        split = extra * (base + 1)
        if v < split:
            return v // (base + 1)
        return extra + (v - split) // base

    def owner_array(self) -> np.ndarray:
        """Owner of every vertex as an int64 array (cached)."""
        cached = self.__dict__.get("_owner_array")
        if cached is None:
            sizes = np.asarray(self.sizes(), dtype=np.int64)
            cached = np.repeat(np.arange(self.num_partitions, dtype=np.int64), sizes)
            object.__setattr__(self, "_owner_array", cached)
        return cached

    def sizes(self) -> list[int]:
        base, extra = divmod(self.vertex_count, self.num_partitions)
        return [base + 1 if p < extra else base for p in range(self.num_partitions)]

    def vertex_range(self, p: int) -> tuple[int, int]:
        """Half-open vertex range owned by partition ``p``."""
        if not 0 <= p < self.num_partitions:
            raise IndexError(f"partition {p} out of range")
        sizes = self.sizes()
        lo = sum(sizes[:p])
        return lo, lo + sizes[p]


def partition_1d(graph: Graph, num_partitions: int) -> PartitionMap:
    """Block-partition vertices into ``num_partitions`` contiguous ranges."""
    if num_partitions < 1:
        raise ValueError("num_partitions must be >= 1")
    return PartitionMap(graph.vertex_count, num_partitions)
