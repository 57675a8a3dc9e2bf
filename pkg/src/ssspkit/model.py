"""Work items, strict weak orderings, and the shortest-path processing
functions.

A work item is a plain tuple: ``(vertex, distance)`` for distance-driven
runs, ``(vertex, distance, level)`` when level ordering (KLA) is in play.
Bracket access matches the tuple positions: ``w[0]`` vertex, ``w[1]``
distance, ``w[2]`` level.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .graphs import Graph

__all__ = [
    "INFINITY",
    "WorkItem",
    "Comparison",
    "OrderingSpec",
    "DistanceMap",
    "SwoReport",
    "compare",
    "class_key",
    "induced_class_compare",
    "validate_swo",
    "pf_sssp",
    "pf_kla",
]

#: Sentinel distance for unreached vertices; strictly greater than any finite
#: path length and safe to compare against (never used in arithmetic).
INFINITY = math.inf

WorkItem = tuple  # (vertex, distance) or (vertex, distance, level)


class Comparison(enum.Enum):
    LESS = -1
    INCOMPARABLE = 0
    GREATER = 1
    # Alias: equal class keys mean "same equivalence class", which is exactly
    # incomparability of the underlying items.
    EQUAL = 0


@dataclass(frozen=True)
class OrderingSpec:
    """One of the four strict weak orderings on work items.

    ``chaotic`` compares nothing (one big class), ``dijkstra`` compares exact
    distances, ``delta`` compares distance buckets of width ``delta``, and
    ``kla`` compares level buckets of height ``k``.
    """

    kind: str
    delta: float | None = None
    k: int | None = None

    _KINDS = ("chaotic", "dijkstra", "delta", "kla")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown ordering kind {self.kind!r}")
        if self.kind == "delta":
            if self.delta is None or self.delta <= 0:
                raise ValueError("delta ordering requires delta > 0")
        elif self.kind == "kla":
            if self.k is None or self.k < 1:
                raise ValueError("kla ordering requires k >= 1")

    @classmethod
    def chaotic(cls) -> "OrderingSpec":
        return cls("chaotic")

    @classmethod
    def dijkstra(cls) -> "OrderingSpec":
        return cls("dijkstra")

    @classmethod
    def delta_stepping(cls, delta: float) -> "OrderingSpec":
        return cls("delta", delta=delta)

    @classmethod
    def kla(cls, k: int) -> "OrderingSpec":
        return cls("kla", k=k)

    @property
    def uses_levels(self) -> bool:
        return self.kind == "kla"

    def describe(self) -> str:
        if self.kind == "delta":
            d = self.delta
            return f"delta({int(d) if d == int(d) else d})"
        if self.kind == "kla":
            return f"kla({self.k})"
        return self.kind


def class_key(order: OrderingSpec, w: WorkItem):
    """Equivalence-class key of ``w``: two items are incomparable exactly when
    their keys are equal, and keys compare in the induced class order."""
    if order.kind == "chaotic":
        return 0
    if order.kind == "dijkstra":
        return w[1]
    if order.kind == "delta":
        return int(w[1] // order.delta)
    # kla
    if len(w) < 3:
        raise ValueError("kla ordering requires work items with a level element")
    return w[2] // order.k


def compare(order: OrderingSpec, w1: WorkItem, w2: WorkItem) -> Comparison:
    """Compare two work items under ``order``."""
    if order.kind == "chaotic":
        return Comparison.INCOMPARABLE
    k1, k2 = class_key(order, w1), class_key(order, w2)
    if k1 < k2:
        return Comparison.LESS
    if k1 > k2:
        return Comparison.GREATER
    return Comparison.INCOMPARABLE


def induced_class_compare(order: OrderingSpec, key1, key2) -> Comparison:
    """Compare two class keys produced by ``class_key`` under the same order.

    Keys are bare numbers, so they carry no provenance; callers must not mix
    keys from different orderings.
    """
    for key in (key1, key2):
        if not isinstance(key, (int, float)):
            raise TypeError(f"class key must be a number, got {type(key).__name__}")
    if key1 < key2:
        return Comparison.LESS
    if key1 > key2:
        return Comparison.GREATER
    return Comparison.EQUAL


# ---------------------------------------------------------------------------
# Strict weak ordering validation
# ---------------------------------------------------------------------------


@dataclass
class SwoReport:
    """Outcome of exhaustively checking the four strict-weak-ordering axioms
    over a finite item universe."""

    ok: bool
    violations: list[tuple[str, tuple]]

    def first(self) -> tuple[str, tuple] | None:
        return self.violations[0] if self.violations else None


def validate_swo(
    order: OrderingSpec,
    universe: Sequence[WorkItem],
    compare_fn: Callable[[WorkItem, WorkItem], Comparison] | None = None,
) -> SwoReport:
    """Check irreflexivity, asymmetry, and transitivity of both LESS and
    INCOMPARABLE over all pairs/triples of ``universe``.

    ``compare_fn`` overrides the comparator (used to exercise the checker with
    deliberately broken relations). Intended for universes up to a few hundred
    items; triples are checked with boolean matrix products.
    """
    items = list(universe)
    n = len(items)
    cmp = compare_fn if compare_fn is not None else (lambda a, b: compare(order, a, b))
    less = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            less[i, j] = cmp(items[i], items[j]) is Comparison.LESS
    violations: list[tuple[str, tuple]] = []

    diag = np.flatnonzero(np.diag(less))
    if diag.size:
        i = int(diag[0])
        violations.append(("irreflexivity", (items[i],)))

    asym = less & less.T
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        violations.append(("asymmetry", (items[i], items[j])))

    # LESS transitivity: (i<j and j<k) must imply i<k.
    chain = (less.astype(np.uint8) @ less.astype(np.uint8)) > 0
    broken = chain & ~less
    if broken.any():
        i, k = map(int, np.argwhere(broken)[0])
        j = int(np.flatnonzero(less[i] & less[:, k])[0])
        violations.append(("transitivity_of_less", (items[i], items[j], items[k])))

    # INCOMPARABLE transitivity: equivalence must be transitive.
    incomp = ~(less | less.T)
    chain_i = (incomp.astype(np.uint8) @ incomp.astype(np.uint8)) > 0
    broken_i = chain_i & ~incomp
    if broken_i.any():
        i, k = map(int, np.argwhere(broken_i)[0])
        j = int(np.flatnonzero(incomp[i] & incomp[:, k])[0])
        violations.append(("transitivity_of_incomparable", (items[i], items[j], items[k])))

    return SwoReport(ok=not violations, violations=violations)


# ---------------------------------------------------------------------------
# Distance state
# ---------------------------------------------------------------------------

_N_STRIPES = 256  # lock striping granularity for concurrent min-updates


class DistanceMap:
    """Per-vertex tentative distances with a linearizable conditional-min
    update; values only ever decrease. Unreached vertices hold ``INFINITY``.
    """

    __slots__ = ("values", "_locks")

    def __init__(self, vertex_count: int):
        self.values: list[float] = [INFINITY] * vertex_count
        self._locks = [threading.Lock() for _ in range(min(_N_STRIPES, max(vertex_count, 1)))]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> float:
        return self.values[v]

    def update_min(self, v: int, d: float) -> bool:
        """Set ``values[v] = d`` iff ``d < values[v]``, atomically; returns
        whether the update happened."""
        if d < 0:
            raise ValueError("distance must be non-negative")
        values = self.values
        if d >= values[v]:  # cheap pre-check; re-checked under the stripe lock
            return False
        lock = self._locks[v % len(self._locks)]
        with lock:
            if d < values[v]:
                values[v] = d
                return True
            return False

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def __eq__(self, other) -> bool:
        if isinstance(other, DistanceMap):
            return self.values == other.values
        return NotImplemented


# ---------------------------------------------------------------------------
# Processing functions
# ---------------------------------------------------------------------------


def pf_sssp(graph: Graph, dist: DistanceMap, w: WorkItem) -> list[WorkItem]:
    """Relax work item ``w = (v, d)``: if ``d`` strictly improves ``dist[v]``,
    commit it and emit one item per out-edge of ``v`` (parallel edges emit
    one item each); otherwise emit nothing and leave state untouched."""
    v, d = w[0], w[1]
    if not dist.update_min(v, d):
        return []
    return [(u, d + weight) for u, weight in graph.neighbors(v)]


def pf_kla(graph: Graph, dist: DistanceMap, w: WorkItem) -> list[WorkItem]:
    """Level-carrying variant of ``pf_sssp``: same condition and distance
    update; every emitted item carries ``level = w[2] + 1``."""
    v, d = w[0], w[1]
    if len(w) < 3:
        raise ValueError("pf_kla requires work items with a level element")
    if not dist.update_min(v, d):
        return []
    next_level = w[2] + 1
    return [(u, d + weight, next_level) for u, weight in graph.neighbors(v)]
