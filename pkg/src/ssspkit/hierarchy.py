"""Spatial ordering hierarchy and the shared per-level work buffers.

The hierarchy is a four-level tree GLOBAL -> PROCESS -> NUMA -> THREAD. The
root carries the machine's ordering; each lower level is annotated either
``chaotic`` (unordered batch buffer) or ``dijkstra`` (distance-priority
buffer). The named presets ``buffer``/``threadq``/``numaq``/``nodeq`` place a
single distance-ordered buffer at no level, the thread, the NUMA group, or
the process respectively.
"""
from __future__ import annotations

import heapq
import threading
from collections import deque
from dataclasses import dataclass

from .model import OrderingSpec, WorkItem

__all__ = [
    "LEVELS",
    "PRESETS",
    "SpatialHierarchy",
    "LevelQueue",
    "QueueProtocolError",
    "make_hierarchy",
    "preset",
]

#: Non-root hierarchy levels, outermost first.
LEVELS = ("process", "numa", "thread")

PRESETS = ("buffer", "threadq", "numaq", "nodeq")

_ANNOTATIONS = ("chaotic", "dijkstra")


class QueueProtocolError(RuntimeError):
    """Raised when a level queue is used outside the epoch protocol."""


@dataclass(frozen=True)
class SpatialHierarchy:
    """Ordering annotations for the spatial tree; root equals the machine
    ordering and unannotated levels default to chaotic."""

    root: OrderingSpec
    process: str = "chaotic"
    numa: str = "chaotic"
    thread: str = "chaotic"

    def __post_init__(self):
        for level in LEVELS:
            annotation = getattr(self, level)
            if annotation not in _ANNOTATIONS:
                raise ValueError(
                    f"unsupported {level} annotation {annotation!r}; expected one of {_ANNOTATIONS}"
                )
        ordered = [level for level in LEVELS if getattr(self, level) != "chaotic"]
        if len(ordered) > 1:
            raise ValueError(
                f"at most one non-root level may be ordered, got {ordered}"
            )

    @property
    def ordered_level(self) -> str | None:
        """The single non-chaotic level below the root, or None (buffer)."""
        for level in LEVELS:
            if getattr(self, level) != "chaotic":
                return level
        return None

    def preset_name(self) -> str:
        return {None: "buffer", "thread": "threadq", "numa": "numaq", "process": "nodeq"}[
            self.ordered_level
        ]


def make_hierarchy(root: OrderingSpec, annotations: dict[str, str] | None = None) -> SpatialHierarchy:
    """Build a validated hierarchy from a level -> annotation map.

    ``annotations`` may omit levels (default chaotic) and may restate the root
    under the key ``"global"`` only if it matches the machine ordering.
    """
    annotations = dict(annotations or {})
    restated = annotations.pop("global", None)
    if restated is not None and restated != root and restated != root.kind:
        raise ValueError(f"global annotation {restated!r} conflicts with the root ordering {root.kind!r}")
    unknown = set(annotations) - set(LEVELS)
    if unknown:
        raise ValueError(f"unknown hierarchy levels {sorted(unknown)}; expected {LEVELS}")
    return SpatialHierarchy(root=root, **annotations)


def preset(name: str, root: OrderingSpec) -> SpatialHierarchy:
    """Named hierarchy shapes: ``buffer`` (all chaotic), ``threadq``/``numaq``/
    ``nodeq`` (distance ordering at the thread / NUMA / process level)."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
    level = {"buffer": None, "threadq": "thread", "numaq": "numa", "nodeq": "process"}[name]
    return make_hierarchy(root, {level: "dijkstra"} if level else {})


class LevelQueue:
    """Shared work buffer for the workers under one hierarchy node.

    ``dijkstra`` annotation drains the minimal-distance items present in
    non-decreasing order; ``chaotic`` drains in arbitrary (FIFO) order.
    Enqueue and drain are linearizable; concurrent drainers receive disjoint
    items. ``close()`` marks the end of an epoch, after which enqueue is a
    protocol error.
    """

    __slots__ = ("kind", "_lock", "_heap", "_fifo", "_closed")

    def __init__(self, kind: str = "chaotic"):
        if kind not in _ANNOTATIONS:
            raise ValueError(f"unsupported queue kind {kind!r}")
        self.kind = kind
        self._lock = threading.Lock()
        self._heap: list[tuple] = []
        self._fifo: deque = deque()
        self._closed = False

    def enqueue(self, w: WorkItem) -> None:
        with self._lock:
            if self._closed:
                raise QueueProtocolError("enqueue on a closed level queue")
            if self.kind == "dijkstra":
                heapq.heappush(self._heap, (w[1], w))
            else:
                self._fifo.append(w)

    def enqueue_many(self, items: list[WorkItem]) -> None:
        with self._lock:
            if self._closed:
                raise QueueProtocolError("enqueue on a closed level queue")
            if self.kind == "dijkstra":
                heap = self._heap
                for w in items:
                    heapq.heappush(heap, (w[1], w))
            else:
                self._fifo.extend(items)

    def drain(self, batch_limit: int | None = None) -> list[WorkItem]:
        """Remove and return up to ``batch_limit`` items (all if None)."""
        with self._lock:
            if self.kind == "dijkstra":
                heap = self._heap
                limit = len(heap) if batch_limit is None else min(batch_limit, len(heap))
                return [heapq.heappop(heap)[1] for _ in range(limit)]
            fifo = self._fifo
            limit = len(fifo) if batch_limit is None else min(batch_limit, len(fifo))
            return [fifo.popleft() for _ in range(limit)]

    def close(self) -> None:
        with self._lock:
            self._closed = True

    def __len__(self) -> int:
        return len(self._heap) + len(self._fifo)

    def empty(self) -> bool:
        return not (self._heap or self._fifo)
