from __future__ import annotations

import pytest

from ssspkit.hierarchy import (
    LevelQueue,
    QueueProtocolError,
    make_hierarchy,
    preset,
)
from ssspkit.model import OrderingSpec


class TestMakeHierarchy:
    def test_numa_dijkstra_example(self):
        h = make_hierarchy(OrderingSpec.delta_stepping(3), {"numa": "dijkstra"})
        assert h.numa == "dijkstra"
        assert h.process == "chaotic" and h.thread == "chaotic"
        assert h.ordered_level == "numa"

    def test_default_all_chaotic(self):
        h = make_hierarchy(OrderingSpec.kla(2))
        assert h.ordered_level is None
        assert h.preset_name() == "buffer"

    def test_root_conflict_rejected(self):
        with pytest.raises(ValueError, match="conflicts"):
            make_hierarchy(OrderingSpec.delta_stepping(3), {"global": "dijkstra"})

    def test_root_restated_identically_ok(self):
        root = OrderingSpec.delta_stepping(3)
        h = make_hierarchy(root, {"global": root, "thread": "dijkstra"})
        assert h.root == root

    def test_unknown_level_rejected(self):
        with pytest.raises(ValueError, match="unknown hierarchy level"):
            make_hierarchy(OrderingSpec.chaotic(), {"rack": "dijkstra"})

    def test_multiple_ordered_levels_rejected(self):
        with pytest.raises(ValueError, match="at most one"):
            make_hierarchy(OrderingSpec.chaotic(), {"numa": "dijkstra", "thread": "dijkstra"})

    def test_unknown_annotation_rejected(self):
        with pytest.raises(ValueError, match="unsupported"):
            make_hierarchy(OrderingSpec.chaotic(), {"numa": "delta"})


class TestPreset:
    @pytest.mark.parametrize(
        "name,level",
        [("buffer", None), ("threadq", "thread"), ("numaq", "numa"), ("nodeq", "process")],
    )
    def test_shapes(self, name, level):
        h = preset(name, OrderingSpec.delta_stepping(3))
        assert h.ordered_level == level
        assert h.preset_name() == name

    def test_buffer_chaotic_root(self):
        h = preset("buffer", OrderingSpec.chaotic())
        assert h.root == OrderingSpec.chaotic()
        assert h.ordered_level is None

    def test_nodeq_under_kla(self):
        h = preset("nodeq", OrderingSpec.kla(1))
        assert h.process == "dijkstra"
        assert h.root.kind == "kla"

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            preset("rackq", OrderingSpec.chaotic())


class TestLevelQueue:
    def test_singleton_round_trip(self):
        q = LevelQueue("chaotic")
        q.enqueue((3, 7))
        assert q.drain() == [(3, 7)]
        assert q.empty()

    def test_priority_drain_order(self):
        q = LevelQueue("dijkstra")
        for w in [(0, 5), (1, 2), (2, 9)]:
            q.enqueue(w)
        assert q.drain() == [(1, 2), (0, 5), (2, 9)]

    def test_priority_batch_limit(self):
        q = LevelQueue("dijkstra")
        q.enqueue_many([("x", 4), ("y", 1), ("z", 7)])
        assert q.drain(2) == [("y", 1), ("x", 4)]
        assert q.drain(2) == [("z", 7)]

    def test_chaotic_batch_limit_distinct(self):
        q = LevelQueue("chaotic")
        q.enqueue_many([("a", 1), ("b", 2), ("c", 3)])
        first = q.drain(2)
        rest = q.drain()
        assert len(first) == 2
        assert sorted(first + rest) == [("a", 1), ("b", 2), ("c", 3)]

    def test_multiset_conservation(self):
        q = LevelQueue("dijkstra")
        items = [(v, d) for v in range(5) for d in (3, 3, 8)]
        q.enqueue_many(items)
        out = []
        while not q.empty():
            out.extend(q.drain(4))
        assert sorted(out) == sorted(items)

    def test_enqueue_after_close_is_protocol_error(self):
        q = LevelQueue("chaotic")
        q.close()
        with pytest.raises(QueueProtocolError):
            q.enqueue((0, 1))
        with pytest.raises(QueueProtocolError):
            q.enqueue_many([(0, 1)])

    def test_len(self):
        q = LevelQueue("dijkstra")
        q.enqueue_many([(0, 1), (1, 2)])
        assert len(q) == 2
