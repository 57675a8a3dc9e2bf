from __future__ import annotations

import pytest

from ssspkit.engine import EngineConfig, run
from ssspkit.graphs import build_csr, generate_rmat, partition_1d, rmat1_params, rmat2_params
from ssspkit.model import INFINITY, OrderingSpec
from ssspkit.verify import (
    bellman_ford_reference,
    dijkstra_reference,
    load_trace,
    shortest_path_hops,
    verify_distances,
    verify_fixed_point,
    verify_trace,
)
from ssspkit.engine import write_trace

TRIANGLE = build_csr([(0, 1, 2), (0, 2, 5), (1, 2, 1)], 3)


class TestReferences:
    def test_dijkstra_triangle(self):
        assert dijkstra_reference(TRIANGLE, 0).values == [0, 2, 3]

    def test_dijkstra_unreachable(self):
        g = build_csr([(0, 1, 1)], 3)
        assert dijkstra_reference(g, 0).values == [0, 1, INFINITY]

    def test_bellman_ford_triangle(self):
        assert bellman_ford_reference(TRIANGLE, 0).values == [0, 2, 3]

    def test_zero_weight_cycle(self):
        g = build_csr([(0, 1, 0), (1, 2, 0), (2, 0, 0)], 3)
        assert dijkstra_reference(g, 0).values == [0, 0, 0]
        assert bellman_ford_reference(g, 0).values == [0, 0, 0]

    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_oracles_agree_on_rmat(self, seed):
        g = generate_rmat(rmat1_params(9, seed=seed))
        assert dijkstra_reference(g, 0).values == bellman_ford_reference(g, 0).values

    def test_oracles_agree_on_rmat2(self):
        g = generate_rmat(rmat2_params(9, seed=17))
        assert dijkstra_reference(g, 5).values == bellman_ford_reference(g, 5).values


class TestShortestPathHops:
    def test_triangle(self):
        d, h = shortest_path_hops(TRIANGLE, 0)
        assert d == [0, 2, 3]
        assert h == [0, 1, 2]

    def test_tie_takes_max_min_hop_definition(self):
        # Two shortest paths to vertex 3 with equal length 2: direct (1 hop)
        # and via vertex 1 (2 hops).  The hop oracle reports the minimum.
        g = build_csr([(0, 1, 1), (1, 3, 1), (0, 3, 2)], 4)
        d, h = shortest_path_hops(g, 0)
        assert d == [0, 1, INFINITY, 2]
        assert h == [0, 1, -1, 1]

    def test_unreached_marked(self):
        g = build_csr([], 2)
        d, h = shortest_path_hops(g, 0)
        assert h == [0, -1]

    def test_distances_match_primary_oracle(self):
        g = generate_rmat(rmat1_params(9, seed=8))
        d, _ = shortest_path_hops(g, 2)
        assert d == dijkstra_reference(g, 2).values


class TestVerifyDistances:
    def test_exact_match(self):
        report = verify_distances([0, 2, 3], dijkstra_reference(TRIANGLE, 0))
        assert report.ok
        assert report.checked == 3
        assert report.violations == []

    def test_single_perturbation_caught(self):
        report = verify_distances([0, 2, 4], dijkstra_reference(TRIANGLE, 0))
        assert not report.ok
        assert len(report.violations) == 1
        assert report.violations[0].startswith("vertex 2")

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            verify_distances([0, 2], dijkstra_reference(TRIANGLE, 0))

    def test_violation_list_truncated(self):
        g = build_csr([(0, v, 1) for v in range(1, 40)], 40)
        wrong = [0] + [99] * 39
        report = verify_distances(wrong, dijkstra_reference(g, 0))
        assert not report.ok
        assert len(report.violations) == 10

    def test_json_serializable(self):
        import json

        report = verify_distances([0, 2, 4], dijkstra_reference(TRIANGLE, 0))
        payload = json.loads(report.to_json())
        assert payload["ok"] is False


class TestVerifyFixedPoint:
    def test_engine_output_is_fixed_point(self):
        g = generate_rmat(rmat1_params(9, seed=6))
        dist, _ = run(g, EngineConfig(ordering=OrderingSpec.delta_stepping(3)), 0)
        assert verify_fixed_point(g, dist.values, 0).ok

    def test_inflated_entry_caught(self):
        vals = dijkstra_reference(TRIANGLE, 0).values[:]
        vals[2] = 9
        report = verify_fixed_point(TRIANGLE, vals, 0)
        assert not report.ok

    def test_nonzero_source_caught(self):
        report = verify_fixed_point(TRIANGLE, [1, 2, 3], 0)
        assert not report.ok

    def test_unreachable_infinity_ok(self):
        g = build_csr([(0, 1, 1)], 3)
        assert verify_fixed_point(g, [0, 1, INFINITY], 0).ok


class TestVerifyTrace:
    def _traced_run(self, topology=None):
        from ssspkit.engine import WorkerTopology

        g = generate_rmat(rmat1_params(8, seed=12))
        config = EngineConfig(
            ordering=OrderingSpec.delta_stepping(3),
            topology=topology or WorkerTopology(1, 1, 1),
            record_trace=True,
        )
        _, stats = run(g, config, 0)
        return g, stats

    def test_serial_trace_valid(self):
        g, stats = self._traced_run()
        report = verify_trace(stats.trace, OrderingSpec.delta_stepping(3), partition_1d(g, 1))
        assert report.ok, report.summary()

    def test_threaded_trace_valid(self):
        from ssspkit.engine import WorkerTopology

        g, stats = self._traced_run(WorkerTopology(2, 1, 2))
        report = verify_trace(stats.trace, OrderingSpec.delta_stepping(3), partition_1d(g, 2))
        assert report.ok, report.summary()

    def test_forged_early_record_caught(self):
        import dataclasses

        g, stats = self._traced_run()
        trace = list(stats.trace)
        # Move a later-class record before the first class has finished.
        late = next(r for r in trace if r.class_key > trace[0].class_key)
        forged = dataclasses.replace(
            late, t_start=trace[0].t_start, t_end=trace[0].t_start + 1e-9
        )
        trace[trace.index(late)] = forged
        report = verify_trace(sorted(trace, key=lambda r: r.t_start),
                              OrderingSpec.delta_stepping(3), partition_1d(g, 1))
        assert not report.ok

    def test_wrong_partition_caught(self):
        import dataclasses

        g, stats = self._traced_run()
        trace = list(stats.trace)
        trace[0] = dataclasses.replace(trace[0], partition=1)
        report = verify_trace(trace, OrderingSpec.delta_stepping(3), partition_1d(g, 2))
        assert not report.ok

    def test_round_trip_through_file(self, tmp_path):
        g, stats = self._traced_run()
        path = tmp_path / "trace.jsonl"
        write_trace(stats.trace, path)
        loaded = load_trace(path)
        assert len(loaded) == len(stats.trace)
        assert [r.item for r in loaded] == [r.item for r in stats.trace]
        report = verify_trace(loaded, OrderingSpec.delta_stepping(3), partition_1d(g, 1))
        assert report.ok
