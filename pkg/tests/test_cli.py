from __future__ import annotations

import json

import pytest

import ssspkit.bench as bench_mod
from ssspkit.cli import UsageError, main, parse_args
from ssspkit.model import OrderingSpec


class TestParseArgs:
    def test_rmat_threadq_example(self):
        spec = parse_args(
            "--rmat1 --scale 12 --ordering delta --delta 3 --preset threadq".split(),
            environ={},
        )
        assert spec.rmat.scale == 12
        assert spec.ordering == OrderingSpec.delta_stepping(3)
        assert spec.preset_name == "threadq"

    def test_delta_without_width_is_usage_error(self):
        with pytest.raises(UsageError, match="--delta"):
            parse_args("--rmat1 --scale 8 --ordering delta".split(), environ={})

    def test_dimacs_kla_trials(self):
        spec = parse_args(
            "--input g.gr --format dimacs --ordering kla --k 2 --trials 8".split(),
            environ={},
        )
        assert spec.input_path == "g.gr"
        assert spec.input_format == "dimacs"
        assert spec.ordering == OrderingSpec.kla(2)
        assert spec.trials == 8

    def test_defaults(self):
        spec = parse_args("--rmat1 --scale 8 --ordering chaotic".split(), environ={})
        assert spec.preset_name == "buffer"
        assert spec.trials == 1
        assert spec.verify
        assert spec.topology.partitions == 1
        assert spec.topology.total_workers >= 1

    def test_input_conflicts_with_generator(self):
        with pytest.raises(UsageError, match="conflicts"):
            parse_args("--input g.txt --scale 8 --ordering chaotic".split(), environ={})
        with pytest.raises(UsageError):
            parse_args("--input g.txt --rmat1 --ordering chaotic".split(), environ={})

    def test_generator_needs_scale(self):
        with pytest.raises(UsageError, match="--scale"):
            parse_args("--rmat1 --ordering chaotic".split(), environ={})

    def test_no_input_at_all(self):
        with pytest.raises(UsageError):
            parse_args("--ordering chaotic".split(), environ={})

    def test_invalid_delta_value(self):
        with pytest.raises(UsageError):
            parse_args("--rmat1 --scale 8 --ordering delta --delta 0".split(), environ={})

    def test_delta_flag_on_wrong_ordering(self):
        with pytest.raises(UsageError, match="do not apply"):
            parse_args("--rmat1 --scale 8 --ordering dijkstra --delta 3".split(), environ={})

    def test_kla_needs_k(self):
        with pytest.raises(UsageError, match="--k"):
            parse_args("--rmat1 --scale 8 --ordering kla".split(), environ={})

    def test_weight_overrides_allow_zero_min(self):
        spec = parse_args(
            "--rmat1 --scale 8 --ordering chaotic --wmin 0".split(), environ={}
        )
        assert spec.rmat.wmin == 0
        assert spec.rmat.wmax == 100

    def test_inverted_weight_range_is_usage_error(self):
        with pytest.raises(UsageError):
            parse_args(
                "--rmat1 --scale 8 --ordering chaotic --wmin 50 --wmax 10".split(),
                environ={},
            )

    def test_rmat2_weight_default(self):
        spec = parse_args("--rmat2 --scale 8 --ordering chaotic".split(), environ={})
        assert (spec.rmat.wmin, spec.rmat.wmax) == (1, 255)

    def test_hierarchy_config_file(self, tmp_path):
        path = tmp_path / "h.json"
        path.write_text(json.dumps({"numa": "dijkstra"}))
        spec = parse_args(
            f"--rmat1 --scale 8 --ordering delta --delta 3 --hierarchy-config {path}".split(),
            environ={},
        )
        assert spec.hierarchy.numa == "dijkstra"
        assert spec.hierarchy.preset_name() == "numaq"

    def test_missing_hierarchy_config(self):
        with pytest.raises(UsageError, match="hierarchy config"):
            parse_args(
                "--rmat1 --scale 8 --ordering chaotic --hierarchy-config /nope.json".split(),
                environ={},
            )


class TestEnvOverrides:
    def test_env_supplies_defaults(self):
        env = {
            "SSSPKIT_RMAT1": "1",
            "SSSPKIT_SCALE": "9",
            "SSSPKIT_ORDERING": "chaotic",
            "SSSPKIT_TRIALS": "4",
        }
        spec = parse_args([], environ=env)
        assert spec.rmat.scale == 9
        assert spec.ordering == OrderingSpec.chaotic()
        assert spec.trials == 4

    def test_explicit_flag_beats_env(self):
        env = {"SSSPKIT_RMAT1": "1", "SSSPKIT_SCALE": "9", "SSSPKIT_ORDERING": "chaotic",
               "SSSPKIT_TRIALS": "4"}
        spec = parse_args(["--trials", "2"], environ=env)
        assert spec.trials == 2

    def test_boolean_env_values(self):
        env = {"SSSPKIT_RMAT1": "1", "SSSPKIT_SCALE": "8", "SSSPKIT_ORDERING": "chaotic",
               "SSSPKIT_VERIFY": "false"}
        assert parse_args([], environ=env).verify is False


class TestMainExitCodes:
    ARGS = "--rmat1 --scale 8 --ordering delta --delta 3 --workers 1".split()

    def test_success_returns_zero_and_prints_csv(self, capsys):
        assert main(self.ARGS) == 0
        out = capsys.readouterr().out
        assert out.startswith("graph,vertices,edges,workers,algorithm,preset")
        assert "delta(3)" in out

    def test_usage_error_returns_one(self, capsys):
        assert main("--rmat1 --scale 8 --ordering delta".split()) == 1
        assert "usage error" in capsys.readouterr().err

    def test_io_error_returns_one(self, capsys):
        assert main("--input /no/such/file --ordering chaotic".split()) == 1
        assert "I/O error" in capsys.readouterr().err

    def test_verification_failure_returns_two(self, capsys, monkeypatch):
        real_run = bench_mod.run

        def corrupting(graph, config, source):
            dist, stats = real_run(graph, config, source)
            dist.values[-1] = 0 if dist.values[-1] != 0 else 1
            return dist, stats

        monkeypatch.setattr(bench_mod, "run", corrupting)
        assert main(self.ARGS) == 2
        assert "verification failed" in capsys.readouterr().err

    def test_matrix_run(self, capsys):
        assert main(self.ARGS + ["--matrix"]) == 0
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == 13  # header + 3 orderings x 4 presets

    def test_matrix_broken_cell_exits_two(self, capsys, monkeypatch):
        real_run = bench_mod.run

        def corrupting(graph, config, source):
            dist, stats = real_run(graph, config, source)
            if config.resolved_hierarchy().preset_name() == "numaq":
                dist.values[-1] = 0 if dist.values[-1] != 0 else 1
            return dist, stats

        monkeypatch.setattr(bench_mod, "run", corrupting)
        assert main(self.ARGS + ["--matrix"]) == 2
        captured = capsys.readouterr()
        assert len(captured.out.strip().splitlines()) == 13
        assert "verification failed" in captured.err

    def test_json_output(self, capsys):
        assert main(self.ARGS + ["--output", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rows"][0]["workers"] == 1
