"""Command-line benchmark front end.

Every flag can also be supplied through an environment variable with the
``SSSPKIT_`` prefix (``--ordering`` -> ``SSSPKIT_ORDERING``, ``--edge-factor``
-> ``SSSPKIT_EDGE_FACTOR``); explicit flags win. Exit codes: 0 ok, 1 usage or
I/O error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .bench import (
    BenchSpec,
    VerificationFailure,
    default_matrix_orderings,
    emit_report,
    matrix,
    run_bench,
)
from .graphs import RmatParams, rmat1_params, rmat2_params
from .hierarchy import PRESETS, make_hierarchy
from .model import OrderingSpec

__all__ = ["parse_args", "main"]

ENV_PREFIX = "SSSPKIT_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="sssp-bench", description="Ordered-relaxation SSSP benchmark harness")
    src = p.add_argument_group("input")
    src.add_argument("--input", metavar="PATH", help="edge-list or DIMACS file")
    src.add_argument("--format", choices=["edgelist", "dimacs"], default="edgelist")
    src.add_argument("--rmat1", action="store_true", help="generate an RMAT1 graph (needs --scale)")
    src.add_argument("--rmat2", action="store_true", help="generate an RMAT2 graph (needs --scale)")
    src.add_argument("--scale", type=int, help="log2 of the vertex count")
    src.add_argument("--edge-factor", type=int, default=16)
    src.add_argument("--wmin", type=int, help="minimum edge weight (RMAT override)")
    src.add_argument("--wmax", type=int, help="maximum edge weight (RMAT override)")

    alg = p.add_argument_group("algorithm")
    alg.add_argument("--ordering", choices=["chaotic", "dijkstra", "delta", "kla"], default="delta")
    alg.add_argument("--delta", type=float, help="bucket width for --ordering delta")
    alg.add_argument("--k", type=int, help="level block height for --ordering kla")
    alg.add_argument("--preset", choices=list(PRESETS), default="buffer")
    alg.add_argument(
        "--hierarchy-config",
        metavar="PATH",
        help='JSON file mapping levels to orderings, e.g. {"numa": "dijkstra"}',
    )

    topo = p.add_argument_group("topology")
    topo.add_argument("--partitions", type=int, default=1)
    topo.add_argument("--groups", type=int, default=1)
    topo.add_argument("--workers", type=int, default=None, help="workers per group (default: cpu count)")

    rung = p.add_argument_group("run")
    rung.add_argument("--sources", type=int, default=1)
    rung.add_argument("--trials", type=int, default=1)
    rung.add_argument("--seed", type=int, default=0)
    verify = rung.add_mutually_exclusive_group()
    verify.add_argument("--verify", dest="verify", action="store_true", default=True)
    verify.add_argument("--no-verify", dest="verify", action="store_false")
    rung.add_argument("--trace", metavar="PATH", help="write a JSON-lines trace of the first run")
    rung.add_argument("--output", choices=["csv", "json"], default="csv")
    rung.add_argument("--matrix", action="store_true", help="run the orderings x presets grid")
    return p


def _apply_env_defaults(parser: _Parser, environ=None) -> None:
    environ = os.environ if environ is None else environ
    for action in parser._actions:
        if not action.option_strings or action.dest == "help":
            continue
        env_name = ENV_PREFIX + action.dest.upper()
        raw = environ.get(env_name)
        if raw is None:
            continue
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            parser.set_defaults(**{action.dest: raw.lower() in ("1", "true", "yes", "on")})
        elif action.type is not None:
            parser.set_defaults(**{action.dest: action.type(raw)})
        else:
            parser.set_defaults(**{action.dest: raw})


def parse_args(argv: list[str], environ=None) -> BenchSpec:
    """Parse CLI flags (plus SSSPKIT_* environment overrides) into a validated
    BenchSpec; raises UsageError on conflicts."""
    parser = _build_parser()
    _apply_env_defaults(parser, environ)
    ns = parser.parse_args(argv)

    generator = ns.rmat1 or ns.rmat2
    if ns.input and (generator or ns.scale is not None):
        raise UsageError("--input conflicts with --rmat1/--rmat2/--scale")
    if ns.rmat1 and ns.rmat2:
        raise UsageError("--rmat1 and --rmat2 are mutually exclusive")
    if generator and ns.scale is None:
        raise UsageError("--rmat1/--rmat2 require --scale")
    if not ns.input and not generator:
        raise UsageError("need an input: --input PATH or --rmat1/--rmat2 --scale N")

    try:
        if ns.ordering == "delta":
            if ns.delta is None:
                raise UsageError("--ordering delta requires --delta")
            ordering = OrderingSpec.delta_stepping(ns.delta)
        elif ns.ordering == "kla":
            if ns.k is None:
                raise UsageError("--ordering kla requires --k")
            ordering = OrderingSpec.kla(ns.k)
        else:
            if ns.delta is not None or ns.k is not None:
                raise UsageError(f"--delta/--k do not apply to --ordering {ns.ordering}")
            ordering = OrderingSpec(ns.ordering)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    rmat = None
    label = None
    if generator:
        base = rmat1_params if ns.rmat1 else rmat2_params
        params = base(ns.scale, ns.edge_factor, ns.seed)
        if ns.wmin is not None or ns.wmax is not None:
            wmin = ns.wmin if ns.wmin is not None else params.wmin
            wmax = ns.wmax if ns.wmax is not None else params.wmax
            try:
                params = RmatParams(
                    params.scale, params.edge_factor, params.a, params.b, params.c, params.d,
                    wmin, wmax, params.seed,
                )
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        rmat = params
        label = f"{'rmat1' if ns.rmat1 else 'rmat2'}-s{ns.scale}-ef{ns.edge_factor}-seed{ns.seed}"

    hierarchy = None
    if ns.hierarchy_config:
        try:
            with open(ns.hierarchy_config, encoding="utf-8") as fh:
                annotations = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read hierarchy config: {exc}") from exc
        hierarchy = make_hierarchy(ordering, annotations)

    workers = ns.workers if ns.workers is not None else (os.cpu_count() or 1)
    from .engine import WorkerTopology

    try:
        return BenchSpec(
            ordering=ordering,
            rmat=rmat,
            input_path=ns.input,
            input_format=ns.format,
            graph_label=label,
            preset_name=ns.preset,
            hierarchy=hierarchy,
            topology=WorkerTopology(ns.partitions, ns.groups, workers),
            sources=ns.sources,
            trials=ns.trials,
            seed=ns.seed,
            verify=ns.verify,
            output=ns.output,
            trace_path=ns.trace,
            matrix=ns.matrix,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        spec = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1

    try:
        if spec.matrix:
            report = matrix(spec, orderings=default_matrix_orderings(spec))
        else:
            report = run_bench(spec)
    except VerificationFailure as exc:
        print(emit_report(exc.report, spec.output))
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1

    print(emit_report(report, spec.output))
    if report.failures:
        for failure in report.failures:
            print(f"verification failed: {failure}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
