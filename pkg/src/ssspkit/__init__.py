"""ssspkit: a family of parallel single-source shortest-path algorithms
derived from one relaxation kernel by swapping the strict weak ordering on
work items (chaotic, exact-distance, distance buckets, level blocks) and the
spatial level at which that ordering is enforced.
"""

from .bench import (
    BenchReport,
    BenchSpec,
    VerificationFailure,
    default_matrix_orderings,
    emit_report,
    matrix,
    relaxation_trend,
    run_bench,
)
from .engine import (
    ActiveWorkCounter,
    EngineConfig,
    OrderingViolationError,
    RunStats,
    TraceRecord,
    WorkerTopology,
    atomic_min_update,
    detect_quiescence,
    route,
    run,
    write_trace,
)
from .graphs import (
    FixedWeight,
    Graph,
    GraphFormatError,
    PartitionMap,
    RmatParams,
    UniformWeight,
    build_csr,
    generate_rmat,
    load_dimacs_gr,
    load_edge_list,
    neighbors,
    partition_1d,
    rmat1_params,
    rmat2_params,
)
from .hierarchy import LevelQueue, QueueProtocolError, SpatialHierarchy, make_hierarchy, preset
from .model import (
    INFINITY,
    Comparison,
    DistanceMap,
    OrderingSpec,
    class_key,
    compare,
    induced_class_compare,
    pf_kla,
    pf_sssp,
    validate_swo,
)
from .verify import (
    VerifyReport,
    bellman_ford_reference,
    dijkstra_reference,
    load_trace,
    shortest_path_hops,
    verify_distances,
    verify_fixed_point,
    verify_trace,
)

__version__ = "0.1.0"
