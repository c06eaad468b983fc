"""One-pass weighted matching with shadow-edge reinsertion.

The package bundles the streaming matcher itself, a simpler
irrevocable baseline, an exact branch-and-bound oracle, an exact
rational verifier for the matcher's insertion certificates, the
worst-case ratio bound, and a seeded experiment harness with a CLI.
"""

from .baseline import (GAMMA_RATIO_5_828, GAMMA_RATIO_SIX, BaselineMatcher,
                       run_baseline)
from .bound import approx_bound, optimal_k, ratio_table
from .generators import GeneratorSpec, WeightSpec, generate, stream_orders
from .graph import (DenseGraph, DuplicateEdgeError, Edge, EdgeStream,
                    StreamFormatError, edge, format_edge, is_matching,
                    matching_weight, open_stream, parse_edge_line,
                    write_stream)
from .harness import (AlgorithmSpec, RunReport, aggregate, default_algorithms,
                      default_corpus, emit_report, read_reports_json,
                      run_experiment)
from .oracle import OptimalResult, OracleCapacityError, max_weight_matching
from .shadow import (InsertionDecision, Neighborhood, RunMetrics, RunResult,
                     ShadowMatcher, SideView, TraceEvent,
                     enumerate_augmenting_sets, run_stream, trace_to_dict)
from .verify import AllocationCheck, check_locally_k_exceeding

__version__ = "0.1.0"

__all__ = [
    "AllocationCheck", "AlgorithmSpec", "BaselineMatcher", "DenseGraph",
    "DuplicateEdgeError", "Edge", "EdgeStream", "GAMMA_RATIO_5_828",
    "GAMMA_RATIO_SIX", "GeneratorSpec", "InsertionDecision", "Neighborhood",
    "OptimalResult", "OracleCapacityError", "RunMetrics", "RunReport",
    "RunResult", "ShadowMatcher", "SideView", "StreamFormatError",
    "TraceEvent", "WeightSpec", "aggregate", "approx_bound",
    "check_locally_k_exceeding", "default_algorithms", "default_corpus",
    "edge", "emit_report", "enumerate_augmenting_sets", "format_edge",
    "generate", "is_matching", "matching_weight", "max_weight_matching",
    "open_stream", "optimal_k", "parse_edge_line", "ratio_table",
    "read_reports_json", "run_baseline", "run_experiment", "run_stream",
    "stream_orders", "trace_to_dict", "write_stream",
]
