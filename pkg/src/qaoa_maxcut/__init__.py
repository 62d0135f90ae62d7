"""QAOA for MaxCut: state-vector reference, level-1 closed form, and the
pseudospin reduction of the even ring with its angle search."""

__version__ = "0.1.0"

from .errors import QAOAError
from .graph import (
    EdgeLocalEnv,
    Graph,
    classify_edges,
    complete_graph,
    edge_local_env,
    erdos_renyi_graph,
    load_graph,
    parse_graph,
    read_graph,
    ring_graph,
)
from .optimize import (
    LandscapeGrid,
    ManifoldKind,
    ManifoldSpec,
    OptimizationResult,
    OptimizerConfig,
    canonicalize,
    expand_manifold,
    finite_diff_gradient,
    landscape_scan,
    normal_derivative_check,
    optimize,
)
from .p1 import edge_expectation_p1, graph_expectation_p1, regular_triangle_free_optimum
from .ring import (
    convention_map,
    fourier_spectrum,
    pseudospin_expectation,
    ring_expectation,
    ring_p2_closed_form,
    ring_p2_manifold_form,
)
from .schedule import AngleSchedule, Convention
from .statevector import maxcut_bruteforce, sample_bitstrings, simulate_expectation
