from .base_solver import AvoidanceInstance, Solver
from .backtrack_solver import BacktrackSolver
from .config import Guards, SolverConfig
from .density import is_balanced, max_k_density, threshold_scale
from .encoding import build_encoding, colouring_to_vertexset, degree_profile, graph_shadow
from .hypergraph import (
    Colouring,
    Embedding,
    KGraph,
    ListAssignment,
    Ordering,
    complete_graph,
    distinct_subgraph_copies,
    enumerate_copies,
    named_graph,
)
from .local_density import count_cliques, is_locally_dense, resilience_bound
from .naive_solver import NaiveSolver
from .patterns import classify_pattern, enumerate_canonical_copies, project
from .ramsey_service import (
    canonical_ramsey_number,
    decide_canarrow_lists,
    decide_canarrow_unrestricted,
    find_avoiding_colouring,
)
from .solver_factory import SolverFactory, get_default_factory
