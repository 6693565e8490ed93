import itertools
import logging

from .base_solver import AvoidanceInstance, Solver
from .dto import Outcome, SolverResult, SolverStats
from .errors import GuardExceededError
from .hypergraph import Colouring, count_embeddings
from .patterns import PatternClassifier, enumerate_canonical_copies

logger = logging.getLogger(__name__)


class NaiveSolver(Solver):
    """Tries every compatible colouring in lexicographic list order. Reference oracle."""

    name = "naive"

    def _search(self, instance: AvoidanceInstance) -> SolverResult:
        guards = self.config.guards
        G, H, sigma = instance.host, instance.pattern, instance.sigma
        stats = SolverStats(copies=count_embeddings(H, G))
        classifier = PatternClassifier(H, sigma)
        for colours in itertools.product(*instance.domains()):
            stats.nodes += 1
            if stats.nodes > guards.nodes:
                raise GuardExceededError("nodes", guards.nodes, stats.nodes)
            chi = Colouring(dict(zip(G.edges, colours)))
            if next(enumerate_canonical_copies(H, sigma, G, chi, classifier), None) is None:
                return SolverResult(Outcome.FOUND, certificate=dict(chi.assignment), stats=stats)
            stats.prunings += 1
        return SolverResult(Outcome.NONE_EXISTS, stats=stats)
