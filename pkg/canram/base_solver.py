import logging
from dataclasses import dataclass
from typing import Optional

from .config import SolverConfig
from .dto import Outcome, SolverResult, SolverStats
from .errors import GuardExceededError, PatternError, check_uniformity
from .hypergraph import KGraph, ListAssignment, Ordering

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AvoidanceInstance:
    host: KGraph
    pattern: KGraph
    sigma: Ordering
    lists: ListAssignment

    def __post_init__(self) -> None:
        check_uniformity(self.pattern, self.host)
        self.lists.check_total(self.host)
        if len(self.sigma) != self.pattern.v:
            raise PatternError(
                f"ordering has {len(self.sigma)} vertices, pattern has {self.pattern.v}",
                {"ordering": len(self.sigma), "pattern": self.pattern.v},
            )

    def domains(self):
        """Distinct list colours per host edge, in list order."""
        return [tuple(dict.fromkeys(self.lists[e])) for e in self.host.edges]


class Solver:
    """Base class for avoidance solvers; subclasses implement ``_search``."""

    name = "base"

    def __init__(self, config: Optional[SolverConfig] = None) -> None:
        self.config = config or SolverConfig(name=self.name)

    def _emit_start(self, instance: AvoidanceInstance) -> None:
        logger.info(
            "[solve] start solver=%s edges=%d pattern_edges=%d r=%d sigma=%s",
            self.name, instance.host.e, instance.pattern.e, instance.lists.r, instance.sigma.permutation,
        )

    def _emit_end(self, instance: AvoidanceInstance, result: SolverResult) -> None:
        logger.info(
            "[solve] end solver=%s outcome=%s nodes=%d prunings=%d propagations=%d copies=%d",
            self.name, result.outcome.value, result.stats.nodes, result.stats.prunings,
            result.stats.propagations, result.stats.copies,
        )

    def _search(self, instance: AvoidanceInstance) -> SolverResult:
        raise NotImplementedError

    def solve(self, instance: AvoidanceInstance) -> SolverResult:
        """Template method: emit start, search, turn guard hits into a result, emit end."""
        self._emit_start(instance)
        try:
            result = self._search(instance)
        except GuardExceededError as e:
            logger.warning("[solve] guard exceeded solver=%s %s", self.name, e)
            result = SolverResult(Outcome.GUARD_EXCEEDED, stats=SolverStats(), guard=e.to_dict())
        self._emit_end(instance, result)
        return result
