import logging
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from multiprocessing import Manager
from typing import Optional

from .base_solver import AvoidanceInstance, Solver
from .config import Guards
from .dto import Outcome, SolverResult, SolverStats
from .errors import GuardExceededError
from .search import Backtracker, CopyIndex, SearchCancelled, interchangeable

logger = logging.getLogger(__name__)


def _solve_branch(instance: AvoidanceInstance, guards: Guards, propagate: bool, first_colour: int, stop):
    """Runs in a worker process; returns (certificate or None, stats, guard dict or None)."""
    index = CopyIndex(instance.host, instance.pattern, instance.sigma, guards)
    search = Backtracker(index, instance.domains(), propagate=propagate, guards=guards, stop=stop)
    try:
        colours = search.run(first_colour)
    except GuardExceededError as e:
        return None, search.stats, e.to_dict()
    except SearchCancelled:
        return None, search.stats, None
    certificate = index.certificate(colours) if colours is not None else None
    return certificate, search.stats, None


class BacktrackSolver(Solver):
    """Complete search: most constrained edge first, propagation over nearly coloured copies.

    With ``workers > 1`` and edges whose lists differ, the colours of the first edge are split
    across processes; the first certificate wins and stops the other branches.
    """

    name = "backtrack"

    def _search(self, instance: AvoidanceInstance) -> SolverResult:
        guards = self.config.guards
        index = CopyIndex(instance.host, instance.pattern, instance.sigma, guards)
        domains = instance.domains()
        workers = self.config.workers
        roots = domains[index.order[0]] if index.free_from > 0 and not interchangeable(domains) else ()
        if workers <= 1 or len(roots) < 2:
            search = Backtracker(index, domains, propagate=self.config.propagate, guards=guards)
            colours = search.run()
            if colours is None:
                return SolverResult(Outcome.NONE_EXISTS, stats=search.stats)
            return SolverResult(Outcome.FOUND, certificate=index.certificate(colours), stats=search.stats)
        return self._split(instance, roots)

    def _split(self, instance: AvoidanceInstance, roots) -> SolverResult:
        stats = SolverStats()
        guard = None
        with Manager() as manager:
            stop = manager.Event()
            pool = ProcessPoolExecutor(max_workers=self.config.workers)
            try:
                pending = {
                    pool.submit(_solve_branch, instance, self.config.guards, self.config.propagate, c, stop)
                    for c in roots
                }
                logger.debug("[solve] split branches=%d workers=%d", len(pending), self.config.workers)
                while pending:
                    done, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for future in done:
                        certificate, branch_stats, branch_guard = future.result()
                        stats = stats.merge(branch_stats)
                        if certificate is not None:
                            return SolverResult(Outcome.FOUND, certificate=certificate, stats=stats)
                        guard = guard or branch_guard
            finally:
                stop.set()
                pool.shutdown(wait=True, cancel_futures=True)
        if guard is not None:
            return SolverResult(Outcome.GUARD_EXCEEDED, stats=stats, guard=guard)
        return SolverResult(Outcome.NONE_EXISTS, stats=stats)
