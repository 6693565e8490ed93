"""Decisions built on the solvers: single avoidance, the ordering quantifier, Ramsey numbers."""
import itertools
import logging
import math
from typing import List, Optional

from .base_solver import AvoidanceInstance
from .config import Guards, SolverConfig
from .dto import CanarrowReport, Outcome, RamseyNumberReport, SolverResult, SolverStats
from .errors import GuardExceededError, check_uniformity
from .hypergraph import KGraph, ListAssignment, Ordering, automorphisms, complete_graph
from .partition_search import find_avoiding_partition
from .solver_factory import SolverFactory, get_default_factory

logger = logging.getLogger(__name__)


def find_avoiding_colouring(
    instance: AvoidanceInstance,
    config: Optional[SolverConfig] = None,
    factory: Optional[SolverFactory] = None,
) -> SolverResult:
    config = config or SolverConfig()
    solver = (factory or get_default_factory()).create(config)
    return solver.solve(instance)


def ordering_orbit_representatives(H: KGraph, guards: Optional[Guards] = None) -> List[Ordering]:
    """One ordering of V(H) per orbit under Aut(H): the lexicographically smallest member."""
    guards = guards or Guards()
    guards.check("orderings", math.factorial(H.v))
    autos = automorphisms(H)
    reps = set()
    for perm in itertools.permutations(range(H.v)):
        reps.add(min(tuple(phi[v] for v in perm) for phi in autos))
    logger.debug("[orderings] v=%d automorphisms=%d orbits=%d", H.v, len(autos), len(reps))
    return [Ordering(p) for p in sorted(reps)]


def _raise_guard(result: SolverResult) -> None:
    g = result.guard or {}
    raise GuardExceededError(g.get("guard", "nodes"), g.get("limit", 0), g.get("observed", 0))


def _sigmas(H: KGraph, sigma: Optional[Ordering], guards: Guards) -> List[Ordering]:
    return [sigma] if sigma is not None else ordering_orbit_representatives(H, guards)


def decide_canarrow_lists(
    G: KGraph,
    H: KGraph,
    lists: ListAssignment,
    config: Optional[SolverConfig] = None,
    factory: Optional[SolverFactory] = None,
    sigma: Optional[Ordering] = None,
) -> CanarrowReport:
    """Whether every lists-compatible colouring of G has a canonical copy of H for every ordering.

    Raises GuardExceededError when some ordering cannot be decided.
    """
    check_uniformity(H, G)
    config = config or SolverConfig()
    stats = SolverStats()
    checked = 0
    for s in _sigmas(H, sigma, config.guards):
        checked += 1
        result = find_avoiding_colouring(AvoidanceInstance(G, H, s, lists), config, factory)
        stats = stats.merge(result.stats)
        if result.outcome is Outcome.GUARD_EXCEEDED:
            _raise_guard(result)
        if result.found:
            return CanarrowReport(
                holds=False, orderings_checked=checked, refuting_ordering=s.permutation,
                certificate=result.certificate, stats=stats,
                reason="a compatible colouring avoids canonical copies for this ordering",
            )
    return CanarrowReport(
        holds=True, orderings_checked=checked, stats=stats,
        reason="every compatible colouring has a canonical copy for every ordering",
    )


def decide_canarrow_unrestricted(
    G: KGraph, H: KGraph, guards: Optional[Guards] = None, sigma: Optional[Ordering] = None
) -> CanarrowReport:
    """Whether every colouring of E(G) has a canonical copy of H for every ordering of V(H)."""
    check_uniformity(H, G)
    guards = guards or Guards()
    stats = SolverStats()
    checked = 0
    for s in _sigmas(H, sigma, guards):
        checked += 1
        result = find_avoiding_partition(G, H, s, guards)
        stats = stats.merge(result.stats)
        if result.outcome is Outcome.GUARD_EXCEEDED:
            _raise_guard(result)
        if result.found:
            return CanarrowReport(
                holds=False, orderings_checked=checked, refuting_ordering=s.permutation,
                certificate=result.certificate, stats=stats,
                reason="a colouring avoids canonical copies for this ordering",
            )
    return CanarrowReport(
        holds=True, orderings_checked=checked, stats=stats,
        reason="every colouring has a canonical copy for every ordering",
    )


def canonical_ramsey_number(H: KGraph, n_max: int, guards: Optional[Guards] = None) -> RamseyNumberReport:
    """Smallest n <= n_max with K_n^(k) arrowing H canonically, or unknown with a lower bound."""
    guards = guards or Guards()
    checked: List[int] = []
    start = H.v
    for n in range(start, n_max + 1):
        try:
            report = decide_canarrow_unrestricted(complete_graph(n, H.uniformity), H, guards)
        except GuardExceededError as e:
            logger.warning("[crnumber] guard exceeded at n=%d: %s", n, e)
            return RamseyNumberReport(value=None, lower_bound=n, checked=tuple(checked), guard=e.to_dict())
        checked.append(n)
        logger.info("[crnumber] n=%d holds=%s", n, report.holds)
        if report.holds:
            return RamseyNumberReport(value=n, lower_bound=n, checked=tuple(checked))
    return RamseyNumberReport(value=None, lower_bound=max(start, n_max + 1), checked=tuple(checked))
