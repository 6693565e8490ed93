"""Unrestricted colourings as set partitions of E(G).

Canonicity is invariant under injective recolouring, so it is enough to search colourings in
restricted-growth form: the edge at depth t takes a colour already used or the next new one.
"""
import logging
from typing import Optional

from .config import Guards
from .dto import Outcome, SolverResult
from .errors import GuardExceededError
from .hypergraph import KGraph, Ordering
from .search import Backtracker, CopyIndex

logger = logging.getLogger(__name__)


def find_avoiding_partition(
    G: KGraph, H: KGraph, sigma: Ordering, guards: Optional[Guards] = None
) -> SolverResult:
    """Search for a colouring of E(G) with no canonical copy of H w.r.t. sigma. Colours start at 1."""
    guards = guards or Guards()
    index = CopyIndex(G, H, sigma, guards)
    search = Backtracker(index, None, propagate=False, guards=guards)
    logger.info("[partition] start edges=%d copies=%d sigma=%s", G.e, len(index.copies), sigma.permutation)
    try:
        colours = search.run()
    except GuardExceededError as e:
        logger.warning("[partition] guard exceeded %s", e)
        return SolverResult(Outcome.GUARD_EXCEEDED, stats=search.stats, guard=e.to_dict())
    logger.info("[partition] end nodes=%d prunings=%d found=%s", search.stats.nodes, search.stats.prunings,
                colours is not None)
    if colours is None:
        return SolverResult(Outcome.NONE_EXISTS, stats=search.stats)
    return SolverResult(Outcome.FOUND, certificate=index.certificate(colours, offset=1), stats=search.stats)
