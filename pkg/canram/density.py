import itertools
import logging
from fractions import Fraction
from typing import Optional, Tuple

from .config import Guards
from .dto import DensityResult, ThresholdScale
from .errors import DomainError
from .hypergraph import KGraph, binomial

logger = logging.getLogger(__name__)


def _admissible(H: KGraph) -> None:
    k = H.uniformity
    if H.e < 2:
        raise DomainError("maximal k-density needs at least two edges", {"edges": H.e})
    if H.v < k + 1:
        raise DomainError(f"maximal k-density needs more than k={k} vertices", {"vertices": H.v})


def _scan(H: KGraph, guards: Guards) -> Tuple[Fraction, Tuple[int, ...], int, int]:
    """Return (best value, witness, witness edge count, number of subsets attaining best)."""
    _admissible(H)
    guards.check("density_vertices", H.v)
    k = H.uniformity
    masks = H.edge_masks
    best: Optional[Fraction] = None
    witness: Tuple[int, ...] = ()
    witness_edges = 0
    ties = 0
    for size in range(k + 1, H.v + 1):
        # no subset of this size can reach the current best
        ceiling = min(H.e, binomial(size, k))
        if best is not None and Fraction(ceiling - 1, size - k) < best:
            continue
        for U in itertools.combinations(range(H.v), size):
            mask = 0
            for u in U:
                mask |= 1 << u
            edges = sum(1 for m in masks if m & mask == m)
            value = Fraction(edges - 1, size - k)
            if best is None or value > best:
                best, witness, witness_edges, ties = value, U, edges, 1
            elif value == best:
                ties += 1
                if U < witness:
                    witness, witness_edges = U, edges
    assert best is not None
    return best, witness, witness_edges, ties


def max_k_density(H: KGraph, guards: Optional[Guards] = None) -> DensityResult:
    """Exact m_k(H): max over vertex subsets U with |U| > k of (e(H[U]) - 1) / (|U| - k).

    Ties are broken by the lexicographically smallest vertex subset.
    """
    best, witness, witness_edges, _ = _scan(H, guards or Guards())
    logger.debug("[density] k=%d v=%d e=%d value=%s witness=%s", H.uniformity, H.v, H.e, best, witness)
    return DensityResult(value=best, witness=witness, uniformity=H.uniformity, witness_edges=witness_edges)


def is_balanced(H: KGraph, strict: bool = False, guards: Optional[Guards] = None) -> bool:
    """Whether H itself attains m_k(H); strictly: no other admissible subset attains it."""
    best, _, _, ties = _scan(H, guards or Guards())
    whole = Fraction(H.e - 1, H.v - H.uniformity)
    if whole != best:
        return False
    return ties == 1 if strict else True


def threshold_scale(H: KGraph, n: int, guards: Optional[Guards] = None) -> ThresholdScale:
    """n^{-1/m_k(H)}, with the exponent kept exact."""
    density = max_k_density(H, guards)
    exponent = density.exponent
    value = float(n) ** float(exponent) if n > 0 else 0.0
    return ThresholdScale(n=n, density=density.value, exponent=exponent, value=value)
