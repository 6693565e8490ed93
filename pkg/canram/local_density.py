"""(rho, d)-dense 2-graphs, clique counts and the edge-deletion resilience of local density."""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Guards
from .dto import LocalDenseMode, LocalDensityReport, ResilienceCheck, ResilienceReport, ResilienceTrial
from .errors import DomainError
from .hypergraph import KGraph

logger = logging.getLogger(__name__)

Number = Union[int, float, str, Fraction]


def as_fraction(x: Number) -> Fraction:
    """Exact value of x; floats go through their shortest repr so 0.1 means 1/10."""
    if isinstance(x, Fraction):
        return x
    try:
        if isinstance(x, float):
            return Fraction(repr(x))
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DomainError(f"not a number: {x!r}", {"value": str(x)}) from None


def _require_two_graph(G: KGraph) -> None:
    if G.uniformity != 2:
        raise DomainError("local density is defined for 2-graphs only", {"uniformity": G.uniformity})


def _in_unit_interval(name: str, value: Fraction) -> None:
    if not 0 < value <= 1:
        raise DomainError(f"{name} must lie in (0, 1], got {value}", {name: str(value)})


def subset_size(n: int, rho: Number) -> int:
    return math.ceil(as_fraction(rho) * n)


def _edges_within(adj: Sequence[int], subset: Sequence[int]) -> int:
    mask = 0
    for u in subset:
        mask |= 1 << u
    return sum((adj[u] & mask).bit_count() for u in subset) // 2


def _scan_block(adj: Tuple[int, ...], n: int, s: int, required: Fraction, first: int):
    """Subsets of size s with smallest vertex ``first``; stops at the first violator."""
    checked = 0
    for rest in itertools.combinations(range(first + 1, n), s - 1):
        subset = (first,) + rest
        checked += 1
        edges = _edges_within(adj, subset)
        if edges < required:
            return checked, subset, edges
    return checked, None, None


def _exact_scan(G: KGraph, s: int, required: Fraction, workers: int):
    n = G.v
    adj = G.adjacency
    firsts = range(n - s + 1)
    if workers > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_scan_block, *zip(*[(adj, n, s, required, a) for a in firsts])))
    else:
        blocks = []
        for a in firsts:
            blocks.append(_scan_block(adj, n, s, required, a))
            if blocks[-1][1] is not None:
                break
    checked = 0
    for count, witness, edges in blocks:
        checked += count
        if witness is not None:
            return checked, witness, edges
    return checked, None, None


def is_locally_dense(
    G: KGraph,
    rho: Number,
    d: Number,
    mode: LocalDenseMode = LocalDenseMode.EXACT,
    samples: int = 1000,
    seed: int = 0,
    workers: int = 1,
    guards: Optional[Guards] = None,
) -> LocalDensityReport:
    """Every vertex set of size ceil(rho n) spans at least d C(|S|, 2) edges.

    Exact mode returns the lexicographically smallest violating set, independent of ``workers``.
    Sampled mode can only refute; without a violation the report is inconclusive.
    """
    _require_two_graph(G)
    rho, d = as_fraction(rho), as_fraction(d)
    _in_unit_interval("rho", rho)
    _in_unit_interval("d", d)
    return _local_density(G, rho, d, mode, samples, seed, workers, guards or Guards())


def _local_density(
    G: KGraph, rho: Fraction, d: Fraction, mode: LocalDenseMode, samples: int, seed: int, workers: int, guards: Guards
) -> LocalDensityReport:
    n = G.v
    s = subset_size(n, rho)
    required = d * math.comb(s, 2)
    if s < 2 or required <= 0:
        return LocalDensityReport(True, True, mode, s, required, 0)
    if mode is LocalDenseMode.EXACT:
        guards.check("subsets", math.comb(n, s))
        checked, witness, edges = _exact_scan(G, s, required, workers)
        logger.info("[localdense] exact n=%d s=%d checked=%d dense=%s", n, s, checked, witness is None)
        return LocalDensityReport(witness is None, True, mode, s, required, checked, witness, edges)
    rng = np.random.default_rng(seed)
    adj = G.adjacency
    for i in range(samples):
        subset = tuple(sorted(int(u) for u in rng.choice(n, size=s, replace=False)))
        edges = _edges_within(adj, subset)
        if edges < required:
            logger.info("[localdense] sampled violation after=%d s=%d", i + 1, s)
            return LocalDensityReport(False, True, mode, s, required, i + 1, subset, edges)
    logger.info("[localdense] sampled no violation samples=%d s=%d", samples, s)
    return LocalDensityReport(True, False, mode, s, required, samples)


def count_cliques(G: KGraph, m: int) -> int:
    """Exact number of K_m subgraphs, extending cliques along a degeneracy order."""
    _require_two_graph(G)
    if m < 2:
        raise DomainError("clique order must be at least 2", {"m": m})
    adj = G.adjacency
    n = G.v
    # degeneracy order: repeatedly remove a vertex of minimum remaining degree
    alive = (1 << n) - 1
    later = [0] * n
    for _ in range(n):
        v = min((u for u in range(n) if alive >> u & 1), key=lambda u: ((adj[u] & alive).bit_count(), u))
        alive &= ~(1 << v)
        later[v] = adj[v] & alive

    def extend(candidates: int, remaining: int) -> int:
        if remaining == 1:
            return candidates.bit_count()
        total = 0
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            total += extend(candidates & adj[low.bit_length() - 1], remaining - 1)
        return total

    return sum(extend(later[v], m - 1) for v in range(n))


def resilience_bound(d: Number, gamma: Number, rho: Number) -> ResilienceReport:
    """d' = d - 2 gamma / rho^2, with the flag gamma <= rho^2 d / 4 (then d' >= d / 2)."""
    d, gamma, rho = as_fraction(d), as_fraction(gamma), as_fraction(rho)
    _in_unit_interval("rho", rho)
    _in_unit_interval("d", d)
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}", {"gamma": str(gamma)})
    d_prime = d - 2 * gamma / rho ** 2
    negative = d_prime < 0
    if negative:
        logger.warning("[resilience] d_prime=%s is negative", d_prime)
    return ResilienceReport(
        d=d, gamma=gamma, rho=rho, d_prime=d_prime, halves_density=gamma <= rho ** 2 * d / 4, negative=negative
    )


def _min_subset_edges(G: KGraph, s: int) -> int:
    adj = G.adjacency
    return min((_edges_within(adj, S) for S in itertools.combinations(range(G.v), s)), default=0)


def check_resilience(
    G: KGraph,
    rho: Number,
    d: Number,
    gamma: Number,
    trials: int = 20,
    seed: int = 0,
    guards: Optional[Guards] = None,
) -> ResilienceCheck:
    """Delete floor(gamma e(G)) random edges per trial and re-test local density at d'."""
    _require_two_graph(G)
    guards = guards or Guards()
    bound = resilience_bound(d, gamma, rho)
    s = subset_size(G.v, bound.rho)
    guards.check("subsets", math.comb(G.v, s) * (trials + 1))
    base = _local_density(G, bound.rho, bound.d, LocalDenseMode.EXACT, 0, seed, 1, guards)
    if not base.dense:
        logger.warning("[resilience] host is not (%s, %s)-dense, witness=%s", bound.rho, bound.d, base.witness)
    deleted = math.floor(bound.gamma * G.e)
    out: List[ResilienceTrial] = []
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))
        drop = set(int(i) for i in rng.choice(G.e, size=deleted, replace=False)) if deleted else set()
        reduced = G.edge_subgraph(e for i, e in enumerate(G.edges) if i not in drop)
        dense = _local_density(reduced, bound.rho, bound.d_prime, LocalDenseMode.EXACT, 0, seed, 1, guards).dense
        min_edges = _min_subset_edges(reduced, s)
        chain = min_edges >= bound.d * math.comb(s, 2) - deleted
        out.append(ResilienceTrial(deleted=deleted, dense=dense, min_edges=min_edges, chain_holds=chain))
    finite_gap = Fraction(s * s, 2) > 2 * math.comb(s, 2)
    logger.info("[resilience] trials=%d deleted=%d all_dense=%s", trials, deleted, all(t.dense for t in out))
    return ResilienceCheck(
        bound=bound, base_dense=base.dense, subset_size=s, finite_size_gap=finite_gap, trials=tuple(out)
    )
