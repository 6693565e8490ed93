"""The canonical copy hypergraph over E(Gamma) x [r] and the checks run on it.

A vertex is a pair ``(edge, s)`` with ``s`` a 1-based index into the edge's list. A set of
e(H) vertices is a hyperedge when the first coordinates form a copy of H that is canonical
w.r.t. sigma once each edge takes the colour at its index.
"""
import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .config import Guards
from .density import max_k_density, threshold_scale
from .dto import (
    AbundanceMode,
    AbundanceReport,
    ContainerDegreeReport,
    DegreeProfile,
    EncodingVertex,
    PatternMode,
)
from .errors import DomainError, ForeignVertexError, IncompatibleColouringError, check_uniformity
from .hypergraph import Colouring, KGraph, ListAssignment, Ordering, _iter_vertex_maps
from .patterns import PatternClassifier, count_distinct_canonical_copies

logger = logging.getLogger(__name__)

Hyperedge = FrozenSet[EncodingVertex]


@dataclass(frozen=True)
class EncodingHypergraph:
    base_graph: KGraph
    list_assignment: ListAssignment
    pattern: KGraph
    sigma: Ordering
    hyperedges: Tuple[Hyperedge, ...]

    @property
    def uniformity(self) -> int:
        return self.pattern.e

    @property
    def r(self) -> int:
        return self.list_assignment.r

    @property
    def vertex_count(self) -> int:
        return self.r * self.base_graph.e

    @property
    def edge_count(self) -> int:
        return len(self.hyperedges)

    @cached_property
    def vertices(self) -> Tuple[EncodingVertex, ...]:
        return tuple((e, s) for e in self.base_graph.edges for s in range(1, self.r + 1))

    @cached_property
    def vertex_index(self) -> Dict[EncodingVertex, int]:
        return {x: i for i, x in enumerate(self.vertices)}

    @cached_property
    def hyperedge_masks(self) -> Tuple[int, ...]:
        index = self.vertex_index
        return tuple(sum(1 << index[x] for x in h) for h in self.hyperedges)

    def check_vertices(self, W: Iterable[EncodingVertex]) -> FrozenSet[EncodingVertex]:
        W = frozenset(W)
        foreign = [x for x in W if x not in self.vertex_index]
        if foreign:
            raise ForeignVertexError(
                f"{len(foreign)} vertex/vertices not in the encoding, first {foreign[0]}",
                {"foreign": [[list(e), s] for e, s in foreign[:10]]},
            )
        return W

    def mask_of(self, W: Iterable[EncodingVertex]) -> int:
        index = self.vertex_index
        return sum(1 << index[x] for x in self.check_vertices(W))

    def induced_edge_count(self, W: Iterable[EncodingVertex]) -> int:
        mask = self.mask_of(W)
        return sum(1 for m in self.hyperedge_masks if m & mask == m)

    def is_independent(self, W: Iterable[EncodingVertex]) -> bool:
        return self.induced_edge_count(W) == 0


def _canonical_index_vectors(
    classifier: PatternClassifier, lists: Sequence[Tuple[int, ...]], cache: Dict
) -> List[Tuple[int, ...]]:
    """All s-vectors (1-based) whose chosen colours make the copy canonical; memoised on list shape."""
    seen: Dict[int, int] = {}
    key = tuple(tuple(seen.setdefault(c, len(seen)) for c in lst) for lst in lists)
    hit = cache.get(key)
    if hit is None:
        r = len(lists[0]) if lists else 0
        hit = [
            tuple(s + 1 for s in svec)
            for svec in itertools.product(range(r), repeat=len(key))
            if classifier.is_canonical(tuple(key[i][s] for i, s in enumerate(svec)))
        ]
        cache[key] = hit
    return hit


def _hyperedges_for_maps(
    H: KGraph, sigma: Ordering, lists: ListAssignment, vertex_maps: Sequence[Tuple[int, ...]]
) -> Set[Hyperedge]:
    classifier = PatternClassifier(H, sigma)
    cache: Dict = {}
    out: Set[Hyperedge] = set()
    for vm in vertex_maps:
        image = tuple(tuple(sorted(vm[u] for u in h)) for h in H.edges)
        for svec in _canonical_index_vectors(classifier, [lists[e] for e in image], cache):
            out.add(frozenset(zip(image, svec)))
    return out


def _hyperedge_sort_key(h: Hyperedge):
    return tuple(sorted(h))


def build_encoding(
    H: KGraph,
    sigma: Ordering,
    Gamma: KGraph,
    lists: ListAssignment,
    guards: Optional[Guards] = None,
    workers: int = 1,
) -> EncodingHypergraph:
    check_uniformity(H, Gamma)
    lists.check_total(Gamma)
    guards = guards or Guards()
    vertex_maps = list(_iter_vertex_maps(H, Gamma))
    guards.check("copies", len(vertex_maps))
    guards.check("encoding", len(vertex_maps) * lists.r ** H.e)
    logger.info(
        "[encode] start k=%d copies=%d r=%d e(H)=%d workers=%d",
        H.uniformity, len(vertex_maps), lists.r, H.e, workers,
    )
    if workers > 1 and len(vertex_maps) > workers:
        chunk = math.ceil(len(vertex_maps) / workers)
        chunks = [vertex_maps[i:i + chunk] for i in range(0, len(vertex_maps), chunk)]
        hyperedges: Set[Hyperedge] = set()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_hyperedges_for_maps, *zip(*[(H, sigma, lists, c) for c in chunks])):
                hyperedges |= part
    else:
        hyperedges = _hyperedges_for_maps(H, sigma, lists, vertex_maps)
    ordered = tuple(sorted(hyperedges, key=_hyperedge_sort_key))
    logger.info("[encode] done v=%d e=%d", lists.r * Gamma.e, len(ordered))
    return EncodingHypergraph(Gamma, lists, H, sigma, ordered)


def graph_shadow(encoding: EncodingHypergraph, W: Iterable[EncodingVertex]) -> KGraph:
    W = encoding.check_vertices(W)
    base = encoding.base_graph
    return KGraph(base.uniformity, base.vertex_count, {e for e, _ in W})


def colouring_to_vertexset(G: KGraph, chi: Colouring, lists: ListAssignment) -> FrozenSet[EncodingVertex]:
    """W(G, chi): every (e, s) with e in E(G) and chi(e) equal to the s-th list colour."""
    chi.check_total(G)
    lists.check_total(G)
    out = set()
    for e in G.edges:
        matches = [(e, s) for s, c in enumerate(lists[e], start=1) if c == chi[e]]
        if not matches:
            raise IncompatibleColouringError(
                f"colour {chi[e]} of edge {e} is not in its list {lists[e]}", e, {"list": list(lists[e])}
            )
        out.update(matches)
    return frozenset(out)


def first_colour_colouring(Gamma: KGraph, lists: ListAssignment) -> Colouring:
    return Colouring({e: lists[e][0] for e in Gamma.edges})


def degree_profile(encoding: EncodingHypergraph, H: KGraph, guards: Optional[Guards] = None) -> DegreeProfile:
    """Exact Delta_j for j = 1..e(H) next to r^{e(H)} (n^{-1/m_k(H)})^{j-1} n^{v(H)-k}."""
    guards = guards or Guards()
    eH = H.e
    guards.check("profile", sum(math.comb(eH, j) for j in range(1, eH + 1)) * encoding.edge_count)
    deltas: List[int] = []
    for j in range(1, eH + 1):
        counts: Counter = Counter()
        for h in encoding.hyperedges:
            counts.update(itertools.combinations(sorted(h), j))
        deltas.append(max(counts.values(), default=0))
    density = max_k_density(H, guards).value
    n = encoding.base_graph.vertex_count
    k = H.uniformity
    r = encoding.r
    # exponent kept exact so that a zero exponent gives exactly r^{e(H)}
    bounds = tuple(
        float(r ** eH) * float(n) ** float(Fraction(H.v - k) - Fraction(j - 1) / density)
        for j in range(1, eH + 1)
    )
    profile = DegreeProfile(n=n, r=r, deltas=tuple(deltas), bounds=bounds, density=density)
    logger.info("[profile] deltas=%s satisfied=%s", profile.deltas, profile.satisfied)
    return profile


def container_degree_check(
    profile: DegreeProfile, encoding: EncodingHypergraph, d0: float, q: Optional[float] = None
) -> ContainerDegreeReport:
    """Delta_j <= D0 q^{j-1} e(H)/v(H) for every j; q defaults to n^{-1/m_k(H)}."""
    if q is None:
        q = threshold_scale(encoding.pattern, profile.n).value
    v, e = encoding.vertex_count, encoding.edge_count
    ratio = e / v if v else 0.0
    bounds = tuple(d0 * q ** (j - 1) * ratio for j in range(1, len(profile.deltas) + 1))
    satisfied = tuple(d <= b for d, b in zip(profile.deltas, bounds))
    return ContainerDegreeReport(d0=d0, q=q, bounds=bounds, satisfied=satisfied)


def count_canonical_copies(
    Gamma: KGraph, chi: Colouring, H: KGraph, sigma: Ordering, mode: PatternMode = PatternMode.EXISTS
) -> int:
    return count_distinct_canonical_copies(H, sigma, Gamma, chi, mode)


def _shadow_edges(mask: int, edge_bits: Sequence[int]) -> int:
    return sum(1 for b in edge_bits if mask & b)


def _render(encoding: EncodingHypergraph, mask: int) -> List[List]:
    return [[list(e), s] for i, (e, s) in enumerate(encoding.vertices) if mask >> i & 1]


def check_abundance(
    encoding: EncodingHypergraph,
    gamma: float,
    epsilon: float,
    mode: AbundanceMode = AbundanceMode.EXHAUSTIVE,
    samples: int = 200,
    seed: int = 0,
    guards: Optional[Guards] = None,
) -> AbundanceReport:
    """Check the three abundance conditions for F = {W : e(G_W) >= (1 - gamma) e(Gamma)}."""
    if not (0 < epsilon <= 1) or not (0 <= gamma <= 1):
        raise DomainError("need 0 < epsilon <= 1 and 0 <= gamma <= 1", {"gamma": gamma, "epsilon": epsilon})
    guards = guards or Guards()
    base = encoding.base_graph
    r = encoding.r
    v = encoding.vertex_count
    e_total = encoding.edge_count
    need_shadow = (1 - gamma) * base.e
    # vertex bits of each base edge (r consecutive indices)
    edge_bits = [((1 << r) - 1) << (i * r) for i in range(base.e)]
    hmasks = encoding.hyperedge_masks
    report = AbundanceReport(mode=mode, gamma=gamma, epsilon=epsilon)
    report.notes.append("increasing: shadow size is monotone under inclusion")

    def test(mask: int) -> None:
        report.members_tested += 1
        size = bin(mask).count("1")
        if report.min_size_ok and size < epsilon * v:
            report.min_size_ok = False
            report.min_size_violation = _render(encoding, mask)
        if report.dense_ok:
            induced = sum(1 for m in hmasks if m & mask == m)
            if induced < epsilon * e_total:
                report.dense_ok = False
                report.density_violation = _render(encoding, mask)

    if mode is AbundanceMode.EXHAUSTIVE:
        guards.check("abundance_vertices", v)
        for mask in range(1 << v):
            if _shadow_edges(mask, edge_bits) >= need_shadow:
                test(mask)
        logger.info("[abundance] exhaustive members=%d abundant=%s", report.members_tested, report.abundant)
        return report

    rng = np.random.default_rng(seed)
    required = max(0, math.ceil(need_shadow - 1e-12))
    full = (1 << v) - 1
    # extremal members: every edge at one fixed index, and the full vertex set
    candidates = [sum(1 << (i * r + s) for i in range(base.e)) for s in range(r)] + [full]
    for _ in range(samples):
        chosen = rng.choice(base.e, size=required, replace=False) if required else []
        # minimal members: exactly one index on a minimum-size set of shadow edges
        candidates.append(sum(1 << (int(i) * r + int(rng.integers(r))) for i in chosen))
        # random members: each vertex with probability 1/2, repaired to a large enough shadow
        mask = int(sum(1 << i for i in np.flatnonzero(rng.random(v) < 0.5)))
        missing = [i for i in range(base.e) if not mask & edge_bits[i]]
        deficit = required - (base.e - len(missing))
        if deficit > 0:
            for i in rng.choice(missing, size=deficit, replace=False):
                mask |= 1 << (int(i) * r + int(rng.integers(r)))
        candidates.append(mask)
    for mask in candidates:
        if _shadow_edges(mask, edge_bits) >= need_shadow:
            test(mask)
    report.notes.append("sampled: evidence only, not a proof of abundance")
    logger.info("[abundance] sampled members=%d abundant=%s", report.members_tested, report.abundant)
    return report


def format_hyperedges(encoding: EncodingHypergraph) -> str:
    lines = [f"{encoding.uniformity} {encoding.r} {encoding.vertex_count} {encoding.edge_count}"]
    for h in encoding.hyperedges:
        lines.append(" ".join(f"{','.join(str(u) for u in e)}:{s}" for e, s in sorted(h)))
    return "\n".join(lines) + "\n"


def write_hyperedges(encoding: EncodingHypergraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_hyperedges(encoding))
