"""Projection maps and canonical colour patterns of k-graphs.

Position sets ``S`` are sorted tuples of 1-based positions in ``[k]``. A coloured copy of H
is canonical w.r.t. an ordering sigma when, for some S, the colour of every edge is an
injective function of its S-projection.
"""
import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .dto import Edge, PatternMode, PatternWitness, PositionSet
from .errors import PatternError, check_uniformity
from .hypergraph import Colouring, Embedding, KGraph, Ordering, _iter_vertex_maps

logger = logging.getLogger(__name__)

MAX_UNIFORMITY = 8


def all_position_sets(k: int) -> Tuple[PositionSet, ...]:
    if k > MAX_UNIFORMITY:
        raise PatternError(f"pattern classification supports k <= {MAX_UNIFORMITY}, got {k}", {"k": k})
    return tuple(S for size in range(k + 1) for S in itertools.combinations(range(1, k + 1), size))


def project(T: Sequence[int], S: Sequence[int], sigma: Ordering) -> Tuple[int, ...]:
    """Elements of T at the sigma-positions listed in S, returned in sigma order."""
    k = len(T)
    if len(set(T)) != k:
        raise PatternError(f"projection needs distinct vertices, got {tuple(T)}", {"T": list(T)})
    n = len(sigma)
    if any(not 0 <= v < n for v in T):
        raise PatternError(f"vertices of {tuple(T)} are not ordered by sigma", {"T": list(T)})
    for i in S:
        if not 1 <= i <= k:
            raise PatternError(f"position {i} out of range [1, {k}]", {"position": i, "k": k})
    ordered = sigma.sort(T)
    return tuple(ordered[i - 1] for i in sorted(set(S)))


def relabel_colours(colours: Sequence[int]) -> Tuple[int, ...]:
    seen: Dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in colours)


def _factors_injectively(groups: Sequence[int], colours: Sequence[int]) -> bool:
    forward: Dict[int, int] = {}
    backward: Dict[int, int] = {}
    for g, c in zip(groups, colours):
        if forward.setdefault(g, c) != c or backward.setdefault(c, g) != g:
            return False
    return True


class PatternClassifier:
    """Classifies colour vectors given in H's edge order against every S for a fixed sigma.

    Results are memoised by the colour-relabelling canonical form of the vector.
    """

    def __init__(self, H: KGraph, sigma: Ordering) -> None:
        if len(sigma) != H.v:
            raise PatternError(f"ordering has {len(sigma)} vertices, H has {H.v}", {"ordering": len(sigma), "H": H.v})
        self.H = H
        self.sigma = sigma
        self.position_sets = all_position_sets(H.uniformity)
        self.projections: Dict[PositionSet, Tuple[Tuple[int, ...], ...]] = {}
        self._groups: List[Tuple[PositionSet, Tuple[int, ...]]] = []
        for S in self.position_sets:
            projs = tuple(project(h, S, sigma) for h in H.edges)
            ids: Dict[Tuple[int, ...], int] = {}
            groups = tuple(ids.setdefault(p, len(ids)) for p in projs)
            self.projections[S] = projs
            self._groups.append((S, groups))
        self._cache: Dict[Tuple[int, ...], Tuple[PositionSet, ...]] = {}

    def witnessing_sets(self, colours: Sequence[int]) -> Tuple[PositionSet, ...]:
        key = relabel_colours(colours)
        hit = self._cache.get(key)
        if hit is None:
            hit = tuple(S for S, groups in self._groups if _factors_injectively(groups, key))
            self._cache[key] = hit
        return hit

    def is_canonical(self, colours: Sequence[int]) -> bool:
        return bool(self.witnessing_sets(colours))

    def witness(self, colours: Sequence[int]) -> PatternWitness:
        sets = self.witnessing_sets(colours)
        maps = {S: dict(zip(self.projections[S], colours)) for S in sets}
        return PatternWitness(witnessing_sets=sets, maps=maps)


def classify_pattern(H: KGraph, sigma: Ordering, chi: Colouring) -> PatternWitness:
    chi.check_total(H)
    return PatternClassifier(H, sigma).witness(tuple(chi[h] for h in H.edges))


def enumerate_canonical_copies(
    H: KGraph,
    sigma: Ordering,
    G: KGraph,
    chi_G: Colouring,
    classifier: Optional[PatternClassifier] = None,
) -> Iterator[Tuple[Embedding, PatternWitness]]:
    """Every embedding psi of H into G with chi_G o psi canonical w.r.t. sigma."""
    check_uniformity(H, G)
    chi_G.check_total(G)
    classifier = classifier or PatternClassifier(H, sigma)
    for vertex_map in _iter_vertex_maps(H, G):
        colours = chi_G.pull_back(H, vertex_map)
        if classifier.is_canonical(colours):
            yield Embedding(vertex_map), classifier.witness(colours)


def count_distinct_canonical_copies(
    H: KGraph,
    sigma: Ordering,
    G: KGraph,
    chi_G: Colouring,
    mode: PatternMode = PatternMode.EXISTS,
) -> int:
    """Distinct subgraph copies of H that are canonical w.r.t. sigma.

    EXISTS: a copy counts if some embedding onto it is canonical.
    STRICT: a copy is judged only under its lexicographically smallest embedding.
    """
    check_uniformity(H, G)
    chi_G.check_total(G)
    classifier = PatternClassifier(H, sigma)
    if mode is PatternMode.EXISTS:
        found = set()
        for vertex_map in _iter_vertex_maps(H, G):
            key = Embedding(vertex_map).image_key(H)
            if key in found:
                continue
            if classifier.is_canonical(chi_G.pull_back(H, vertex_map)):
                found.add(key)
        return len(found)
    first: Dict[object, Tuple[int, ...]] = {}
    for vertex_map in _iter_vertex_maps(H, G):
        key = Embedding(vertex_map).image_key(H)
        if key not in first or vertex_map < first[key]:
            first[key] = vertex_map
    return sum(1 for vm in first.values() if classifier.is_canonical(chi_G.pull_back(H, vm)))


def canonical_colouring(G: KGraph, tau: Ordering, S: Sequence[int]) -> Colouring:
    """Colour each edge of G by an injective id of its S-projection w.r.t. tau (ids from 1)."""
    ids: Dict[Tuple[int, ...], int] = {}
    assignment: Dict[Edge, int] = {}
    for e in G.edges:
        p = project(e, S, tau)
        assignment[e] = ids.setdefault(p, len(ids) + 1)
    return Colouring(assignment)


def lexicographic_colour_count(H: KGraph, sigma: Ordering) -> int:
    """Colours used by the S = {1} pattern of H: the number of distinct sigma-minima of edges."""
    return len({project(h, (1,), sigma) for h in H.edges})
