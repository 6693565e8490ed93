"""k-uniform hypergraphs, orderings, colourings, list assignments and copy enumeration.

Vertices are dense integer labels ``0..n-1``; edges are sorted vertex tuples and a
graph keeps its edges in lexicographic order so every iteration is deterministic.
"""
import itertools
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Sequence, Tuple

import networkx as nx
import numpy as np

from .dto import Edge
from .errors import (
    CanramError,
    IncompatibleColouringError,
    PartialColouringError,
    check_uniformity,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KGraph:
    uniformity: int
    vertex_count: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        k, n = self.uniformity, self.vertex_count
        if k < 2:
            raise CanramError("uniformity must be at least 2", {"uniformity": k})
        if n < 0:
            raise CanramError("vertex count must be non-negative", {"vertex_count": n})
        canonical = set()
        for raw in self.edges:
            e = tuple(sorted(int(v) for v in raw))
            if len(e) != k or len(set(e)) != k:
                raise CanramError(f"edge {tuple(raw)} must have exactly {k} distinct vertices", {"edge": list(raw)})
            if e[0] < 0 or e[-1] >= n:
                raise CanramError(f"edge {e} has a vertex outside 0..{n - 1}", {"edge": list(e)})
            if e in canonical:
                raise CanramError(f"duplicate edge {e}", {"edge": list(e)})
            canonical.add(e)
        object.__setattr__(self, "edges", tuple(sorted(canonical)))

    @property
    def v(self) -> int:
        return self.vertex_count

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> Tuple[int, ...]:
        """Neighbourhood bitsets (k = 2 only)."""
        if self.uniformity != 2:
            raise CanramError("bitset adjacency is defined for 2-graphs only")
        adj = [0] * self.vertex_count
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return tuple(adj)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        deg = [0] * self.vertex_count
        for e in self.edges:
            for u in e:
                deg[u] += 1
        return tuple(deg)

    @cached_property
    def edge_masks(self) -> Tuple[int, ...]:
        return tuple(sum(1 << u for u in e) for e in self.edges)

    def degree(self, vertex: int) -> int:
        return self.degrees[vertex]

    def has_edge(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def induced_edge_count(self, vertices: Iterable[int]) -> int:
        mask = sum(1 << u for u in set(vertices))
        return sum(1 for m in self.edge_masks if m & mask == m)

    def induced(self, vertices: Iterable[int]) -> "KGraph":
        keep = set(vertices)
        return KGraph(self.uniformity, self.vertex_count, [e for e in self.edges if keep.issuperset(e)])

    def edge_subgraph(self, edges: Iterable[Iterable[int]]) -> "KGraph":
        return KGraph(self.uniformity, self.vertex_count, list(edges))

    @classmethod
    def from_networkx(cls, graph) -> "KGraph":
        nodes = sorted(graph.nodes())
        label = {u: i for i, u in enumerate(nodes)}
        return cls(2, len(nodes), [(label[a], label[b]) for a, b in graph.edges()])

    def to_networkx(self):
        if self.uniformity != 2:
            raise CanramError("networkx export is defined for 2-graphs only")
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g

    def __repr__(self) -> str:
        return f"KGraph(k={self.uniformity}, n={self.vertex_count}, e={self.e})"


@dataclass(frozen=True)
class Ordering:
    """Position ``i`` (0-based) holds the vertex ranked ``i + 1``."""

    permutation: Tuple[int, ...]

    def __post_init__(self) -> None:
        perm = tuple(int(v) for v in self.permutation)
        if sorted(perm) != list(range(len(perm))):
            raise CanramError(f"ordering {perm} is not a permutation of 0..{len(perm) - 1}", {"ordering": list(perm)})
        object.__setattr__(self, "permutation", perm)

    @classmethod
    def natural(cls, n: int) -> "Ordering":
        return cls(tuple(range(n)))

    @cached_property
    def rank(self) -> Tuple[int, ...]:
        rank = [0] * len(self.permutation)
        for pos, v in enumerate(self.permutation):
            rank[v] = pos
        return tuple(rank)

    def reversed(self) -> "Ordering":
        return Ordering(tuple(reversed(self.permutation)))

    def sort(self, vertices: Iterable[int]) -> Tuple[int, ...]:
        rank = self.rank
        return tuple(sorted(vertices, key=lambda u: rank[u]))

    def __len__(self) -> int:
        return len(self.permutation)


@dataclass(frozen=True)
class Colouring:
    assignment: Mapping[Edge, int]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "assignment", {tuple(sorted(e)): int(c) for e, c in dict(self.assignment).items()}
        )

    def __getitem__(self, edge: Edge) -> int:
        return self.assignment[edge]

    def __len__(self) -> int:
        return len(self.assignment)

    def check_total(self, graph: KGraph) -> None:
        missing = [e for e in graph.edges if e not in self.assignment]
        if missing:
            raise PartialColouringError(
                f"colouring misses {len(missing)} edge(s), first {missing[0]}",
                {"missing": [list(e) for e in missing[:10]]},
            )

    def restrict(self, graph: KGraph) -> "Colouring":
        self.check_total(graph)
        return Colouring({e: self.assignment[e] for e in graph.edges})

    def pull_back(self, H: KGraph, vertex_map: Sequence[int]) -> Tuple[int, ...]:
        """Colours of the images of H's edges, in H's edge order (the composition chi o psi)."""
        return tuple(self.assignment[tuple(sorted(vertex_map[u] for u in h))] for h in H.edges)


@dataclass(frozen=True)
class ListAssignment:
    r: int
    lists: Mapping[Edge, Tuple[int, ...]]

    def __post_init__(self) -> None:
        if self.r < 1:
            raise CanramError("list length r must be at least 1", {"r": self.r})
        lists = {}
        for e, colours in dict(self.lists).items():
            colours = tuple(int(c) for c in colours)
            if len(colours) != self.r:
                raise CanramError(
                    f"list of edge {tuple(e)} has {len(colours)} entries, expected {self.r}",
                    {"edge": list(e), "list": list(colours)},
                )
            lists[tuple(sorted(e))] = colours
        object.__setattr__(self, "lists", lists)

    def __getitem__(self, edge: Edge) -> Tuple[int, ...]:
        return self.lists[edge]

    def __contains__(self, edge) -> bool:
        return edge in self.lists

    @classmethod
    def constant(cls, graph: KGraph, colours: Sequence[int]) -> "ListAssignment":
        colours = tuple(colours)
        return cls(len(colours), {e: colours for e in graph.edges})

    @classmethod
    def random(cls, graph: KGraph, r: int, universe: int, rng: np.random.Generator) -> "ListAssignment":
        """Each list is r independent uniform draws from colours 1..universe (repeats allowed)."""
        draws = rng.integers(1, universe + 1, size=(graph.e, r))
        return cls(r, {e: tuple(int(c) for c in row) for e, row in zip(graph.edges, draws)})

    def check_total(self, graph: KGraph) -> None:
        missing = [e for e in graph.edges if e not in self.lists]
        if missing:
            raise CanramError(
                f"list assignment misses {len(missing)} edge(s), first {missing[0]}",
                {"missing": [list(e) for e in missing[:10]]},
            )

    def restrict(self, graph: KGraph) -> "ListAssignment":
        self.check_total(graph)
        return ListAssignment(self.r, {e: self.lists[e] for e in graph.edges})

    def check_compatible(self, graph: KGraph, colouring: Colouring) -> None:
        colouring.check_total(graph)
        self.check_total(graph)
        for e in graph.edges:
            if colouring[e] not in self.lists[e]:
                raise IncompatibleColouringError(
                    f"colour {colouring[e]} of edge {e} is not in its list {self.lists[e]}",
                    e,
                    {"colour": colouring[e], "list": list(self.lists[e])},
                )

    def is_compatible(self, graph: KGraph, colouring: Colouring) -> bool:
        try:
            self.check_compatible(graph, colouring)
        except (IncompatibleColouringError, PartialColouringError):
            return False
        return True


@dataclass(frozen=True)
class Embedding:
    """Injective vertex map V(H) -> V(G); ``vertex_map[u]`` is the image of u."""

    vertex_map: Tuple[int, ...]

    def image_edges(self, H: KGraph) -> Tuple[Edge, ...]:
        """Images of H's edges, in H's edge order."""
        m = self.vertex_map
        return tuple(tuple(sorted(m[u] for u in h)) for h in H.edges)

    def image_key(self, H: KGraph) -> Tuple[FrozenSet[int], FrozenSet[Edge]]:
        return frozenset(self.vertex_map), frozenset(self.image_edges(H))


# ---------- constructors ----------

def complete_graph(n: int, k: int = 2) -> KGraph:
    return KGraph(k, n, itertools.combinations(range(n), k))


def empty_graph(n: int, k: int = 2) -> KGraph:
    return KGraph(k, n, ())


def cycle_graph(n: int) -> KGraph:
    if n < 3:
        raise CanramError("a cycle needs at least 3 vertices", {"n": n})
    return KGraph(2, n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> KGraph:
    """Path on n vertices (n - 1 edges)."""
    return KGraph(2, n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> KGraph:
    return KGraph(2, leaves + 1, [(0, i) for i in range(1, leaves + 1)])


_NAMED = re.compile(r"^(?P<kind>[KCPSE])(?P<m>\d+)(?:\^(?P<k>\d+))?$")


def named_graph(name: str) -> KGraph:
    """``K5``, ``C4``, ``P3`` (path on 3 vertices), ``S3`` (star), ``E4`` (empty), ``K4^3`` (complete 3-graph)."""
    match = _NAMED.match(name.strip())
    if not match:
        raise CanramError(f"unknown graph name {name!r}", {"name": name})
    kind, m = match.group("kind"), int(match.group("m"))
    k = int(match.group("k") or 2)
    if k != 2 and kind not in {"K", "E"}:
        raise CanramError(f"only K and E support a uniformity suffix, got {name!r}", {"name": name})
    if kind == "K":
        return complete_graph(m, k)
    if kind == "E":
        return empty_graph(m, k)
    if kind == "C":
        return cycle_graph(m)
    if kind == "P":
        return path_graph(m)
    return star_graph(m)


# ---------- copy enumeration ----------

def _placement_order(H: KGraph) -> List[int]:
    """Vertex order for backtracking: each next vertex has the most edges into the placed set."""
    if H.v == 0:
        return []
    placed: List[int] = []
    remaining = set(range(H.v))
    incident: Dict[int, List[Edge]] = {u: [] for u in range(H.v)}
    for h in H.edges:
        for u in h:
            incident[u].append(h)
    while remaining:
        chosen = set(placed)

        def score(u: int) -> Tuple[int, int, int]:
            back = sum(1 for h in incident[u] if all(w in chosen or w == u for w in h))
            touch = sum(1 for h in incident[u] if any(w in chosen for w in h))
            return back, touch, H.degrees[u]

        best = max(sorted(remaining), key=score)
        placed.append(best)
        remaining.discard(best)
    return placed


def _iter_vertex_maps(H: KGraph, G: KGraph) -> Iterator[Tuple[int, ...]]:
    check_uniformity(H, G)
    if H.v > G.v:
        return
    order = _placement_order(H)
    position = {u: i for i, u in enumerate(order)}
    # edges of H completed when their last vertex (in placement order) is placed
    closing: Dict[int, List[Edge]] = {u: [] for u in order}
    for h in H.edges:
        closing[max(h, key=lambda w: position[w])].append(h)
    back_neighbours: Dict[int, List[int]] = {u: [] for u in order}
    if H.uniformity == 2:
        for a, b in H.edges:
            if position[a] < position[b]:
                back_neighbours[b].append(a)
            else:
                back_neighbours[a].append(b)
        adj = G.adjacency
    g_deg = G.degrees
    h_deg = H.degrees
    eligible = {u: [x for x in range(G.v) if g_deg[x] >= h_deg[u]] for u in order}
    image = [-1] * H.v
    used = [False] * G.v
    edge_set = G.edge_set

    def extend(depth: int) -> Iterator[Tuple[int, ...]]:
        if depth == len(order):
            yield tuple(image)
            return
        u = order[depth]
        if H.uniformity == 2 and back_neighbours[u]:
            mask = -1
            for w in back_neighbours[u]:
                mask &= adj[image[w]]
            candidates = [x for x in eligible[u] if mask >> x & 1]
        else:
            candidates = eligible[u]
        for x in candidates:
            if used[x]:
                continue
            image[u] = x
            if H.uniformity > 2:
                ok = all(tuple(sorted(image[w] for w in h)) in edge_set for h in closing[u])
                if not ok:
                    continue
            used[x] = True
            yield from extend(depth + 1)
            used[x] = False
        image[u] = -1

    yield from extend(0)


def enumerate_copies(H: KGraph, G: KGraph) -> Iterator[Embedding]:
    """Stream every embedding of H into G exactly once, in a deterministic order."""
    for vertex_map in _iter_vertex_maps(H, G):
        yield Embedding(vertex_map)


def count_embeddings(H: KGraph, G: KGraph) -> int:
    return sum(1 for _ in _iter_vertex_maps(H, G))


def distinct_subgraph_copies(H: KGraph, G: KGraph) -> int:
    """Number of distinct subgraphs of G isomorphic to H (embeddings deduplicated by image)."""
    seen = set()
    for vertex_map in _iter_vertex_maps(H, G):
        edges = frozenset(tuple(sorted(vertex_map[u] for u in h)) for h in H.edges)
        seen.add((frozenset(vertex_map), edges))
    return len(seen)


def automorphisms(H: KGraph) -> List[Tuple[int, ...]]:
    """Aut(H) as image tuples, sorted. 2-graphs go through networkx's VF2 matcher."""
    if H.uniformity == 2:
        g = H.to_networkx()
        matcher = nx.algorithms.isomorphism.GraphMatcher(g, g)
        return sorted(tuple(phi[u] for u in range(H.v)) for phi in matcher.isomorphisms_iter())
    return sorted(_iter_vertex_maps(H, H))


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
