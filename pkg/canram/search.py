"""Copy index and backtracking core shared by the list solver and the partition search.

Copies of H are grouped into constraints, one per distinct set of host edges. A constraint is
violated when some embedding onto its edge set sees a canonical colour pattern. With
propagation on, the search colours the edge with the fewest admissible colours next and keeps
every constraint with at most two uncoloured edges consistent. Without it, edges are coloured
in a fixed fail-first order and a constraint is checked once it is fully coloured.
"""
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .config import Guards
from .dto import Edge, SolverStats
from .errors import GuardExceededError, check_uniformity
from .hypergraph import KGraph, Ordering, _iter_vertex_maps
from .patterns import PatternClassifier, relabel_colours

logger = logging.getLogger(__name__)

# nodes between two looks at the shared stop flag
STOP_POLL = 512


class SearchCancelled(Exception):
    """Raised inside a branch once another branch has found a certificate."""


@dataclass(frozen=True)
class Constraint:
    # sorted host edge indices
    edges: Tuple[int, ...]
    # index into CopyIndex.shapes
    shape: int


def interchangeable(domains: Sequence[Tuple[int, ...]]) -> bool:
    """Every edge has the same set of colours, so colours can be permuted freely."""
    return len({frozenset(d) for d in domains}) <= 1


class CopyIndex:
    """Copies of H in G as tuples of host edge indices (in H's edge order), deduplicated.

    ``copies`` keeps one entry per embedding. ``constraints`` merges the embeddings onto one
    edge set; ``shapes`` holds, per constraint shape, the slot of each H edge for every such
    embedding.
    """

    def __init__(self, G: KGraph, H: KGraph, sigma: Ordering, guards: Optional[Guards] = None) -> None:
        check_uniformity(H, G)
        guards = guards or Guards()
        self.G = G
        self.H = H
        self.sigma = sigma
        self.classifier = PatternClassifier(H, sigma)
        index = G.edge_index
        copies = set()
        for vertex_map in _iter_vertex_maps(H, G):
            copies.add(tuple(index[tuple(sorted(vertex_map[u] for u in h))] for h in H.edges))
            guards.check("copies", len(copies))
        self.copies: Tuple[Tuple[int, ...], ...] = tuple(sorted(copies))
        self.trivial = any(not c for c in self.copies)

        grouped: Dict[Tuple[int, ...], set] = {}
        for c in self.copies:
            if not c:
                continue
            edges = tuple(sorted(set(c)))
            slot = {e: s for s, e in enumerate(edges)}
            grouped.setdefault(edges, set()).add(tuple(slot[i] for i in c))
        shape_ids: Dict[Tuple[Tuple[int, ...], ...], int] = {}
        self.constraints: Tuple[Constraint, ...] = tuple(
            Constraint(edges, shape_ids.setdefault(tuple(sorted(grouped[edges])), len(shape_ids)))
            for edges in sorted(grouped)
        )
        self.shapes: Tuple[Tuple[Tuple[int, ...], ...], ...] = tuple(sorted(shape_ids, key=shape_ids.get))

        self.watching: List[List[int]] = [[] for _ in range(G.e)]
        for j, con in enumerate(self.constraints):
            for e in con.edges:
                self.watching[e].append(j)
        through = [len(w) for w in self.watching]
        self.order: Tuple[int, ...] = tuple(sorted(range(G.e), key=lambda i: (-through[i], i)))
        self.position = {e: t for t, e in enumerate(self.order)}
        # first depth from which no remaining edge lies in a copy
        self.free_from = next((t for t, e in enumerate(self.order) if through[e] == 0), G.e)
        # edges linked through shared constraints, each group in fail-first order
        parent = list(range(G.e))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for con in self.constraints:
            root = find(con.edges[0])
            for e in con.edges[1:]:
                parent[find(e)] = root
        groups: Dict[int, List[int]] = {}
        for e in self.order[:self.free_from]:
            groups.setdefault(find(e), []).append(e)
        self.components: Tuple[Tuple[int, ...], ...] = tuple(tuple(g) for g in groups.values())
        self._violations: Dict[Tuple[int, Tuple[int, ...]], bool] = {}
        logger.debug(
            "[index] copies=%d constraints=%d shapes=%d components=%d edges=%d free_from=%d",
            len(self.copies), len(self.constraints), len(self.shapes), len(self.components), G.e, self.free_from,
        )

    def violated(self, j: int, values: Sequence[int]) -> bool:
        """Whether colours ``values`` on constraint j's edges give a canonical copy."""
        shape = self.constraints[j].shape
        key = (shape, relabel_colours(values))
        hit = self._violations.get(key)
        if hit is None:
            vector = key[1]
            hit = any(
                self.classifier.is_canonical(tuple(vector[s] for s in slots)) for slots in self.shapes[shape]
            )
            self._violations[key] = hit
        return hit

    def certificate(self, colours: Sequence[int], offset: int = 0) -> Dict[Edge, int]:
        return {e: colours[i] + offset for i, e in enumerate(self.G.edges)}


@dataclass
class Backtracker:
    """Depth-first colouring search.

    ``domains[i]`` lists the admissible colours of host edge i; ``None`` searches set
    partitions instead, with colours ``0..e(G)-1`` on every edge. When all edges share one
    colour set, a colour not used so far is only tried once per node, so partitions come out
    in restricted-growth form. ``stop`` is an optional shared event that cancels the search.
    """

    index: CopyIndex
    domains: Optional[Sequence[Tuple[int, ...]]]
    propagate: bool = True
    guards: Guards = field(default_factory=Guards)
    stats: SolverStats = field(default_factory=SolverStats)
    stop: Optional[Any] = None

    def __post_init__(self) -> None:
        m = self.index.G.e
        if self.domains is None:
            self.domains = [tuple(range(m))] * m
            self.propagate = False
        self.domains = list(self.domains)
        self.symmetric = interchangeable(self.domains)
        self.palette: Tuple[int, ...] = self.domains[0] if m else ()
        self.colours: List[Optional[int]] = [None] * m
        self.used: Counter = Counter()
        self.banned: List[Counter] = [Counter() for _ in range(m)]
        self.trail: List[Tuple[int, int]] = []
        self.open = [len(con.edges) for con in self.index.constraints]
        # constraints with exactly two uncoloured edges, per edge
        self.tight = [0] * m
        for j, con in enumerate(self.index.constraints):
            if self.open[j] == 2:
                for i in con.edges:
                    self.tight[i] += 1
        self.stats.copies = len(self.index.copies)
        self.scope: Tuple[int, ...] = ()

    # --------- State ---------

    def _live(self, e: int) -> List[int]:
        banned = self.banned[e]
        return [c for c in self.domains[e] if not banned[c]]

    def _ban(self, e: int, c: int) -> None:
        self.banned[e][c] += 1
        self.trail.append((e, c))
        self.stats.propagations += 1

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            e, c = self.trail.pop()
            self.banned[e][c] -= 1

    def _shift_open(self, j: int, delta: int) -> None:
        before = self.open[j]
        after = before + delta
        self.open[j] = after
        if before == 2 or after == 2:
            step = 1 if after == 2 else -1
            for i in self.index.constraints[j].edges:
                self.tight[i] += step

    def _assign(self, e: int, c: int) -> None:
        self.colours[e] = c
        self.used[c] += 1
        for j in self.index.watching[e]:
            self._shift_open(j, -1)

    def _unassign(self, e: int) -> None:
        self.used[self.colours[e]] -= 1
        self.colours[e] = None
        for j in self.index.watching[e]:
            self._shift_open(j, 1)

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.stats.nodes > self.guards.nodes:
            raise GuardExceededError("nodes", self.guards.nodes, self.stats.nodes)
        if self.stop is not None and self.stats.nodes % STOP_POLL == 0 and self.stop.is_set():
            raise SearchCancelled()

    # --------- Propagation ---------

    def _revise(self, j: int) -> Optional[List[int]]:
        """Ban colours with no canonical-free completion of constraint j.

        Returns the edges whose colours shrank, or None when the constraint cannot be met.
        """
        edges = self.index.constraints[j].edges
        values = [self.colours[i] for i in edges]
        holes = [s for s, v in enumerate(values) if v is None]
        if not holes:
            return None if self.index.violated(j, values) else []
        if len(holes) == 1:
            (sx,) = holes
            x = edges[sx]
            live = self._live(x)
            alive = 0
            for c in live:
                values[sx] = c
                if self.index.violated(j, values):
                    self._ban(x, c)
                else:
                    alive += 1
            if not alive:
                return None
            return [x] if alive < len(live) else []
        sx, sy = holes
        x, y = edges[sx], edges[sy]
        live_y = self._live(y)
        supported_y = set()
        shrunk: List[int] = []
        alive_x = 0
        for c in self._live(x):
            values[sx] = c
            ok = False
            for d in live_y:
                values[sy] = d
                if not self.index.violated(j, values):
                    ok = True
                    supported_y.add(d)
            if ok:
                alive_x += 1
            else:
                self._ban(x, c)
                if not shrunk:
                    shrunk.append(x)
        if not alive_x or not supported_y:
            return None
        for d in live_y:
            if d not in supported_y:
                self._ban(y, d)
                if y not in shrunk:
                    shrunk.append(y)
        return shrunk

    def _propagate(self, pending: Iterable[int]) -> bool:
        queue = deque(j for j in pending if self.open[j] <= 2)
        queued = set(queue)
        while queue:
            j = queue.popleft()
            queued.discard(j)
            if self.open[j] > 2:
                continue
            shrunk = self._revise(j)
            if shrunk is None:
                self.stats.prunings += 1
                return False
            for x in shrunk:
                for k in self.index.watching[x]:
                    if k != j and self.open[k] == 2 and k not in queued:
                        queue.append(k)
                        queued.add(k)
        return True

    def _complete_ok(self, e: int) -> bool:
        for j in self.index.watching[e]:
            if self.open[j]:
                continue
            if self.index.violated(j, [self.colours[i] for i in self.index.constraints[j].edges]):
                self.stats.prunings += 1
                return False
        return True

    # --------- Search ---------

    def _select(self) -> Optional[int]:
        """Most constrained uncoloured edge of the current component; ties go to fail-first order."""
        best = None
        best_key = None
        for e in self.scope:
            if self.colours[e] is not None:
                continue
            if not self.propagate:
                return e
            key = (len(self._live(e)), -self.tight[e])
            if key[0] <= 1:
                return e
            if best_key is None or key < best_key:
                best, best_key = e, key
        return best

    def _choices(self, e: int) -> List[int]:
        live = self._live(e)
        if not self.symmetric:
            return live
        fresh = next((c for c in self.palette if not self.used[c]), None)
        return [c for c in live if self.used[c] or c == fresh]

    def _fill_free(self) -> None:
        for e in self.index.order[self.index.free_from:]:
            if self.colours[e] is None:
                self.colours[e] = self._live(e)[0]

    def _descend(self) -> bool:
        e = self._select()
        if e is None:
            return True
        for c in self._choices(e):
            self._tick()
            mark = len(self.trail)
            self._assign(e, c)
            ok = self._propagate(self.index.watching[e]) if self.propagate else self._complete_ok(e)
            if ok and self._descend():
                return True
            self._unassign(e)
            self._undo(mark)
        return False

    def run(self, first_colour: Optional[int] = None) -> Optional[List[int]]:
        """Colours per host edge index of an avoiding colouring, or None if none exists.

        ``first_colour`` pins the colour of the first edge in the fail-first order (root
        splitting); it turns colour symmetry off.
        """
        if self.index.trivial:
            return None
        if first_colour is not None and self.index.G.e:
            e = self.index.order[0]
            if first_colour not in self.domains[e]:
                return None
            self.domains[e] = (first_colour,)
            self.symmetric = False
        if self.propagate and not self._propagate(range(len(self.index.constraints))):
            return None
        # components share no constraint, so each is searched on its own
        for component in self.index.components:
            self.scope = component
            if not self._descend():
                return None
        self._fill_free()
        return list(self.colours)
