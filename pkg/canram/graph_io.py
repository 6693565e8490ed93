"""Text formats for graphs, list assignments, colourings and orderings.

Graph files: first line ``k n``, then one edge per line as k vertex labels.
List files: one line per edge, ``v1 ... vk : c1 ... cr``. Colouring files use the same
layout with a single colour. Blank lines and ``#`` comments are ignored on input.
"""
import os
import re
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .dto import Edge
from .errors import CanramError, GraphFormatError
from .hypergraph import Colouring, KGraph, ListAssignment, Ordering, named_graph

PathLike = Union[str, os.PathLike]

_COLOURS = re.compile(r"^\d+(,\d+)*$")


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _ints(tokens: List[str], number: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"expected integers, got {' '.join(tokens)!r}", number) from None


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e.strerror or e}") from e


def parse_graph_text(text: str) -> KGraph:
    lines = _content_lines(text)
    try:
        number, header = next(lines)
    except StopIteration:
        raise GraphFormatError("empty graph file", 1) from None
    head = _ints(header.split(), number)
    if len(head) != 2:
        raise GraphFormatError("header must be 'k n'", number)
    k, n = head
    if k < 2 or n < 0:
        raise GraphFormatError(f"need k >= 2 and n >= 0, got k={k} n={n}", number)
    seen: Dict[Edge, int] = {}
    edges = []
    for number, line in lines:
        vertices = _ints(line.split(), number)
        if len(vertices) != k or len(set(vertices)) != k:
            raise GraphFormatError(f"edge must have {k} distinct vertices, got {line!r}", number)
        if min(vertices) < 0 or max(vertices) >= n:
            raise GraphFormatError(f"vertex out of range 0..{n - 1} in {line!r}", number)
        edge = tuple(sorted(vertices))
        if edge in seen:
            raise GraphFormatError(f"duplicate edge {edge} (first on line {seen[edge]})", number)
        seen[edge] = number
        edges.append(edge)
    return KGraph(k, n, edges)


def parse_graph_file(path: PathLike) -> KGraph:
    return parse_graph_text(_read(path))


def format_graph(G: KGraph) -> str:
    lines = [f"{G.uniformity} {G.vertex_count}"] + [" ".join(str(u) for u in e) for e in G.edges]
    return "\n".join(lines) + "\n"


def write_graph(G: KGraph, path: PathLike) -> None:
    Path(path).write_text(format_graph(G), encoding="utf-8", newline="\n")


def load_graph(spec: str) -> KGraph:
    """A graph file path, or a name such as ``K4``, ``C6`` or ``K5^3``."""
    if os.path.exists(spec):
        return parse_graph_file(spec)
    try:
        return named_graph(spec)
    except CanramError:
        raise GraphFormatError(f"{spec!r} is neither a graph file nor a known graph name") from None


def _split_entries(text: str) -> Iterator[Tuple[int, Edge, List[int]]]:
    for number, line in _content_lines(text):
        left, sep, right = line.partition(":")
        if not sep:
            raise GraphFormatError("expected 'v1 ... vk : c1 ... cr'", number)
        edge = tuple(sorted(_ints(left.split(), number)))
        colours = _ints(right.split(), number)
        if not colours:
            raise GraphFormatError(f"no colours for edge {edge}", number)
        yield number, edge, colours


def parse_lists_text(text: str) -> ListAssignment:
    lists: Dict[Edge, Tuple[int, ...]] = {}
    r: Optional[int] = None
    for number, edge, colours in _split_entries(text):
        if r is None:
            r = len(colours)
        if len(colours) != r:
            raise GraphFormatError(f"list of edge {edge} has {len(colours)} colours, expected {r}", number)
        if edge in lists:
            raise GraphFormatError(f"duplicate list for edge {edge}", number)
        lists[edge] = tuple(colours)
    if r is None:
        raise GraphFormatError("list file has no entries")
    return ListAssignment(r, lists)


def parse_list_file(path: PathLike) -> ListAssignment:
    return parse_lists_text(_read(path))


def load_lists(spec: str, G: KGraph) -> ListAssignment:
    """A list file, or ``1,2`` meaning that list on every edge of G."""
    if os.path.exists(spec) or not _COLOURS.match(spec.strip()):
        return parse_list_file(spec)
    return ListAssignment.constant(G, [int(c) for c in spec.strip().split(",")])


def format_lists(G: KGraph, lists: ListAssignment) -> str:
    return "".join(
        f"{' '.join(str(u) for u in e)} : {' '.join(str(c) for c in lists[e])}\n" for e in G.edges
    )


def parse_colouring_text(text: str) -> Colouring:
    assignment: Dict[Edge, int] = {}
    for number, edge, colours in _split_entries(text):
        if len(colours) != 1:
            raise GraphFormatError(f"edge {edge} needs exactly one colour", number)
        if edge in assignment:
            raise GraphFormatError(f"duplicate colour for edge {edge}", number)
        assignment[edge] = colours[0]
    return Colouring(assignment)


def parse_colouring_file(path: PathLike) -> Colouring:
    return parse_colouring_text(_read(path))


def format_colouring(colouring: Colouring) -> str:
    return "".join(
        f"{' '.join(str(u) for u in e)} : {c}\n" for e, c in sorted(colouring.assignment.items())
    )


def parse_ordering(text: str) -> Ordering:
    """``2,0,1``: vertex 2 first, then 0, then 1."""
    try:
        perm = tuple(int(t) for t in text.replace(" ", "").split(",") if t != "")
    except ValueError:
        raise GraphFormatError(f"ordering must be comma-separated integers, got {text!r}") from None
    try:
        return Ordering(perm)
    except CanramError as e:
        raise GraphFormatError(str(e)) from e
