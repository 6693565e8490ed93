import itertools
from math import comb

import networkx as nx
import numpy as np
import pytest

from canram.errors import CanramError, IncompatibleColouringError, PartialColouringError, UniformityMismatchError
from canram.hypergraph import (
    Colouring,
    KGraph,
    ListAssignment,
    Ordering,
    automorphisms,
    complete_graph,
    count_embeddings,
    cycle_graph,
    distinct_subgraph_copies,
    enumerate_copies,
    named_graph,
    path_graph,
)


def _brute_force_embeddings(H, G):
    out = []
    for images in itertools.permutations(range(G.v), H.v):
        if all(G.has_edge(images[u] for u in h) for h in H.edges):
            out.append(tuple(images))
    return sorted(out)


@pytest.mark.parametrize("n,k,edges", [(3, 2, 3), (4, 3, 4), (5, 2, 10)])
def test_complete_graph_edge_count(n, k, edges):
    assert complete_graph(n, k).e == edges


def test_complete_graph_below_uniformity_is_empty():
    assert complete_graph(2, 3).e == 0


def test_complete_graph_is_vertex_transitive():
    G = complete_graph(6, 3)
    assert set(G.degrees) == {comb(5, 2)}


def test_embeddings_of_triangle_in_k4():
    assert count_embeddings(complete_graph(3), complete_graph(4)) == 24


def test_triangle_has_no_embedding_in_c4():
    assert list(enumerate_copies(complete_graph(3), cycle_graph(4))) == []


def test_single_three_edge_embeds_k_factorial_times():
    edge = KGraph(3, 3, [(0, 1, 2)])
    G = complete_graph(5, 3)
    assert count_embeddings(edge, G) == 6 * G.e


@pytest.mark.parametrize(
    "H,G",
    [
        (complete_graph(3), complete_graph(5)),
        (cycle_graph(4), complete_graph(5)),
        (path_graph(4), cycle_graph(6)),
        (KGraph(3, 4, [(0, 1, 2), (0, 1, 3)]), complete_graph(5, 3)),
    ],
)
def test_enumeration_matches_brute_force(H, G):
    assert sorted(e.vertex_map for e in enumerate_copies(H, G)) == _brute_force_embeddings(H, G)


@pytest.mark.parametrize(
    "H,G,copies",
    [(complete_graph(3), complete_graph(4), 4), (complete_graph(3), complete_graph(5), 10),
     (cycle_graph(4), complete_graph(4), 3)],
)
def test_distinct_subgraph_copies(H, G, copies):
    assert distinct_subgraph_copies(H, G) == copies


def test_embedding_count_divisible_by_automorphisms():
    H = cycle_graph(4)
    assert len(automorphisms(H)) == 8
    assert count_embeddings(H, complete_graph(6)) % 8 == 0


def test_identity_is_an_automorphism():
    H = path_graph(4)
    assert tuple(range(4)) in automorphisms(H)


def test_uniformity_mismatch():
    with pytest.raises(UniformityMismatchError):
        list(enumerate_copies(complete_graph(3), complete_graph(4, 3)))


def test_kgraph_canonicalises_edges():
    G = KGraph(2, 3, [(2, 1), (1, 0)])
    assert G.edges == ((0, 1), (1, 2))
    assert G.has_edge((2, 1))


@pytest.mark.parametrize("edges", [[(0, 1), (1, 0)], [(0, 3)], [(0, 0)], [(0, 1, 2)]])
def test_kgraph_rejects_bad_edges(edges):
    with pytest.raises(CanramError):
        KGraph(2, 3, edges)


def test_named_graphs():
    assert named_graph("K4").e == 6
    assert named_graph("C6").e == 6
    assert named_graph("P3").e == 2
    star = named_graph("S3")
    assert (star.v, star.e) == (4, 3)
    assert named_graph("E5").e == 0
    k43 = named_graph("K4^3")
    assert (k43.uniformity, k43.e) == (3, 4)
    with pytest.raises(CanramError):
        named_graph("Q7")


def test_networkx_interop():
    petersen = KGraph.from_networkx(nx.petersen_graph())
    assert (petersen.v, petersen.e) == (10, 15)
    back = petersen.to_networkx()
    assert nx.is_isomorphic(back, nx.petersen_graph())


def test_induced_and_edge_subgraph():
    G = complete_graph(5)
    assert G.induced([0, 1, 2]).e == 3
    assert G.induced_edge_count([0, 1, 2, 3]) == 6
    assert G.edge_subgraph([(0, 1)]).e == 1


def test_ordering_rank_and_sort():
    sigma = Ordering((2, 0, 1))
    assert sigma.rank == (1, 2, 0)
    assert sigma.sort([0, 1, 2]) == (2, 0, 1)
    assert sigma.reversed().permutation == (1, 0, 2)
    with pytest.raises(CanramError):
        Ordering((0, 0, 1))


def test_colouring_must_be_total():
    G = complete_graph(3)
    with pytest.raises(PartialColouringError):
        Colouring({(0, 1): 1}).check_total(G)


def test_list_compatibility_reports_edge():
    G = complete_graph(3)
    lists = ListAssignment.constant(G, (1, 2))
    chi = Colouring({(0, 1): 1, (0, 2): 3, (1, 2): 2})
    assert not lists.is_compatible(G, chi)
    with pytest.raises(IncompatibleColouringError) as info:
        lists.check_compatible(G, chi)
    assert info.value.edge == (0, 2)


def test_random_lists_are_seeded():
    G = complete_graph(5)
    a = ListAssignment.random(G, 3, 4, np.random.default_rng(7))
    b = ListAssignment.random(G, 3, 4, np.random.default_rng(7))
    assert a.lists == b.lists
    assert all(1 <= c <= 4 for lst in a.lists.values() for c in lst)


def test_restrict_lists():
    G = complete_graph(4)
    lists = ListAssignment.constant(G, (1, 2))
    sub = lists.restrict(G.induced([0, 1, 2]))
    assert set(sub.lists) == {(0, 1), (0, 2), (1, 2)}


@pytest.mark.parametrize(
    "H",
    [cycle_graph(5), path_graph(4), complete_graph(4), KGraph(2, 5, [(0, 1), (1, 2), (2, 0), (2, 3)]),
     complete_graph(4, 3), KGraph(3, 5, [(0, 1, 2), (0, 3, 4)])],
)
def test_automorphisms_match_self_embeddings(H):
    assert automorphisms(H) == sorted(e.vertex_map for e in enumerate_copies(H, H))
