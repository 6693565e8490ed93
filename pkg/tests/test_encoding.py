import itertools
from math import comb

import networkx as nx
import numpy as np
import pytest

from canram.dto import AbundanceMode
from canram.encoding import (
    build_encoding,
    check_abundance,
    colouring_to_vertexset,
    container_degree_check,
    count_canonical_copies,
    degree_profile,
    first_colour_colouring,
    format_hyperedges,
    graph_shadow,
)
from canram.errors import ForeignVertexError, IncompatibleColouringError
from canram.hypergraph import Colouring, KGraph, ListAssignment, Ordering, complete_graph, cycle_graph, path_graph

K3 = complete_graph(3)


def _encode(H, G, colours):
    return build_encoding(H, Ordering.natural(H.v), G, ListAssignment.constant(G, colours))


def test_single_triangle_single_colour():
    enc = _encode(K3, K3, (1,))
    assert (enc.vertex_count, enc.edge_count, enc.uniformity) == (3, 1, 3)
    profile = degree_profile(enc, K3)
    assert profile.deltas == (1, 1, 1)


def test_two_colours_make_every_triangle_colouring_a_hyperedge():
    # with two colours every colouring of a triangle is monochromatic or lexicographic
    enc = _encode(K3, K3, (1, 2))
    assert enc.vertex_count == 6
    assert enc.edge_count == 8


@pytest.mark.parametrize("n,r", [(4, 2), (5, 3), (6, 1)])
def test_vertex_count(n, r):
    enc = _encode(K3, complete_graph(n), tuple(range(1, r + 1)))
    assert enc.vertex_count == r * comb(n, 2)


def test_hyperedges_are_uniform_and_project_to_copies():
    enc = _encode(K3, complete_graph(5), (1, 2))
    assert all(len(h) == 3 for h in enc.hyperedges)
    for h in enc.hyperedges:
        shadow = graph_shadow(enc, h)
        assert shadow.e == 3
        assert len({v for e in shadow.edges for v in e}) == 3


def test_triangle_free_host_gives_empty_encoding():
    enc = _encode(K3, cycle_graph(5), (1, 2))
    assert enc.edge_count == 0
    assert enc.is_independent(enc.vertices)


def test_vertexset_of_a_colouring():
    lists = ListAssignment.constant(K3, (1, 2))
    chi = Colouring({(0, 1): 1, (0, 2): 1, (1, 2): 2})
    W = colouring_to_vertexset(K3, chi, lists)
    assert W == {((0, 1), 1), ((0, 2), 1), ((1, 2), 2)}
    enc = build_encoding(K3, Ordering.natural(3), K3, lists)
    assert graph_shadow(enc, W).edges == K3.edges


def test_vertexset_rejects_colour_outside_list():
    lists = ListAssignment.constant(K3, (1, 2))
    chi = Colouring({(0, 1): 1, (0, 2): 3, (1, 2): 2})
    with pytest.raises(IncompatibleColouringError):
        colouring_to_vertexset(K3, chi, lists)


def test_foreign_vertex_rejected():
    enc = _encode(K3, K3, (1, 2))
    with pytest.raises(ForeignVertexError):
        graph_shadow(enc, [((0, 1), 5)])
    with pytest.raises(ForeignVertexError):
        enc.is_independent([((0, 3), 1)])


def test_independence_matches_canonical_copies():
    H = cycle_graph(4)
    sigma = Ordering((0, 2, 1, 3))
    G = complete_graph(4)
    lists = ListAssignment.constant(G, (1, 2))
    enc = build_encoding(H, sigma, G, lists)
    for colours in itertools.product((1, 2), repeat=G.e):
        chi = Colouring(dict(zip(G.edges, colours)))
        W = colouring_to_vertexset(G, chi, lists)
        copies = count_canonical_copies(G, chi, H, sigma)
        assert enc.induced_edge_count(W) == copies
        assert enc.is_independent(W) == (copies == 0)


def test_first_colour_colouring_is_compatible():
    G = complete_graph(4)
    lists = ListAssignment.constant(G, (3, 7))
    chi = first_colour_colouring(G, lists)
    assert set(chi.assignment.values()) == {3}
    assert lists.is_compatible(G, chi)


def test_parallel_build_matches_serial():
    G = complete_graph(5)
    lists = ListAssignment.constant(G, (1, 2))
    serial = build_encoding(K3, Ordering.natural(3), G, lists)
    parallel = build_encoding(K3, Ordering.natural(3), G, lists, workers=2)
    assert serial.hyperedges == parallel.hyperedges


def test_degree_profile_of_triangles_within_bound():
    enc = _encode(K3, complete_graph(6), (1,))
    profile = degree_profile(enc, K3)
    assert profile.deltas == (4, 1, 1)
    assert profile.bounds[0] == pytest.approx(6.0)
    assert profile.bounds[2] == 1.0
    assert profile.all_satisfied


def test_degree_profile_of_four_cycles_within_bound():
    H = cycle_graph(4)
    enc = _encode(H, complete_graph(7), (1,))
    assert degree_profile(enc, H).all_satisfied


def test_degree_profile_of_paths_exceeds_bound_without_constant():
    # an edge of K_10 lies on 3 * 8 * 7 paths with three edges while the bound is 10^2
    H = path_graph(4)
    enc = _encode(H, complete_graph(10), (1,))
    profile = degree_profile(enc, H)
    assert profile.deltas[0] == 168
    assert profile.bounds[0] == pytest.approx(100.0)
    assert profile.satisfied[0] is False


def test_container_degree_check():
    enc = _encode(K3, complete_graph(6), (1,))
    profile = degree_profile(enc, K3)
    assert container_degree_check(profile, enc, d0=10.0).all_satisfied
    loose = container_degree_check(profile, enc, d0=1.0)
    assert loose.satisfied[0] is False
    assert loose.q == pytest.approx(6 ** -0.5)


def test_abundance_fails_minimum_size_with_full_slack():
    enc = _encode(K3, K3, (1,))
    report = check_abundance(enc, gamma=1.0, epsilon=0.5)
    assert not report.min_size_ok
    assert report.min_size_violation == []
    assert not report.abundant


@pytest.mark.parametrize("mode", [AbundanceMode.EXHAUSTIVE, AbundanceMode.SAMPLED])
def test_abundance_with_no_slack(mode):
    enc = _encode(K3, K3, (1,))
    report = check_abundance(enc, gamma=0.0, epsilon=1 / 8, mode=mode, samples=10, seed=3)
    assert report.abundant
    assert report.members_tested >= 1


def test_abundance_rejects_bad_parameters():
    enc = _encode(K3, K3, (1,))
    with pytest.raises(ValueError):
        check_abundance(enc, gamma=0.0, epsilon=0.0)


def test_count_canonical_copies():
    G = complete_graph(5)
    mono = Colouring({e: 1 for e in G.edges})
    assert count_canonical_copies(G, mono, K3, Ordering.natural(3)) == 10
    G = complete_graph(4)
    rainbow = Colouring({e: i for i, e in enumerate(G.edges, start=1)})
    assert count_canonical_copies(G, rainbow, K3, Ordering.natural(3)) == 4


def test_format_hyperedges():
    text = format_hyperedges(_encode(K3, K3, (1,)))
    assert text == "3 1 3 1\n0,1:1 0,2:1 1,2:1\n"


@pytest.mark.parametrize("H", [K3, cycle_graph(4), path_graph(4)])
@pytest.mark.parametrize("n", [6, 8])
@pytest.mark.parametrize("r", [2, 3])
def test_degree_bound_with_random_lists(H, n, r):
    rng = np.random.default_rng(n * 10 + r)
    Gamma = complete_graph(n)
    lists = ListAssignment.random(Gamma, r, 4, rng)
    enc = build_encoding(H, Ordering.natural(H.v), Gamma, lists)
    assert enc.vertex_count == r * comb(n, 2)
    profile = degree_profile(enc, H)
    assert profile.all_satisfied, profile.to_dict()


def _random_subgraph_instance(rng):
    n = int(rng.integers(4, 6))
    g = nx.gnm_random_graph(n, int(rng.integers(4, min(8, comb(n, 2)) + 1)), seed=int(rng.integers(1 << 30)))
    Gamma = KGraph.from_networkx(g)
    keep = [e for e in Gamma.edges if rng.random() < 0.8][:7]
    if len(keep) == Gamma.e:
        keep = keep[:-1]
    return Gamma, KGraph(2, Gamma.v, keep)


def test_independence_transfer_on_random_subgraphs():
    rng = np.random.default_rng(23)
    patterns = [K3, path_graph(3), cycle_graph(4)]
    for _ in range(200):
        Gamma, G = _random_subgraph_instance(rng)
        assert G.e < Gamma.e and G.e <= 7
        H = patterns[int(rng.integers(len(patterns)))]
        sigma = Ordering(tuple(int(v) for v in rng.permutation(H.v)))
        r = int(rng.integers(1, 3))
        lists = ListAssignment.random(Gamma, r, 3, rng)
        enc = build_encoding(H, sigma, Gamma, lists)
        chi = Colouring({e: lists[e][int(rng.integers(r))] for e in G.edges})
        W = colouring_to_vertexset(G, chi, lists.restrict(G))
        assert enc.is_independent(W) == (count_canonical_copies(G, chi, H, sigma) == 0)


def test_colouring_vertex_set_and_copies_agree():
    rng = np.random.default_rng(4)
    H = cycle_graph(4)
    sigma = Ordering((0, 2, 1, 3))
    Gamma = complete_graph(5)
    lists = ListAssignment.random(Gamma, 2, 3, rng)
    enc = build_encoding(H, sigma, Gamma, lists)
    for h in enc.hyperedges:
        # every hyperedge is a copy of H whose chosen colours are canonical
        shadow = graph_shadow(enc, h)
        assert shadow.e == H.e
        chi = Colouring({e: lists[e][s - 1] for e, s in h})
        assert count_canonical_copies(shadow, chi, H, sigma) >= 1
    for _ in range(30):
        chi = Colouring({e: lists[e][int(rng.integers(2))] for e in Gamma.edges})
        W = colouring_to_vertexset(Gamma, chi, lists)
        assert graph_shadow(enc, W).edges == Gamma.edges
        assert enc.is_independent(W) == (count_canonical_copies(Gamma, chi, H, sigma) == 0)


def test_two_colour_triangle_is_abundant_without_slack():
    enc = _encode(K3, K3, (1, 2))
    report = check_abundance(enc, gamma=0.0, epsilon=1 / 8)
    assert report.abundant
    # full-shadow members: a non-empty index set on each of the three edges
    assert report.members_tested == 27
    W = {(e, 1) for e in K3.edges}
    assert enc.induced_edge_count(W) == 1
