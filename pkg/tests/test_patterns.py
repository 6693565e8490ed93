import itertools

import numpy as np
import pytest

from canram.dto import PatternMode
from canram.errors import PartialColouringError, PatternError
from canram.hypergraph import Colouring, KGraph, Ordering, complete_graph, cycle_graph, path_graph, star_graph
from canram.patterns import (
    PatternClassifier,
    all_position_sets,
    canonical_colouring,
    classify_pattern,
    count_distinct_canonical_copies,
    enumerate_canonical_copies,
    lexicographic_colour_count,
    project,
)

K3 = complete_graph(3)


def _lexicographic(H, sigma, colours, by_max=False):
    """Direct check that chi(uv) = c(min_sigma(u, v)) for some injective vertex colouring c."""
    rank = sigma.rank
    c = {}
    for h, colour in zip(H.edges, colours):
        key = max(h, key=lambda w: rank[w]) if by_max else min(h, key=lambda w: rank[w])
        if c.setdefault(key, colour) != colour:
            return False
    return len(set(c.values())) == len(c)


def test_projection_identities():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(k, 9))
        sigma = Ordering(tuple(int(v) for v in rng.permutation(n)))
        T = tuple(int(v) for v in rng.choice(n, size=k, replace=False))
        assert project(T, (), sigma) == ()
        assert set(project(T, tuple(range(1, k + 1)), sigma)) == set(T)


def test_projection_example():
    assert project((5, 2, 9), (1, 3), Ordering.natural(10)) == (2, 9)


def test_projection_respects_ordering():
    sigma = Ordering((9, 5, 2) + tuple(v for v in range(10) if v not in (9, 5, 2)))
    assert project((5, 2, 9), (1,), sigma) == (9,)


def test_projection_position_out_of_range():
    with pytest.raises(PatternError):
        project((0, 1), (3,), Ordering.natural(2))


def test_uniformity_cap():
    assert len(all_position_sets(3)) == 8
    with pytest.raises(PatternError):
        all_position_sets(9)


def test_monochromatic_triangle():
    chi = Colouring({e: 4 for e in K3.edges})
    assert () in classify_pattern(K3, Ordering.natural(3), chi).witnessing_sets


def test_rainbow_triangle():
    chi = Colouring({(0, 1): 1, (0, 2): 2, (1, 2): 3})
    assert classify_pattern(K3, Ordering.natural(3), chi).witnessing_sets == ((1, 2),)


def test_lexicographic_triangle():
    chi = Colouring({(0, 1): 1, (0, 2): 1, (1, 2): 2})
    witness = classify_pattern(K3, Ordering.natural(3), chi)
    assert witness.witnessing_sets == ((1,),)
    assert witness.maps[(1,)] == {(0,): 1, (1,): 2}


def test_partial_colouring_rejected():
    with pytest.raises(PartialColouringError):
        classify_pattern(K3, Ordering.natural(3), Colouring({(0, 1): 1}))


@pytest.mark.parametrize(
    "H",
    [K3, path_graph(4), cycle_graph(4), star_graph(3), cycle_graph(5),
     KGraph(2, 4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])],
)
def test_classifier_agrees_with_direct_checks(H):
    for perm in itertools.permutations(range(H.v)):
        sigma = Ordering(perm)
        classifier = PatternClassifier(H, sigma)
        for colours in itertools.product((1, 2, 3), repeat=H.e):
            sets = classifier.witnessing_sets(colours)
            assert ((1,) in sets) == _lexicographic(H, sigma, colours)
            assert ((2,) in sets) == _lexicographic(H, sigma, colours, by_max=True)
            assert (() in sets) == (len(set(colours)) == 1)
            assert ((1, 2) in sets) == (len(set(colours)) == H.e)
        if H.v > 4:
            # one ordering is enough for the larger graphs
            break


def test_reverse_ordering_swaps_one_and_two():
    chi = Colouring({(0, 1): 5, (0, 2): 5, (1, 2): 6})
    sigma = Ordering.natural(3)
    forward = classify_pattern(K3, sigma, chi)
    backward = classify_pattern(K3, sigma.reversed(), chi)
    assert ((1,) in forward.witnessing_sets) == ((2,) in backward.witnessing_sets)


def test_invariant_under_colour_relabelling():
    H = cycle_graph(4)
    sigma = Ordering((1, 3, 0, 2))
    relabel = {1: 40, 2: 7, 3: 19}
    for colours in itertools.product((1, 2, 3), repeat=H.e):
        a = classify_pattern(H, sigma, Colouring(dict(zip(H.edges, colours))))
        b = classify_pattern(H, sigma, Colouring(dict(zip(H.edges, (relabel[c] for c in colours)))))
        assert a.witnessing_sets == b.witnessing_sets


def test_monochromatic_k4_has_four_canonical_triangles():
    G = complete_graph(4)
    chi = Colouring({e: 1 for e in G.edges})
    assert count_distinct_canonical_copies(K3, Ordering.natural(3), G, chi) == 4


def test_triangle_free_host_has_no_canonical_triangles():
    G = cycle_graph(5)
    chi = Colouring({e: 1 for e in G.edges})
    assert list(enumerate_canonical_copies(K3, Ordering.natural(3), G, chi)) == []


def test_existential_and_strict_readings_differ():
    # colours (1, 2, 1) on (ab, ac, bc): canonical only under an embedding sending H's first vertex to b
    chi = Colouring({(0, 1): 1, (0, 2): 2, (1, 2): 1})
    sigma = Ordering.natural(3)
    assert count_distinct_canonical_copies(K3, sigma, K3, chi, PatternMode.EXISTS) == 1
    assert count_distinct_canonical_copies(K3, sigma, K3, chi, PatternMode.STRICT) == 0
    witnesses = [w for _, w in enumerate_canonical_copies(K3, sigma, K3, chi)]
    assert witnesses and all(w.canonical for w in witnesses)


@pytest.mark.parametrize("S", [(), (1,), (2,), (1, 2)])
def test_canonical_colouring_makes_every_copy_canonical(S):
    G = complete_graph(5)
    chi = canonical_colouring(G, Ordering.natural(5), S)
    assert count_distinct_canonical_copies(K3, Ordering.natural(3), G, chi) == 10


def test_canonical_colouring_colour_counts():
    G = complete_graph(5)
    tau = Ordering.natural(5)
    assert len(set(canonical_colouring(G, tau, ()).assignment.values())) == 1
    assert len(set(canonical_colouring(G, tau, (1,)).assignment.values())) == 4
    assert len(set(canonical_colouring(G, tau, (1, 2)).assignment.values())) == 10


def test_lexicographic_colour_count():
    assert lexicographic_colour_count(K3, Ordering.natural(3)) == 2
    assert lexicographic_colour_count(path_graph(4), Ordering.natural(4)) == 3
    assert lexicographic_colour_count(star_graph(3), Ordering.natural(4)) == 1
