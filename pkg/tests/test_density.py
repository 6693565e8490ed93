from fractions import Fraction

import pytest

from canram.density import is_balanced, max_k_density, threshold_scale
from canram.errors import DomainError
from canram.hypergraph import KGraph, complete_graph, cycle_graph, named_graph, path_graph


@pytest.mark.parametrize("m", range(3, 8))
def test_complete_graph_density(m):
    assert max_k_density(complete_graph(m)).value == Fraction(m + 1, 2)


@pytest.mark.parametrize("k", range(2, 6))
def test_even_cycle_density(k):
    assert max_k_density(cycle_graph(2 * k)).value == Fraction(2 * k - 1, 2 * k - 2)


def test_examples():
    assert max_k_density(complete_graph(4)).value == Fraction(5, 2)
    assert max_k_density(cycle_graph(6)).value == Fraction(5, 4)
    assert max_k_density(named_graph("K4^3")).value == 3


def test_witness_reproduces_value():
    # K4 with a pendant path: the K4 is the densest part
    H = KGraph(2, 6, list(complete_graph(4).edges) + [(3, 4), (4, 5)])
    result = max_k_density(H)
    assert result.value == Fraction(5, 2)
    assert result.witness == (0, 1, 2, 3)
    U = result.witness
    assert Fraction(H.induced_edge_count(U) - 1, len(U) - 2) == result.value


def test_ties_take_lexicographically_smallest_subset():
    # every 3-subset of a triangle-free path has density at most 1, as does the whole path
    result = max_k_density(path_graph(4))
    assert result.value == 1
    assert result.witness == (0, 1, 2)


def test_value_at_least_whole_graph_ratio():
    H = KGraph(2, 5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    assert max_k_density(H).value >= Fraction(H.e - 1, H.v - 2)


def test_subgraph_monotonicity():
    assert max_k_density(cycle_graph(4)).value <= max_k_density(complete_graph(4)).value


def test_too_few_edges():
    with pytest.raises(DomainError):
        max_k_density(KGraph(2, 3, [(0, 1)]))


def test_too_few_vertices():
    with pytest.raises(DomainError):
        max_k_density(KGraph(3, 3, [(0, 1, 2)]))


def test_threshold_scale_exponents():
    assert threshold_scale(cycle_graph(4), 27).exponent == Fraction(-2, 3)
    assert threshold_scale(complete_graph(4), 32).exponent == Fraction(-2, 5)
    assert threshold_scale(named_graph("K4^3"), 8).exponent == Fraction(-1, 3)
    assert threshold_scale(cycle_graph(4), 27).value == pytest.approx(1 / 9)


def test_balanced():
    assert is_balanced(complete_graph(4), strict=True)
    assert is_balanced(cycle_graph(6), strict=True)
    # the triangle alone beats the whole graph
    H = KGraph(2, 5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    assert not is_balanced(H)
    # several subsets attain the maximum of a path
    assert is_balanced(path_graph(4))
    assert not is_balanced(path_graph(4), strict=True)
