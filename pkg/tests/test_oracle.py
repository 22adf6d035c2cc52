from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix

from circuitarray.grid import make_all_one_grid, reduce_grid
from circuitarray.oracle import (
    OracleError,
    WeightedGraph,
    bareiss_determinant,
    corner_resistances,
    effective_resistance,
    grid_corners,
    grid_to_graph,
    reduce_with_tails,
)


def _forest_weight(vertices, edges, size):
    """Sum over acyclic edge subsets of the given size of the product of conductances."""
    total = Fraction(0)
    for subset in combinations(edges, size):
        parent = {v: v for v in vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        ok = True
        w = Fraction(1)
        for u, v, r in subset:
            a, b = find(u), find(v)
            if a == b:
                ok = False
                break
            parent[a] = b
            w /= r
        if ok:
            total += w
    return total


def brute_resistance(graph, s, t):
    """Kirchhoff: spanning trees of G with s and t merged over spanning trees of G."""
    verts = list(graph.vertices)
    merged = [(s if u == t else u, s if v == t else v, r) for u, v, r in graph.edges]
    merged = [e for e in merged if e[0] != e[1]]
    trees = _forest_weight(verts, list(graph.edges), len(verts) - 1)
    trees_merged = _forest_weight([v for v in verts if v != t], merged, len(verts) - 2)
    return trees_merged / trees


def path(*rs):
    vs = tuple((k, 0) for k in range(len(rs) + 1))
    return WeightedGraph(vs, tuple((vs[k], vs[k + 1], Fraction(r)) for k, r in enumerate(rs)))


def test_series_and_parallel():
    assert effective_resistance(path(1, 2, 3), (0, 0), (3, 0)) == 6
    a, b = (0, 0), (1, 0)
    g = WeightedGraph((a, b), ((a, b, Fraction(2)), (a, b, Fraction(3))))
    assert effective_resistance(g, a, b) == Fraction(6, 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_sympy(m):
    assert bareiss_determinant(m) == Matrix(m).det()


def test_bareiss_small_cases():
    assert bareiss_determinant([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == 0
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([]) == 1


def test_rejects_bad_graphs():
    a, b, c = (0, 0), (1, 0), (2, 0)
    with pytest.raises(OracleError):
        WeightedGraph((a, b), ((a, b, Fraction(0)),))
    g = WeightedGraph((a, b, c), ((a, b, Fraction(1)),))
    with pytest.raises(OracleError, match="disconnected"):
        effective_resistance(g, a, c)


@pytest.mark.parametrize("n", [2, 3])
def test_laplacian_matches_spanning_tree_enumeration(n):
    graph = grid_to_graph(make_all_one_grid(n))
    top, left, right = grid_corners(n)
    for u, v in ((top, left), (left, right), (top, right)):
        assert effective_resistance(graph, u, v) == brute_resistance(graph, u, v)


def test_reduced_two_grid_enumeration():
    graph = grid_to_graph(reduce_grid(make_all_one_grid(3)))
    _, left, right = grid_corners(2)
    assert effective_resistance(graph, left, right) == brute_resistance(graph, left, right)


def test_two_grid_corner_regression():
    assert corner_resistances(make_all_one_grid(2))[(1, 2)] == Fraction(10, 9)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_reduction_preserves_corner_resistance(n):
    g = make_all_one_grid(n)
    while g.n > 1:
        parent = corner_resistances(g)
        child, tails = reduce_with_tails(g)
        if child.n == 1:
            tri = child.triangle(1, 1)
            # triangle corners: top, bottom-left, bottom-right
            child_r = {
                (0, 1): tri.L * (tri.R + tri.B) / (tri.L + tri.R + tri.B),
                (1, 2): tri.B * (tri.L + tri.R) / (tri.L + tri.R + tri.B),
                (0, 2): tri.R * (tri.L + tri.B) / (tri.L + tri.R + tri.B),
            }
        else:
            child_r = corner_resistances(child)
        for (a, b), value in parent.items():
            assert value == child_r[(a, b)] + tails[a] + tails[b]
        g = child


weights = st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=6)


@settings(max_examples=25, deadline=None)
@given(st.lists(weights, min_size=5, max_size=5))
def test_random_small_graph_against_enumeration(ws):
    # a 4-cycle with one chord
    a, b, c, d = (0, 0), (1, 0), (1, 1), (0, 1)
    edges = ((a, b, ws[0]), (b, c, ws[1]), (c, d, ws[2]), (d, a, ws[3]), (a, c, ws[4]))
    g = WeightedGraph((a, b, c, d), edges)
    for u, v in ((a, b), (a, c), (b, d)):
        assert effective_resistance(g, u, v) == brute_resistance(g, u, v)
