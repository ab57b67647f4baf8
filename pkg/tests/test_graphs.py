import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hamcons.geometry import finite_field, incidence, projective_points, supported_orders
from hamcons.graphs import (
    SimpleGraph,
    closure,
    find_hamilton_cycle,
    hamilton_cycle_dp,
    hamilton_path_dp,
    has_triangle,
    is_hamiltonian,
)

import oracles


def random_graph(rng, n, p):
    return SimpleGraph(range(1, n + 1), [e for e in combinations(range(1, n + 1), 2) if rng.random() < p])


def test_simple_graph_rejects_loops_and_foreign_vertices():
    with pytest.raises(ValueError):
        SimpleGraph([1, 2], [(1, 1)])
    with pytest.raises(ValueError):
        SimpleGraph([1, 2], [(1, 3)])
    g = SimpleGraph([1, 2, 3], [(1, 2), (2, 1)])
    assert len(g.edges) == 1 and g.degree(2) == 1


def test_small_cases():
    assert is_hamiltonian(SimpleGraph.complete(5))
    assert not is_hamiltonian(SimpleGraph(range(1, 5), [(1, 2), (2, 3), (3, 4)]))
    assert hamilton_path_dp(SimpleGraph(range(1, 5), [(1, 2), (2, 3), (3, 4)]))
    assert has_triangle(SimpleGraph.complete(3))
    assert not has_triangle(SimpleGraph(range(1, 5), [(1, 2), (2, 3), (3, 4), (4, 1)]))


def test_hamiltonicity_methods_agree_with_brute_force():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(3, 8)
        g = random_graph(rng, n, rng.uniform(0.3, 0.8))
        truth = oracles.hamiltonian_cycle(g.vertices, g.edges)
        assert hamilton_cycle_dp(g) == truth
        assert is_hamiltonian(g) == truth
        cyc = find_hamilton_cycle(g)
        assert (cyc is not None) == truth
        if cyc:
            assert sorted(cyc) == sorted(g.vertices)
            assert all(g.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n))
        assert hamilton_path_dp(g) == oracles.hamiltonian_path(g.vertices, g.edges)


def test_closure_preserves_hamiltonicity():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(3, 10)
        g = random_graph(rng, n, rng.uniform(0.3, 0.9))
        c = closure(g)
        assert g.edges <= c.edges
        assert hamilton_cycle_dp(c) == hamilton_cycle_dp(g)


def test_closure_of_dense_graph_is_complete():
    g = SimpleGraph.complete(6).without_edges([(1, 2)])
    assert closure(g).edges == SimpleGraph.complete(6).edges


@pytest.mark.parametrize("q", supported_orders())
def test_field_axioms(q):
    f = finite_field(q)
    for a in range(q):
        assert f.add[a][f.neg(a)] == 0
        if a:
            assert f.mul[a][f.inv(a)] == 1
    with pytest.raises(ValueError):
        finite_field(6)


@pytest.mark.parametrize("d,q", [(2, 2), (2, 3), (2, 4), (3, 2), (2, 5)])
def test_projective_space_counts(d, q):
    pts = projective_points(d, q)
    n = (q ** (d + 1) - 1) // (q - 1)
    assert len(pts) == n == len(set(pts))
    inc = incidence(d, q)
    deg = (q ** d - 1) // (q - 1)
    assert all(len(row) == deg for row in inc)
    common = (q ** (d - 1) - 1) // (q - 1)
    for i, j in combinations(range(n), 2):
        assert len(set(inc[i]) & set(inc[j])) == common
