import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ballcover.balls import (BallSystem, all_balls, comparable, format_balls, intersection_graph,
                             make_ball, median_vertex, minimal_indices, minimalize,
                             packing_hypergraph, parse_balls, random_balls)
from ballcover.errors import InputError, PreconditionError
from ballcover.graph import bfs_distances, cycle_graph, path_graph, random_planar_graph
from ballcover.lp import exact_nu, exact_tau

from instances import planar_host, random_system
from oracles import brute_nu, brute_tau, greedy_maximal_matching


def test_make_ball_examples():
    c5 = cycle_graph(5)
    assert make_ball(c5, 0, 1).members == {4, 0, 1}
    assert make_ball(c5, 3, 0).members == {3}
    assert make_ball(c5, 2, 2).members == set(range(5))
    with pytest.raises(InputError):
        make_ball(c5, 5, 1)
    with pytest.raises(InputError):
        make_ball(c5, 0, -1)


@pytest.mark.parametrize("seed", range(15))
def test_make_ball_agrees_with_bfs(seed):
    g = random_planar_graph(4, 5, seed)
    for v in range(g.vertex_count):
        d = bfs_distances(g, v)
        for r in range(4):
            assert make_ball(g, v, r).members == {u for u in range(g.vertex_count) if d[u] <= r}


def test_comparable_examples():
    p3 = path_graph(3)
    assert comparable(make_ball(p3, 1, 0), make_ball(p3, 1, 1))
    assert not comparable(make_ball(p3, 1, 1), make_ball(p3, 1, 1))
    assert not comparable(make_ball(p3, 0, 0), make_ball(p3, 2, 0))


def test_minimalize_examples():
    p3 = path_graph(3)
    assert minimalize(BallSystem.from_pairs(p3, [(1, 0), (1, 1)])).balls == (make_ball(p3, 1, 0),)
    assert len(minimalize(BallSystem.from_pairs(p3, [(0, 1), (0, 1)]))) == 1
    h = BallSystem.from_pairs(p3, [(0, 0), (1, 0), (2, 0)])
    assert minimalize(h).balls == h.balls
    # Equal member sets from different centers dedupe to the lowest index.
    assert minimal_indices(BallSystem.from_pairs(p3, [(0, 5), (2, 3), (1, 1)])) == [0]


@pytest.mark.parametrize("seed", range(40))
def test_minimalize_preserves_nu_and_tau(seed):
    rng = random.Random(seed)
    g = planar_host(rng, 4)
    h = random_balls(g, rng.randint(1, 10), 3, seed)
    m = minimalize(h)
    assert brute_nu(m) == brute_nu(h) == exact_nu(h)[0]
    assert brute_tau(m) == brute_tau(h) == exact_tau(h)[0]
    for a, b in combinations(m.balls, 2):
        assert not comparable(a, b) and a.members != b.members


def test_median_examples():
    p3 = path_graph(3)
    assert median_vertex(p3, make_ball(p3, 0, 1), make_ball(p3, 2, 1)) == 1
    b = make_ball(p3, 1, 1)
    assert median_vertex(p3, b, b) == 1
    p4 = path_graph(4)
    assert median_vertex(p4, make_ball(p4, 0, 2), make_ball(p4, 3, 1)) == 2
    # Argument order does not change the vertex.
    assert median_vertex(p4, make_ball(p4, 3, 1), make_ball(p4, 0, 2)) == 2


def test_median_preconditions():
    p4 = path_graph(4)
    with pytest.raises(PreconditionError):
        median_vertex(p4, make_ball(p4, 0, 0), make_ball(p4, 3, 0))
    with pytest.raises(PreconditionError):
        median_vertex(p4, make_ball(p4, 1, 0), make_ball(p4, 1, 1))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_median_invariants(seed):
    rng = random.Random(seed)
    g = planar_host(rng, 5)
    n = g.vertex_count
    b1 = make_ball(g, rng.randrange(n), rng.randint(0, 4))
    b2 = make_ball(g, rng.randrange(n), rng.randint(0, 4))
    if not b1.intersects(b2) or comparable(b1, b2):
        with pytest.raises(PreconditionError):
            median_vertex(g, b1, b2)
        return
    m = median_vertex(g, b1, b2)
    d = g.distance(b1.center, b2.center)
    d1, d2 = g.distance(b1.center, m), g.distance(b2.center, m)
    assert d1 + d2 == d
    assert d1 <= b1.radius and d2 <= b2.radius
    if b1.members != b2.members:
        assert abs((b1.radius - d1) - (b2.radius - d2)) <= 1
    assert m in b1 and m in b2


def test_intersection_graph_examples():
    c5 = cycle_graph(5)
    ig = intersection_graph(all_balls(c5, 1))
    assert ig.edge_count == 10
    p4 = path_graph(4)
    assert intersection_graph(BallSystem.from_pairs(p4, [(0, 0), (3, 0)])).edge_count == 0
    assert intersection_graph(BallSystem.from_pairs(p4, [(1, 1), (1, 1)])).edge_count == 1


def test_packing_hypergraph_examples():
    p7 = path_graph(7)
    h = BallSystem.from_pairs(p7, [(1, 1), (5, 1), (3, 1)])
    ph = packing_hypergraph(h, [0, 1])
    assert ph.edges == {frozenset({0}): (0,), frozenset({1}): (1,), frozenset({0, 1}): (2,)}
    only = packing_hypergraph(h.subsystem([0, 1]), [0, 1])
    assert set(only.edges) == {frozenset({0}), frozenset({1})}
    with pytest.raises(PreconditionError):
        packing_hypergraph(h, [0, 2])


@pytest.mark.parametrize("seed", range(30))
def test_packing_hypergraph_witnesses(seed):
    rng = random.Random(seed)
    g = planar_host(rng, 5)
    h = random_system(rng, g, 15, 3)
    matching = greedy_maximal_matching(h)
    ph = packing_hypergraph(h, matching)
    witnesses = set()
    for pattern, ws in ph.edges.items():
        for w in ws:
            hit = {p for p, i in enumerate(matching) if h[w].intersects(h[i])}
            assert hit == set(pattern)
            witnesses.add(w)
    touching = {w for w in range(len(h)) if any(h[w].intersects(h[i]) for i in matching)}
    assert witnesses == touching


def test_random_balls_and_text_round_trip():
    g = random_planar_graph(4, 4, 2)
    h = random_balls(g, 10, 3, 9)
    assert h.balls == random_balls(g, 10, 3, 9).balls
    assert parse_balls(g, format_balls(h)).balls == h.balls
    assert len(parse_balls(g, "")) == 0
    with pytest.raises(InputError):
        parse_balls(g, "0\n")
    with pytest.raises(InputError):
        parse_balls(g, "99 1\n")
