import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ballcover.errors import InputError, NoPathError
from ballcover.graph import (UNREACHABLE, Graph, bfs_distances, cycle_graph,
                             format_graph, gen_broom_counterexample, gen_family, grid_graph,
                             king_grid_graph, lex_min_shortest_path, parse_graph, path_graph,
                             random_king_subgraph, random_planar_graph, random_tree, subdivide)

from oracles import all_shortest_paths


def test_bfs_examples():
    assert bfs_distances(cycle_graph(5), 0) == [0, 1, 2, 2, 1]
    assert bfs_distances(Graph.from_edges(1, []), 0) == [0]
    assert bfs_distances(king_grid_graph(3, 3), 0)[8] == 2


def test_bfs_unreachable_and_range():
    g = Graph.from_edges(3, [(0, 1)])
    assert bfs_distances(g, 0)[2] is UNREACHABLE
    with pytest.raises(InputError):
        bfs_distances(g, 3)


def test_king_grid_is_chebyshev():
    g = king_grid_graph(4, 5)
    for u in range(20):
        d = bfs_distances(g, u)
        for v in range(20):
            assert d[v] == max(abs(u // 5 - v // 5), abs(u % 5 - v % 5))


def test_lex_path_examples():
    assert lex_min_shortest_path(path_graph(3), 0, 2) == [0, 1, 2]
    diamond = Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert lex_min_shortest_path(diamond, 0, 3) == [0, 1, 3]
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert lex_min_shortest_path(c4, 0, 2) == [0, 1, 2]
    assert lex_min_shortest_path(c4, 2, 2) == [2]


def test_lex_path_disconnected():
    with pytest.raises(NoPathError):
        lex_min_shortest_path(Graph.from_edges(2, []), 0, 1)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 9))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


@settings(max_examples=200, deadline=None)
@given(small_graphs(), st.data())
def test_lex_path_matches_exhaustive_minimum(g, data):
    s = data.draw(st.integers(0, g.vertex_count - 1))
    x = data.draw(st.integers(0, g.vertex_count - 1))
    d = bfs_distances(g, s)
    if d[x] is None:
        with pytest.raises(NoPathError):
            lex_min_shortest_path(g, s, x)
        return
    path = lex_min_shortest_path(g, s, x)
    assert len(path) == d[x] + 1
    assert all(g.has_edge(a, b) for a, b in zip(path, path[1:]))
    assert path == min(all_shortest_paths(g, s, x))


def test_family_examples():
    p = gen_family("path", n=3)
    assert (p.vertex_count, p.edge_count) == (3, 2)
    k = gen_family("king_grid", rows=2, cols=2)
    assert (k.vertex_count, k.edge_count) == (4, 6)
    g = gen_family("grid", rows=3, cols=3)
    assert (g.vertex_count, g.edge_count) == (9, 12)
    with pytest.raises(InputError):
        gen_family("grid", rows=0, cols=3)
    with pytest.raises(InputError):
        gen_family("hexagon", n=3)


@pytest.mark.parametrize("seed", range(20))
def test_random_families_structural(seed):
    for g in (random_king_subgraph(4, 5, seed), random_planar_graph(5, 4, seed),
              random_tree(17, seed), subdivide(grid_graph(3, 3), 2)):
        for v in range(g.vertex_count):
            nbrs = g.adjacency[v]
            assert v not in nbrs
            assert list(nbrs) == sorted(set(nbrs))
            assert all(g.has_edge(u, v) for u in nbrs)
        assert g.is_connected()
    assert random_planar_graph(5, 4, seed) == random_planar_graph(5, 4, seed)


def test_king_subgraph_edges_are_king_moves():
    full = king_grid_graph(5, 5)
    sub = random_king_subgraph(5, 5, 3)
    assert all(full.has_edge(u, v) for u, v in sub.edges())


def test_graph_rejects_bad_adjacency():
    with pytest.raises(InputError):
        Graph(2, ((1,), ()))
    with pytest.raises(InputError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(InputError):
        Graph.from_edges(2, [(0, 1), (1, 0)])


def test_text_round_trip():
    g = random_planar_graph(4, 4, 7)
    assert parse_graph(format_graph(g)) == g
    with pytest.raises(InputError):
        parse_graph("3 2\n0 1\n")
    with pytest.raises(InputError):
        parse_graph("3 1\n0 x\n")


def _check_broom(inst):
    g, ell = inst.graph, inst.ell
    assert len(inst.roots) == inst.k
    assert len(inst.junctions) == inst.k * (inst.k - 1) // 2
    ys = set(inst.junctions.values())
    assert all(g.degree(v) <= 3 for v in range(g.vertex_count) if v not in ys)
    for (i, j), y in inst.junctions.items():
        di = bfs_distances(g, inst.roots[i])
        dj = bfs_distances(g, inst.roots[j])
        assert di[y] == ell == dj[y]
        assert [v for v in range(g.vertex_count) if di[v] <= ell and dj[v] <= ell] == [y]
    # Degree-3 vertices inside one broom are at least `spacing` apart.
    for i, root in enumerate(inst.roots):
        d = bfs_distances(g, root)
        branch = [v for v in range(g.vertex_count)
                  if g.degree(v) == 3 and v not in ys and d[v] < ell
                  and all(bfs_distances(g, r)[v] > d[v] for r in inst.roots if r != root)]
        for a, b in combinations(branch, 2):
            assert g.distance(a, b) >= inst.spacing


def test_broom_examples():
    inst = gen_broom_counterexample(3, 4, 1)
    assert inst.graph.vertex_count == 18
    _check_broom(inst)
    inst = gen_broom_counterexample(4, 10, 1)
    ys = [inst.junctions[p] for p in sorted(inst.junctions)]
    assert len(ys) == 6
    assert inst.graph.distance(ys[0], ys[-1]) == 5
    for i, root in enumerate(inst.roots):
        assert inst.graph.degree(root) == 1
        leaves = [y for (a, b), y in inst.junctions.items() if i in (a, b)]
        assert [inst.graph.distance(root, y) for y in leaves] == [10] * 3
    _check_broom(inst)
    with pytest.raises(InputError):
        gen_broom_counterexample(3, 5)


@pytest.mark.parametrize("k,ell,spacing", [(3, 8, 2), (4, 20, 3), (5, 18, 1), (6, 28, 1)])
def test_broom_invariants(k, ell, spacing):
    _check_broom(gen_broom_counterexample(k, ell, spacing))


def test_broom_rejects_tight_spacing():
    with pytest.raises(InputError):
        gen_broom_counterexample(4, 10, 5)
    with pytest.raises(InputError):
        gen_broom_counterexample(2, 4)


def test_random_generators_deterministic():
    rng = random.Random(1)
    seed = rng.getrandbits(32)
    assert random_tree(30, seed) == random_tree(30, seed)
    assert random_king_subgraph(3, 6, seed) == random_king_subgraph(3, 6, seed)
