import random
import statistics
from fractions import Fraction
from itertools import combinations, product

import pytest

from ballcover.balls import BallSystem, PackingHypergraph, packing_hypergraph
from ballcover.bounds import E_UPPER, floor_e_times
from ballcover.errors import DensityWitnessError, EmptyError, InputError, PreconditionError
from ballcover.graph import complete_graph, cycle_graph, path_graph, random_planar_graph, random_tree
from ballcover.sparsify import (MultiHypergraph, brute_force_small_packing_edges,
                                degeneracy_ordering, enumerate_small_packing_edges,
                                incident_pairs, sparsify_derandomized, sparsify_random)

from instances import random_system
from oracles import brute_packing_edges, greedy_maximal_matching, naive_conditional_walk


def random_multihypergraph(rng, n_max=30, rank_max=5):
    n = rng.randint(3, n_max)
    rank = rng.randint(2, min(rank_max, n))
    edges = [frozenset(rng.sample(range(n), rng.randint(2, rank))) for _ in range(rng.randint(1, 2 * n))]
    mh = MultiHypergraph(n, tuple(edges))
    pairs = incident_pairs(edges)
    if rng.random() < 0.5:
        pairs = dict(rng.sample(sorted(pairs.items()), max(1, len(pairs) // 2)))
    return mh, pairs, rank


def check_kept(mh, pairs, result):
    chosen = set(result.selected)
    for (u, v), w in result.pairs.items():
        assert pairs[(u, v)] == w
        assert mh.edges[w] & chosen == {u, v}
    for (u, v), w in pairs.items():
        if u in chosen and v in chosen and mh.edges[w] & chosen == {u, v}:
            assert (u, v) in result.pairs


def test_sparsify_random_examples():
    mh = MultiHypergraph(4, (frozenset({0, 1}),))
    assert sparsify_random(mh, {}, 2, 0).pairs == {}
    for seed in range(40):
        out = sparsify_random(mh, {(0, 1): 0}, 2, seed)
        assert (out.pairs == {(0, 1): 0}) == ({0, 1} <= set(out.selected))
    with pytest.raises(PreconditionError):
        sparsify_random(MultiHypergraph(4, (frozenset({0, 1, 2}),)), {}, 2, 0)


@pytest.mark.parametrize("seed", range(30))
def test_sparsify_random_rule(seed):
    rng = random.Random(seed)
    mh, pairs, rank = random_multihypergraph(rng, 12, 3)
    k = max(rank, 2)
    out = sparsify_random(mh, pairs, k, seed)
    selection = random.Random(seed)
    assert set(out.selected) == {v for v in range(mh.vertex_count) if selection.randrange(k) == 0}
    check_kept(mh, pairs, out)
    assert out == sparsify_random(mh, pairs, k, seed)


def test_sparsify_random_statistics():
    rng = random.Random(5)
    n, k = 20, 3
    edges = [frozenset(rng.sample(range(n), rng.randint(2, 3))) for _ in range(40)]
    mh = MultiHypergraph(n, tuple(edges))
    pairs = incident_pairs(edges)
    sizes, kept = [], []
    for seed in range(10_000):
        out = sparsify_random(mh, pairs, k, seed)
        sizes.append(len(out.selected))
        kept.append(len(out.pairs))
    se_v = statistics.stdev(sizes) / len(sizes) ** 0.5
    se_e = statistics.stdev(kept) / len(kept) ** 0.5
    assert abs(statistics.mean(sizes) - n / k) <= 5 * se_v
    assert statistics.mean(kept) >= len(pairs) / (float(E_UPPER) * k * k) - 5 * se_e


def test_derandomized_examples():
    mh = MultiHypergraph(2, (frozenset({0, 1}),))
    out = sparsify_derandomized(mh, {(0, 1): 0}, 2)
    assert out.selected == (0, 1) and out.average_degree() == 1
    k4 = list(combinations(range(4), 2))
    mh = MultiHypergraph(4, tuple(frozenset(p) for p in k4))
    out = sparsify_derandomized(mh, {p: i for i, p in enumerate(k4)}, 2)
    assert out.selected == (0, 1, 2, 3) and len(out.pairs) == 6 and out.average_degree() == 3
    with pytest.raises(EmptyError):
        sparsify_derandomized(mh, {}, 2)
    with pytest.raises(InputError):
        sparsify_derandomized(mh, {(0, 1): 1}, 2)


def _objective(mh, pairs, chosen, lam):
    kept = sum(1 for (u, v), w in pairs.items()
               if u in chosen and v in chosen and mh.edges[w] & chosen == {u, v})
    return 2 * kept - lam * len(chosen)


def test_derandomized_rank3_six_vertices_exhaustive():
    edges = (frozenset({0, 1, 2}), frozenset({2, 3, 4}), frozenset({4, 5, 0}),
             frozenset({1, 3, 5}), frozenset({0, 3}))
    mh = MultiHypergraph(6, edges)
    pairs = incident_pairs(edges)
    k = 3
    lam = Fraction(2 * len(pairs)) / (6 * E_UPPER * k)
    out = sparsify_derandomized(mh, pairs, k)
    check_kept(mh, pairs, out)
    assert _objective(mh, pairs, set(out.selected), lam) > 0
    # The exact expectation over all 2^6 weighted selections is positive.
    p = Fraction(1, k)
    expect = Fraction(0)
    for bits in product((0, 1), repeat=6):
        chosen = {v for v in range(6) if bits[v]}
        weight = p ** len(chosen) * (1 - p) ** (6 - len(chosen))
        expect += weight * _objective(mh, pairs, chosen, lam)
    assert expect > 0


@pytest.mark.parametrize("seed", range(60))
def test_derandomized_guarantee(seed):
    rng = random.Random(1000 + seed)
    mh, pairs, rank = random_multihypergraph(rng)
    k = max(rank, 2)
    out = sparsify_derandomized(mh, pairs, k)
    check_kept(mh, pairs, out)
    assert out.average_degree() >= Fraction(2 * len(pairs)) / (mh.vertex_count * E_UPPER * k)


@pytest.mark.parametrize("seed", range(25))
def test_derandomized_matches_naive_walk(seed):
    rng = random.Random(5000 + seed)
    mh, pairs, rank = random_multihypergraph(rng, 14, 4)
    k = max(rank, 2)
    lam = Fraction(2 * len(pairs)) / (mh.vertex_count * E_UPPER * k)
    assert sparsify_derandomized(mh, pairs, k).selected == naive_conditional_walk(mh, pairs, k, lam)


def test_degeneracy_examples():
    assert degeneracy_ordering(random_tree(12, 4))[1] == 1
    assert degeneracy_ordering(complete_graph(4))[1] == 3
    order, deg = degeneracy_ordering(cycle_graph(5))
    assert deg == 2 and sorted(order) == list(range(5))


def test_enumeration_examples():
    p7 = path_graph(7)
    h = BallSystem.from_pairs(p7, [(1, 1), (5, 1)])
    res = enumerate_small_packing_edges(packing_hypergraph(h, [0, 1]), 2, 6)
    assert [set(e) for e, _ in res.edges] == [{0}, {1}]
    h = BallSystem.from_pairs(p7, [(1, 1), (5, 1), (3, 1)])
    res = enumerate_small_packing_edges(packing_hypergraph(h, [0, 1]), 2, 6)
    assert [(set(e), w) for e, w in res.edges] == [({0}, (0,)), ({1}, (1,)), ({0, 1}, (2,))]
    with pytest.raises(PreconditionError):
        enumerate_small_packing_edges(packing_hypergraph(h, [0, 1]), 1, 6)


@pytest.mark.parametrize("seed", range(40))
def test_enumeration_equals_brute_force(seed):
    rng = random.Random(seed)
    g = random_planar_graph(rng.randint(3, 6), rng.randint(3, 6), seed)
    h = random_system(rng, g, 25, 3)
    matching = greedy_maximal_matching(h)
    ph = packing_hypergraph(h, matching)
    k = rng.choice([2, 3, 9])
    res = enumerate_small_packing_edges(ph, k, 6)
    assert dict(res.edges) == brute_packing_edges(h, matching, k)
    assert res.edges == brute_force_small_packing_edges(ph, k)
    assert res.degeneracy <= res.degeneracy_limit == floor_e_times(6 * k)
    assert res.cliques_enumerated <= (1 + res.degeneracy_limit) ** (k - 1) * len(matching)


def test_enumeration_density_witness():
    # d=1, k=2 allows degeneracy floor(2e) = 5; a K7 of pair edges exceeds it.
    g = complete_graph(8)
    h = BallSystem.from_pairs(g, [(v, 0) for v in range(7)] + [(7, 1)])
    edges = {frozenset({i}): (i,) for i in range(7)}
    edges.update({frozenset(p): (7,) for p in combinations(range(7), 2)})
    ph = PackingHypergraph(h, list(range(7)), edges)
    with pytest.raises(DensityWitnessError) as exc:
        enumerate_small_packing_edges(ph, 2, 1)
    core = exc.value.graph
    assert core.vertex_count == 7
    assert min(core.degree(v) for v in range(7)) > floor_e_times(2)
