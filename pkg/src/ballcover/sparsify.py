"""Sparsification of witnessed pair sets and small packing-edge enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .balls import PackingHypergraph
from .bounds import E_UPPER, floor_e_times
from .errors import DensityWitnessError, EmptyError, InputError, PreconditionError
from .graph import Graph

Pair = tuple[int, int]


@dataclass(frozen=True)
class MultiHypergraph:
    """Hypergraph on ``0 .. vertex_count-1`` whose edge list may repeat sets."""

    vertex_count: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        for e in self.edges:
            if any(not 0 <= v < self.vertex_count for v in e):
                raise InputError("edge vertex out of range")

    @property
    def rank(self) -> int:
        return max((len(e) for e in self.edges), default=0)


def witnessed_pairs(mh: MultiHypergraph, pairs: Mapping[Pair, int]) -> dict[Pair, int]:
    """Normalize ``pairs`` to ``(min, max)`` keys and validate the witnesses."""
    out: dict[Pair, int] = {}
    for (u, v), w in pairs.items():
        if u == v:
            raise InputError(f"pair {u},{v} is not a pair")
        key = (min(u, v), max(u, v))
        if not 0 <= w < len(mh.edges) or u not in mh.edges[w] or v not in mh.edges[w]:
            raise InputError(f"edge {w} does not witness pair {key}")
        out[key] = w
    return out


@dataclass(frozen=True)
class SparseGraph:
    """Selected vertices plus the kept pairs, each with its witness edge."""

    selected: tuple[int, ...]
    pairs: dict[Pair, int]

    def graph(self) -> Graph:
        """The kept graph relabelled by position in ``selected``."""
        index = {v: i for i, v in enumerate(self.selected)}
        return Graph.from_edges(len(self.selected), ((index[u], index[v]) for u, v in self.pairs))

    def average_degree(self) -> Fraction:
        if not self.selected:
            return Fraction(0)
        return Fraction(2 * len(self.pairs), len(self.selected))


def _kept_pairs(mh: MultiHypergraph, pairs: dict[Pair, int], chosen: set[int]) -> dict[Pair, int]:
    kept = {}
    for (u, v), w in pairs.items():
        if u in chosen and v in chosen and all(x in (u, v) or x not in chosen for x in mh.edges[w]):
            kept[(u, v)] = w
    return kept


def _check_rank(mh: MultiHypergraph, k: int) -> None:
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if mh.rank > k:
        raise PreconditionError(f"rank {mh.rank} exceeds k={k}")


def sparsify_random(mh: MultiHypergraph, pairs: Mapping[Pair, int], k: int,
                    seed: int) -> SparseGraph:
    """Keep each vertex with probability ``1/k``; keep pairs isolated in their witness."""
    _check_rank(mh, k)
    pairs = witnessed_pairs(mh, pairs)
    rng = random.Random(seed)
    chosen = {v for v in range(mh.vertex_count) if rng.randrange(k) == 0}
    return SparseGraph(tuple(sorted(chosen)), _kept_pairs(mh, pairs, chosen))


def sparsify_derandomized(mh: MultiHypergraph, pairs: Mapping[Pair, int], k: int) -> SparseGraph:
    """Deterministic sparsification by conditional expectations.

    The potential is ``2 |E(H)| - lam |V(H)|`` with
    ``lam = 2 |E| / (n * E_UPPER * k)``; its expectation under independent
    ``1/k`` selection is positive, and vertices are fixed in identifier
    order to the branch that does not decrease the conditional expectation
    (ties go to inclusion).  The final selection therefore has positive
    potential, so ``ad(H) >= lam``.
    """
    _check_rank(mh, k)
    pairs = witnessed_pairs(mh, pairs)
    if not pairs:
        raise EmptyError("no pairs to sparsify")
    n = mh.vertex_count
    lam = Fraction(2 * len(pairs), 1) / (n * E_UPPER * k)
    p = Fraction(1, k)
    prob = [p] * n
    # Each pair's term is 2 * p_u * p_v * prod(1 - p_x over the rest of its witness).
    # Per witness edge we keep the product of its nonzero factors (1 - p_x) and
    # the number of vertices already fixed to 1 (whose factor is zero).
    pair_list = list(pairs.items())
    used_edges = sorted({w for _, w in pair_list})
    nonzero = {w: (1 - p) ** len(mh.edges[w]) for w in used_edges}
    fixed_in = {w: 0 for w in used_edges}
    pairs_of_vertex: list[list[int]] = [[] for _ in range(n)]
    edges_of_vertex: list[list[int]] = [[] for _ in range(n)]
    for idx, (_, w) in enumerate(pair_list):
        for x in mh.edges[w]:
            pairs_of_vertex[x].append(idx)
    for w in used_edges:
        for x in mh.edges[w]:
            edges_of_vertex[x].append(w)

    def term(idx: int) -> Fraction:
        (u, v), w = pair_list[idx]
        zeros = fixed_in[w] - (prob[u] == 1) - (prob[v] == 1)
        if zeros or not prob[u] or not prob[v]:
            return Fraction(0)
        rest = nonzero[w]
        for x in (u, v):
            if prob[x] != 1:
                rest /= 1 - prob[x]
        return 2 * prob[u] * prob[v] * rest

    def assign(v: int, value: Fraction) -> None:
        old = prob[v]
        for w in edges_of_vertex[v]:
            if old == 1:
                fixed_in[w] -= 1
            else:
                nonzero[w] /= 1 - old
            if value == 1:
                fixed_in[w] += 1
            else:
                nonzero[w] *= 1 - value
        prob[v] = value

    for v in range(n):
        contrib = {}
        for val in (Fraction(1), Fraction(0)):
            assign(v, val)
            contrib[val] = sum((term(i) for i in pairs_of_vertex[v]), Fraction(0)) - lam * val
        assign(v, Fraction(1) if contrib[Fraction(1)] >= contrib[Fraction(0)] else Fraction(0))
    chosen = {v for v in range(n) if prob[v] == 1}
    result = SparseGraph(tuple(sorted(chosen)), _kept_pairs(mh, pairs, chosen))
    if 2 * len(result.pairs) - lam * len(result.selected) <= 0:
        raise AssertionError("conditional expectation walk ended at a nonpositive leaf")
    return result


def degeneracy_ordering(g: Graph) -> tuple[list[int], int]:
    """Repeated minimum-degree removal (lowest identifier on ties)."""
    n = g.vertex_count
    deg = [g.degree(v) for v in range(n)]
    buckets: list[set[int]] = [set() for _ in range(max(deg, default=0) + 1)]
    for v, d in enumerate(deg):
        buckets[d].add(v)
    removed = [False] * n
    order = []
    degeneracy = 0
    low = 0
    for _ in range(n):
        low = max(low - 1, 0)
        while not buckets[low]:
            low += 1
        v = min(buckets[low])
        buckets[low].discard(v)
        removed[v] = True
        order.append(v)
        degeneracy = max(degeneracy, low)
        for u in g.adjacency[v]:
            if not removed[u]:
                buckets[deg[u]].discard(u)
                deg[u] -= 1
                buckets[deg[u]].add(u)
    return order, degeneracy


@dataclass(frozen=True)
class SmallPackingEdges:
    """Packing edges of cardinality at most ``k`` plus enumeration statistics."""

    edges: list[tuple[frozenset[int], tuple[int, ...]]]
    cliques_enumerated: int
    degeneracy: int
    degeneracy_limit: int


def enumerate_small_packing_edges(ph: PackingHypergraph, k: int, d: Fraction | int
                                  ) -> SmallPackingEdges:
    """All packing edges with at most ``k`` matching balls, via degeneracy.

    Builds the auxiliary graph on the matching (two balls adjacent iff some
    small packing edge holds both), orients it along a degeneracy ordering,
    and lists every clique of size ``<= k`` from its earliest vertex.  Each
    clique that occurs as a packing edge is reported.  A degeneracy above
    ``floor(d * e * k)`` contradicts the declared density and raises
    ``DensityWitnessError`` carrying the offending core.
    """
    if k < 2:
        raise PreconditionError("k must be at least 2")
    d = Fraction(d)
    if d < 1:
        raise PreconditionError("d must be at least 1")
    size = len(ph.matching)
    aux_edges = set()
    for pattern in ph.edges:
        if len(pattern) <= k:
            for a, b in combinations(sorted(pattern), 2):
                aux_edges.add((a, b))
    aux = Graph.from_edges(size, sorted(aux_edges))
    order, degeneracy = degeneracy_ordering(aux)
    limit = floor_e_times(d * k)
    if degeneracy > limit:
        core = _core_above(aux, limit)
        raise DensityWitnessError(
            f"auxiliary graph degeneracy {degeneracy} exceeds floor(d*e*k) = {limit}",
            graph=aux.induced(core), vertices=[ph.matching[i] for i in core])
    position = {v: i for i, v in enumerate(order)}
    later = [[u for u in aux.adjacency[v] if position[u] > position[v]] for v in range(size)]

    found: list[tuple[frozenset[int], tuple[int, ...]]] = []
    count = 0

    def extend(clique: list[int], cands: list[int]) -> None:
        nonlocal count
        count += 1
        key = frozenset(clique)
        if key in ph.edges:
            found.append((key, ph.edges[key]))
        if len(clique) == k:
            return
        for i, u in enumerate(cands):
            nxt = [w for w in cands[i + 1:] if aux.has_edge(u, w)]
            clique.append(u)
            extend(clique, nxt)
            clique.pop()

    for v in order:
        extend([v], sorted(later[v], key=position.__getitem__))
    found.sort(key=lambda kv: (len(kv[0]), sorted(kv[0])))
    return SmallPackingEdges(found, count, degeneracy, limit)


def brute_force_small_packing_edges(ph: PackingHypergraph, k: int
                                    ) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Reference enumeration: rescan every ball's intersection pattern."""
    masks = [ph.system.balls[i].mask for i in ph.matching]
    found: dict[frozenset[int], list[int]] = {}
    for idx, b in enumerate(ph.system.balls):
        pattern = frozenset(p for p, m in enumerate(masks) if b.mask & m)
        if pattern and len(pattern) <= k:
            found.setdefault(pattern, []).append(idx)
    return sorted(((p, tuple(v)) for p, v in found.items()), key=lambda kv: (len(kv[0]), sorted(kv[0])))


def _core_above(g: Graph, limit: int) -> list[int]:
    """Vertices of the subgraph whose minimum degree exceeds ``limit``."""
    alive = set(range(g.vertex_count))
    deg = {v: g.degree(v) for v in alive}
    stack = [v for v in alive if deg[v] <= limit]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in g.adjacency[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] == limit:
                    stack.append(u)
    return sorted(alive)


def incident_pairs(edges: Sequence[frozenset[int]]) -> dict[Pair, int]:
    """Witness every pair co-contained in some edge by its first such edge."""
    pairs: dict[Pair, int] = {}
    for w, e in enumerate(edges):
        for u, v in combinations(sorted(e), 2):
            pairs.setdefault((u, v), w)
    return pairs
