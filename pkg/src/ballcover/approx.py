"""Approximation algorithms: rounding fractional matchings and building transversals."""

from __future__ import annotations

import heapq
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from math import ceil, lcm
from typing import Callable

from mpmath import iv

from .balls import BallSystem, median_vertex, minimal_indices, packing_hypergraph
from .bounds import exact_ceil, exceeds_e_times, ivq, upper_bound
from .errors import BudgetError, DensityWitnessError, InputError, PreconditionError
from .graph import Graph
from .lp import (DEFAULT_BUDGET, MATCHING, TRANSVERSAL, FractionalSolution, exact_nu,
                 floor_scale_weights, solve_nu_star, solve_tau_star)
from .minors import average_degree, minor_from_medians
from .sparsify import MultiHypergraph, enumerate_small_packing_edges, sparsify_derandomized


@dataclass(frozen=True)
class DensityProfile:
    """Declared density ``d`` of every minor of the host, and excluded clique ``K_t``."""

    d: Fraction
    t: int

    def __post_init__(self):
        object.__setattr__(self, "d", Fraction(self.d))
        if self.d < 1:
            raise InputError("d must be at least 1")
        if self.t < 2:
            raise InputError("t must be at least 2")

    @property
    def vc_bound(self) -> int:
        return self.t - 1


PLANAR = DensityProfile(Fraction(6), 5)


def caro_wei_independent_set(g: Graph) -> list[int]:
    """Greedy independent set: take a minimum-degree vertex, delete its closed neighborhood.

    The result has at least ``n / (ad(g) + 1)`` vertices.
    """
    n = g.vertex_count
    deg = [g.degree(v) for v in range(n)]
    alive = [True] * n
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    chosen = []
    while heap:
        dv, v = heapq.heappop(heap)
        if not alive[v] or dv != deg[v]:
            continue
        chosen.append(v)
        gone = [v] + [u for u in g.adjacency[v] if alive[u]]
        for u in gone:
            alive[u] = False
        for u in gone:
            for w in g.adjacency[u]:
                if alive[w]:
                    deg[w] -= 1
                    heapq.heappush(heap, (deg[w], w))
    return sorted(chosen)


# ---------------------------------------------------------------------------
# Rounding a fractional matching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rounding:
    """Matching obtained by rounding, with the multiset sizes behind its guarantee.

    ``p`` balls (with multiplicity) were rounded, every vertex lies in at most
    ``q`` of them, and ``len(matching) >= ceil(p / (e*d*q + 1))``.
    """

    matching: list[int]
    p: int
    q: int
    average_degree: Fraction


def _multiset(h: BallSystem, w: FractionalSolution) -> tuple[list[int], int]:
    scaled = floor_scale_weights(w, len(h))
    q = lcm(*(x.denominator for x in scaled.weights if x)) if any(scaled.weights) else 1
    nodes = []
    for i, x in enumerate(scaled.weights):
        nodes.extend([i] * int(x * q))
    return nodes, q


def round_fractional_matching(h: BallSystem, w: FractionalSolution,
                              profile: DensityProfile = PLANAR) -> Rounding:
    """Round a feasible fractional matching of a minimal ball system.

    Weights are floored to multiples of ``1/len(h)``, expanded into a ball
    multiset of ``p`` balls with vertex load at most ``q``, and a Caro-Wei
    independent set of the multiset's intersection graph is returned as
    distinct ball indices.  If that intersection graph has average degree
    above ``e*d*q`` the host violates the declared density; a
    ``DensityWitnessError`` carrying an explicit dense minor is raised.
    """
    if w.side != MATCHING or w.violations(h):
        raise InputError("w is not a feasible fractional matching of h")
    if len(minimal_indices(h)) != len(h):
        raise PreconditionError("h must be minimal (no ball contains another)")
    nodes, q = _multiset(h, w)
    p = len(nodes)
    if not p:
        return Rounding([], 0, q, Fraction(0))
    meets = [[bool(a.mask & b.mask) for b in h.balls] for a in h.balls]
    copies: dict[int, list[int]] = {}
    for a, e in enumerate(nodes):
        copies.setdefault(e, []).append(a)
    adj = []
    for a, e in enumerate(nodes):
        row = [b for f in copies if meets[e][f] for b in copies[f] if b != a]
        adj.append(tuple(sorted(row)))
    g = Graph(p, tuple(adj))
    ad = average_degree(g)
    if exceeds_e_times(ad, profile.d * q):
        _raise_matching_density_witness(h, nodes, q, profile, ad)
    independent = caro_wei_independent_set(g)
    matching = sorted(nodes[a] for a in independent)
    if not h.is_matching(matching):
        raise AssertionError("rounded set is not a matching")
    return Rounding(matching, p, q, ad)


def _raise_matching_density_witness(h: BallSystem, nodes: list[int], q: int,
                                    profile: DensityProfile, ad: Fraction) -> None:
    g = h.graph
    p = len(nodes)
    medians: dict[tuple[int, int], int] = {}
    edge_of_vertex: dict[int, int] = {}
    edges: list[frozenset[int]] = []
    pairs: dict[tuple[int, int], int] = {}
    for a in range(p):
        for b in range(a + 1, p):
            e, f = nodes[a], nodes[b]
            if not h.balls[e].mask & h.balls[f].mask:
                continue
            key = (min(e, f), max(e, f))
            if key not in medians:
                medians[key] = median_vertex(g, h.balls[key[0]], h.balls[key[1]])
            x = medians[key]
            if x not in edge_of_vertex:
                edge_of_vertex[x] = len(edges)
                edges.append(frozenset(c for c in range(p) if x in h.balls[nodes[c]]))
            pairs[(a, b)] = edge_of_vertex[x]
    sparse = sparsify_derandomized(MultiHypergraph(p, tuple(edges)), pairs, max(2, q))
    count: dict[int, int] = {}
    for a in sparse.selected:
        count[nodes[a]] = count.get(nodes[a], 0) + 1
    single = [a for a in sparse.selected if count[nodes[a]] == 1]
    index = {a: i for i, a in enumerate(single)}
    pattern_edges = [(index[a], index[b]) for a, b in sparse.pairs if a in index and b in index]
    system = h.subsystem([nodes[a] for a in single])
    meds = {(index[a], index[b]): medians[(min(nodes[a], nodes[b]), max(nodes[a], nodes[b]))]
            for a, b in sparse.pairs if a in index and b in index}
    model = minor_from_medians(g, system, pattern_edges, meds)
    raise DensityWitnessError(
        f"intersection graph average degree {ad} exceeds e*d*q with d={profile.d}, q={q}",
        graph=model.pattern, model=model,
        average_degree=average_degree(model.pattern) if single else Fraction(0),
        vertices=[nodes[a] for a in single])


# ---------------------------------------------------------------------------
# Transversals from fractional transversals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplingResult:
    vertices: list[int]
    fallback: bool
    trials: int
    sample_size: int


def transversal_sample_size(tau_star: Fraction, delta: int) -> int:
    """``ceil(2 * delta * tau* * log(11 * tau*))`` computed exactly."""
    tau_star = Fraction(tau_star)
    return exact_ceil(lambda: 2 * delta * ivq(tau_star) * iv.log(11 * ivq(tau_star)))


def greedy_set_cover(h: BallSystem) -> list[int]:
    """Repeatedly take the vertex hitting most unhit balls (lowest id on ties)."""
    n = h.graph.vertex_count
    sig = [0] * n
    for e, b in enumerate(h.balls):
        for v in b.members:
            sig[v] |= 1 << e
    unhit = (1 << len(h)) - 1
    chosen = []
    while unhit:
        v = max(range(n), key=lambda u: ((sig[u] & unhit).bit_count(), -u))
        chosen.append(v)
        unhit &= ~sig[v]
    chosen.sort()
    if not h.is_transversal(chosen):
        raise AssertionError("greedy cover misses a ball")
    return chosen


def transversal_by_sampling(h: BallSystem, w: FractionalSolution,
                            profile: DensityProfile = PLANAR, seed: int = 0,
                            trial_budget: int = 100) -> SamplingResult:
    """Sample ``ceil(2 delta tau* log(11 tau*))`` vertices i.i.d. from ``w / tau*``.

    Trials repeat until one sample hits every ball; after ``trial_budget``
    failures the greedy cover is returned and flagged as a fallback.
    """
    if w.side != TRANSVERSAL or w.violations(h):
        raise InputError("w is not a feasible fractional transversal of h")
    tau = w.objective
    if tau < 1:
        raise PreconditionError("tau* must be at least 1")
    size = transversal_sample_size(tau, profile.vc_bound)
    scale = lcm(*(x.denominator for x in w.weights if x))
    support = [v for v, x in enumerate(w.weights) if x]
    cum = list(accumulate(int(w.weights[v] * scale) for v in support))
    rng = random.Random(seed)
    masks = [b.mask for b in h.balls]
    for trial in range(1, trial_budget + 1):
        sample = {support[bisect_right(cum, rng.randrange(cum[-1]))] for _ in range(size)}
        hit = 0
        for v in sample:
            hit |= 1 << v
        if all(m & hit for m in masks):
            return SamplingResult(sorted(sample), False, trial, size)
    return SamplingResult(greedy_set_cover(h), True, trial_budget, size)


def near_linear_transversal(h: BallSystem, profile: DensityProfile = PLANAR, seed: int = 0,
                            trial_budget: int = 100) -> SamplingResult:
    """Transversal of size about ``tau* log tau*`` via the exact LP and sampling."""
    if not len(h):
        return SamplingResult([], False, 0, 0)
    return transversal_by_sampling(h, solve_tau_star(h), profile, seed, trial_budget)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Constants:
    """Certified upper bounds for the bounding function ``f`` and the ratio ``c``."""

    f: Callable[[Fraction | int], Fraction]
    c: Fraction


def constants(profile: DensityProfile = PLANAR) -> Constants:
    """``f(nu) = 2e(t-1) d nu log(11 e d nu)`` and ``c = 2 (1 + 3/2 d^2 e)^(3d/2) f(3d/2)``.

    Both are returned as rational upper bounds of the real values.
    """
    d, delta = profile.d, profile.vc_bound

    def f_iv(nu: Fraction):
        nu = ivq(nu)
        return 2 * iv.e * delta * ivq(d) * nu * iv.log(11 * iv.e * ivq(d) * nu)

    def f(nu: Fraction | int) -> Fraction:
        nu = Fraction(nu)
        if nu < 0:
            raise InputError("nu must be nonnegative")
        if nu == 0:
            return Fraction(0)
        return upper_bound(lambda: f_iv(nu))

    k = Fraction(3, 2) * d
    c = upper_bound(lambda: 2 * iv.exp(ivq(k) * iv.log(1 + ivq(k * d) * iv.e)) * f_iv(k))
    return Constants(f, c)


# ---------------------------------------------------------------------------
# Linear cover
# ---------------------------------------------------------------------------

@dataclass
class LevelStats:
    balls: int
    matching: int
    small_edges: int
    e1: int
    e2: int
    augmentations: int
    fallbacks: int
    cliques: int


@dataclass
class CoverCertificate:
    """Verified transversal and matching with the claimed ratio bound."""

    transversal: list[int]
    matching: list[int]
    ratio_bound: Fraction
    levels: list[LevelStats] = field(default_factory=list)

    @property
    def fallbacks(self) -> int:
        return sum(s.fallbacks for s in self.levels)

    def within_bound(self) -> bool:
        return len(self.transversal) <= self.ratio_bound * len(self.matching)

    def to_json(self) -> dict:
        return {
            "transversal": self.transversal,
            "matching": self.matching,
            "ratio_bound": f"{self.ratio_bound.numerator}/{self.ratio_bound.denominator}",
            "within_bound": self.within_bound(),
            "fallbacks": self.fallbacks,
            "levels": [vars(s) for s in self.levels],
        }


def _extend_matching(h: BallSystem, matching: list[int]) -> list[int]:
    used = 0
    for i in matching:
        used |= h.balls[i].mask
    out = list(matching)
    for i, b in enumerate(h.balls):
        if not b.mask & used:
            out.append(i)
            used |= b.mask
    return sorted(out)


def _larger_matching(he: BallSystem, size: int, profile: DensityProfile, budget: int) -> list[int]:
    """A matching of ``he`` with more than ``size`` balls."""
    rounded = round_fractional_matching(he, solve_nu_star(he), profile).matching
    if len(rounded) > size:
        return rounded
    value, cert = exact_nu(he, budget=budget)
    if value <= size:
        raise DensityWitnessError(
            f"piece has nu* above e*d*{size} but nu = {value}: declared d={profile.d} is violated")
    return cert


def _stable_level(sub: BallSystem, profile: DensityProfile, budget: int, cap: int):
    """Greedy matching improved until no small packing edge has a large ``tau*``.

    Returns ``(matching, pieces, ph, small, augmentations)`` where each
    piece pairs a small packing edge with its exact ``tau*`` solution.
    """
    d = profile.d
    threshold = Fraction(3, 2) * d
    k = max(2, ceil(threshold))
    matching = _extend_matching(sub, [])
    augmentations = 0
    while True:
        ph = packing_hypergraph(sub, matching)
        small = enumerate_small_packing_edges(ph, k, d)
        pieces = []
        improved = False
        for pattern, witnesses in small.edges:
            if len(pattern) > threshold:
                continue
            he = sub.subsystem(witnesses)
            tau = solve_tau_star(he)
            if exceeds_e_times(tau.objective, d * len(pattern)):
                bigger = _larger_matching(he, len(pattern), profile, budget)
                drop = {matching[p] for p in pattern}
                matching = _extend_matching(
                    sub, [i for i in matching if i not in drop] + [witnesses[i] for i in bigger])
                augmentations += 1
                if augmentations > cap:
                    raise BudgetError("augmentation cap reached", best=len(matching),
                                      certificate=matching)
                improved = True
                break
            pieces.append((pattern, witnesses, tau))
        if not improved:
            return matching, pieces, ph, small, augmentations


def linear_cover(h: BallSystem, profile: DensityProfile = PLANAR, seed: int = 0,
                 trial_budget: int = 100, budget: int = DEFAULT_BUDGET) -> CoverCertificate:
    """Transversal of size at most ``c * |B|`` together with a matching ``B``.

    Each level builds a matching of its minimal balls that is stable under
    small-packing-edge augmentation.  Balls meeting at most ``3d/2``
    matching balls are covered piece by piece with sampled transversals;
    the remaining balls go to the next level.  A next-level
    matching larger than half the current one proves the declared density
    wrong and raises ``DensityWitnessError`` with a minor model.
    """
    consts = constants(profile)
    rng = random.Random(seed)
    threshold = Fraction(3, 2) * profile.d
    transversal: set[int] = set()
    levels: list[LevelStats] = []
    top_matching: list[int] | None = None
    previous: list[int] | None = None
    current = list(range(len(h)))
    while current:
        kept = [current[i] for i in minimal_indices(h.subsystem(current))]
        sub = h.subsystem(kept)
        local, pieces, ph, small, aug = _stable_level(sub, profile, budget, len(h))
        matching = [kept[i] for i in local]
        if previous is not None and 2 * len(matching) > len(previous):
            _raise_recursion_witness(h, previous, matching, profile)
        if top_matching is None:
            top_matching = matching
        fallbacks = 0
        for pattern, witnesses, tau in pieces:
            he = sub.subsystem(witnesses)
            piece = transversal_by_sampling(he, tau, profile, rng.getrandbits(64), trial_budget)
            fallbacks += piece.fallback
            transversal.update(piece.vertices)
        e2 = [kept[i] for pattern, idx in ph.edges.items() if len(pattern) > threshold for i in idx]
        e2.sort()
        levels.append(LevelStats(len(kept), len(matching), len(small.edges),
                                 len(kept) - len(e2), len(e2), aug, fallbacks,
                                 small.cliques_enumerated))
        if len(e2) >= len(current):
            raise AssertionError("recursion did not shrink the ball system")
        previous, current = matching, e2
    cert = CoverCertificate(sorted(transversal), sorted(top_matching or []), consts.c, levels)
    if not h.is_transversal(cert.transversal):
        raise AssertionError("linear_cover transversal misses a ball")
    if not h.is_matching(cert.matching):
        raise AssertionError("linear_cover matching is not disjoint")
    return cert


def _raise_recursion_witness(h: BallSystem, outer: list[int], inner: list[int],
                             profile: DensityProfile) -> None:
    balls = outer + inner
    system = h.subsystem(balls)
    g = h.graph
    edges, medians = [], {}
    for a in range(len(outer)):
        for b in range(len(outer), len(balls)):
            if system.balls[a].mask & system.balls[b].mask:
                edges.append((a, b))
                medians[(a, b)] = median_vertex(g, system.balls[a], system.balls[b])
    model = minor_from_medians(g, system, edges, medians)
    raise DensityWitnessError(
        f"recursion matching {len(inner)} exceeds half of {len(outer)}; declared d={profile.d} violated",
        graph=model.pattern, model=model, average_degree=average_degree(model.pattern),
        vertices=balls)
