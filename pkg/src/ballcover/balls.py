"""Balls in graphs, ball systems viewed as hypergraphs, and their medians."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError
from .graph import Graph, lex_min_shortest_path


@dataclass(frozen=True)
class Ball:
    """Closed ball ``B_radius(center)`` with its realized member set.

    ``mask`` is the member set as an integer bitset (bit ``v`` set iff ``v``
    is a member); most set algebra in the package runs on it.
    """

    center: int
    radius: int
    members: frozenset[int]
    mask: int = field(repr=False, compare=False, default=0)

    def __contains__(self, v: int) -> bool:
        return (self.mask >> v) & 1 == 1

    def __len__(self) -> int:
        return len(self.members)

    def intersects(self, other: "Ball") -> bool:
        return self.mask & other.mask != 0


def make_ball(g: Graph, center: int, radius: int) -> Ball:
    if not 0 <= center < g.vertex_count:
        raise InputError(f"center {center} out of range")
    if radius < 0:
        raise InputError("radius must be nonnegative")
    dist = g.distances(center)
    members = [u for u, d in enumerate(dist) if d is not None and d <= radius]
    mask = 0
    for u in members:
        mask |= 1 << u
    return Ball(center, radius, frozenset(members), mask)


def members_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class BallSystem:
    """Ordered balls of one graph; the order is the hyperedge indexing."""

    graph: Graph
    balls: tuple[Ball, ...]

    def __len__(self) -> int:
        return len(self.balls)

    def __getitem__(self, i: int) -> Ball:
        return self.balls[i]

    def __iter__(self):
        return iter(self.balls)

    @classmethod
    def from_pairs(cls, g: Graph, pairs: Iterable[tuple[int, int]]) -> "BallSystem":
        return cls(g, tuple(make_ball(g, c, r) for c, r in pairs))

    def subsystem(self, indices: Sequence[int]) -> "BallSystem":
        return BallSystem(self.graph, tuple(self.balls[i] for i in indices))

    def is_transversal(self, vertices: Iterable[int]) -> bool:
        mask = members_mask(vertices)
        return all(b.mask & mask for b in self.balls)

    def is_matching(self, indices: Iterable[int]) -> bool:
        seen = 0
        idx = list(indices)
        if len(set(idx)) != len(idx):
            return False
        for i in idx:
            m = self.balls[i].mask
            if seen & m:
                return False
            seen |= m
        return True

    def support(self) -> int:
        """Bitset of vertices lying in at least one ball."""
        mask = 0
        for b in self.balls:
            mask |= b.mask
        return mask


def all_balls(g: Graph, radius: int) -> BallSystem:
    """Every ball of the given radius, one per vertex, in vertex order."""
    return BallSystem.from_pairs(g, ((v, radius) for v in range(g.vertex_count)))


def random_balls(g: Graph, count: int, max_radius: int, seed: int) -> BallSystem:
    """``count`` balls with uniform centers and radii in ``0..max_radius``."""
    if count < 0 or max_radius < 0:
        raise InputError("count and max_radius must be nonnegative")
    if g.vertex_count == 0 and count:
        raise InputError("cannot place balls in an empty graph")
    rng = random.Random(seed)
    pairs = [(rng.randrange(g.vertex_count), rng.randint(0, max_radius)) for _ in range(count)]
    return BallSystem.from_pairs(g, pairs)


def comparable(b1: Ball, b2: Ball) -> bool:
    """True iff one member set strictly contains the other."""
    if b1.mask == b2.mask:
        return False
    inter = b1.mask & b2.mask
    return inter == b1.mask or inter == b2.mask


def minimalize(h: BallSystem) -> BallSystem:
    """Drop balls that strictly contain another ball, and duplicate member sets.

    Among balls with equal member sets the lowest index survives.
    """
    return h.subsystem(minimal_indices(h))


def minimal_indices(h: BallSystem) -> list[int]:
    """Indices kept by :func:`minimalize`, ascending."""
    first: dict[int, int] = {}
    for i, b in enumerate(h.balls):
        first.setdefault(b.mask, i)
    distinct = sorted(first.items(), key=lambda kv: kv[0].bit_count())
    kept: list[int] = []
    kept_masks: list[int] = []
    for mask, i in distinct:
        # Sorted by size, so only earlier (not larger) sets can be contained.
        if any(m & mask == m for m in kept_masks):
            continue
        kept.append(i)
        kept_masks.append(mask)
    return sorted(kept)


def median_vertex(g: Graph, b1: Ball, b2: Ball) -> int:
    """Median vertex of two intersecting, incomparable balls.

    Measured from the lower-indexed center along the lexicographically least
    shortest path between the centers: the vertex at distance
    ``floor((r_low - r_high + d) / 2)`` from the lower center, where
    ``r_low`` is the radius of the ball centered there.
    """
    if not b1.intersects(b2):
        raise PreconditionError("median of disjoint balls")
    if comparable(b1, b2):
        raise PreconditionError("median of comparable balls")
    if b1.center == b2.center:
        return b1.center
    if b2.center < b1.center:
        b1, b2 = b2, b1
    d = g.distance(b1.center, b2.center)
    # Distinct incomparable balls keep the offset in [0, d]; equal member sets
    # with different centers may not, and then either center lies in both.
    offset = min(max((b1.radius - b2.radius + d) // 2, 0), d)
    return lex_min_shortest_path(g, b1.center, b2.center)[offset]


def intersection_graph(h: BallSystem) -> Graph:
    """One vertex per ball, adjacent iff member sets intersect."""
    masks = [b.mask for b in h.balls]
    n = len(masks)
    adj = [[] for _ in range(n)]
    for i in range(n):
        mi = masks[i]
        row = adj[i]
        for j in range(i + 1, n):
            if mi & masks[j]:
                row.append(j)
                adj[j].append(i)
    return Graph(n, tuple(tuple(sorted(a)) for a in adj))


@dataclass(frozen=True)
class PackingHypergraph:
    """Packing-hypergraph of a ball system with respect to a matching.

    ``edges`` maps each occurring intersection pattern (a frozenset of
    positions into ``matching``) to the ascending indices of the balls of
    the system that realize it.
    """

    system: BallSystem
    matching: tuple[int, ...]
    edges: dict[frozenset[int], tuple[int, ...]]

    def edge_list(self) -> list[tuple[frozenset[int], tuple[int, ...]]]:
        """Edges sorted by (cardinality, sorted members) for determinism."""
        return sorted(self.edges.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))


def intersection_pattern(ball: Ball, matching_masks: Sequence[int]) -> frozenset[int]:
    return frozenset(p for p, m in enumerate(matching_masks) if ball.mask & m)


def packing_hypergraph(h: BallSystem, matching: Sequence[int]) -> PackingHypergraph:
    """Record, for every ball, which balls of ``matching`` it meets."""
    matching = tuple(matching)
    if not h.is_matching(matching):
        raise PreconditionError("matching balls are not pairwise disjoint")
    masks = [h.balls[i].mask for i in matching]
    union = 0
    for m in masks:
        union |= m
    edges: dict[frozenset[int], list[int]] = {}
    for idx, b in enumerate(h.balls):
        if not b.mask & union:
            continue
        edges.setdefault(intersection_pattern(b, masks), []).append(idx)
    return PackingHypergraph(h, matching, {k: tuple(v) for k, v in edges.items()})


def format_balls(h: BallSystem) -> str:
    return "".join(f"{b.center} {b.radius}\n" for b in h.balls)


def parse_balls(g: Graph, text: str) -> BallSystem:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected 'center radius'")
        try:
            c, r = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer token") from None
        pairs.append((c, r))
    return BallSystem.from_pairs(g, pairs)
