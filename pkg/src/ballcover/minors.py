"""Explicit minor models built from ball systems, and a model checker.

Both constructors grow one tree per pattern vertex: the union of the
lexicographically least shortest paths from its ball center to the
connection vertex of each incident pattern edge.  Trees meet only at
connection vertices.  Dropping the connection vertices that are leaves
keeps every tree connected, so the trees serve as branch sets and each
pattern edge is realized next to its connection vertex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .balls import Ball, BallSystem, comparable
from .errors import InputError, InternalError
from .graph import Graph, lex_min_shortest_path

log = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class MinorModel:
    """Branch sets and edge paths certifying ``pattern`` as a minor of a host.

    ``edge_paths[(i, j)]`` (``i < j``) runs from a vertex of branch set ``i``
    to a vertex of branch set ``j``; its interior avoids all branch sets.
    """

    pattern: Graph
    branch_sets: tuple[frozenset[int], ...]
    edge_paths: dict[Pair, tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "pattern": {"n": self.pattern.vertex_count, "edges": [list(e) for e in self.pattern.edges()]},
            "branch_sets": [sorted(s) for s in self.branch_sets],
            "edge_paths": [[i, j, list(p)] for (i, j), p in sorted(self.edge_paths.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MinorModel":
        try:
            pat = data["pattern"]
            pattern = Graph.from_edges(pat["n"], [tuple(e) for e in pat["edges"]])
            branch = tuple(frozenset(s) for s in data["branch_sets"])
            paths = {(min(i, j), max(i, j)): tuple(p) for i, j, p in data["edge_paths"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad minor model: {exc}") from None
        return cls(pattern, branch, paths)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    clause: str | None = None
    message: str = ""
    witnesses: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def _fail(clause: str, message: str, *witnesses) -> VerificationReport:
    return VerificationReport(False, clause, message, tuple(witnesses))


def verify_minor_model(host: Graph, model: MinorModel,
                       max_interior: int | None = None) -> VerificationReport:
    """Check every structural condition of a minor model.

    Clauses are checked in a fixed order and the first violation is
    reported.  ``max_interior`` optionally bounds the number of interior
    vertices of each edge path.
    """
    pattern = model.pattern
    n = host.vertex_count
    if len(model.branch_sets) != pattern.vertex_count:
        return _fail("shape", "one branch set per pattern vertex expected",
                     len(model.branch_sets), pattern.vertex_count)
    owner: dict[int, int] = {}
    for i, bs in enumerate(model.branch_sets):
        if not bs:
            return _fail("nonempty", f"branch set {i} is empty", i)
        for v in bs:
            if not 0 <= v < n:
                return _fail("range", f"vertex {v} not in host", i, v)
            if v in owner:
                return _fail("disjointness", f"vertex {v} in branch sets {owner[v]} and {i}",
                             owner[v], i, v)
            owner[v] = i
    for i, bs in enumerate(model.branch_sets):
        if not _connected(host, bs):
            return _fail("connectivity", f"branch set {i} induces a disconnected subgraph", i)
    wanted = set(pattern.edges())
    for key in model.edge_paths:
        if key not in wanted:
            return _fail("edge realization", f"path for non-edge {key}", key)
    interiors: dict[int, Pair] = {}
    for key in sorted(wanted):
        path = model.edge_paths.get(key)
        if path is None:
            return _fail("edge realization", f"pattern edge {key} has no path", key)
        i, j = key
        if len(path) < 2:
            return _fail("edge realization", f"path for {key} is too short", key)
        ends = {owner.get(path[0]), owner.get(path[-1])}
        if ends != {i, j}:
            return _fail("edge realization", f"path for {key} does not join branch sets {i} and {j}",
                         key, path[0], path[-1])
        if len(set(path)) != len(path):
            return _fail("path", f"path for {key} repeats a vertex", key)
        for a, b in zip(path, path[1:]):
            if not (0 <= a < n and 0 <= b < n) or not host.has_edge(a, b):
                return _fail("path", f"{a}-{b} is not a host edge", key, a, b)
        inner = path[1:-1]
        if max_interior is not None and len(inner) > max_interior:
            return _fail("subdivision", f"path for {key} has {len(inner)} interior vertices", key)
        for v in inner:
            if v in owner:
                return _fail("interior", f"interior vertex {v} of {key} lies in branch set {owner[v]}",
                             key, v)
            if v in interiors:
                return _fail("interior", f"paths {interiors[v]} and {key} share interior vertex {v}",
                             interiors[v], key, v)
            interiors[v] = key
    return VerificationReport(True)


def _connected(host: Graph, vertices: frozenset[int]) -> bool:
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in host.adjacency[v]:
            if u in vertices and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vertices)


def contract(host: Graph, model: MinorModel) -> Graph:
    """Pattern recovered from a model: contract branch sets, suppress path interiors."""
    owner = {v: i for i, bs in enumerate(model.branch_sets) for v in bs}
    edges = set()
    for path in model.edge_paths.values():
        a, b = owner[path[0]], owner[path[-1]]
        edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(len(model.branch_sets), sorted(edges))


def average_degree(g: Graph) -> Fraction:
    """Exact ``2|E| / |V|``."""
    if g.vertex_count < 1:
        raise InputError("average degree of the empty graph")
    return Fraction(2 * g.edge_count, g.vertex_count)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def _normalize_edges(pattern_edges, n: int) -> list[Pair]:
    out = set()
    for i, j in pattern_edges:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise InputError(f"bad pattern edge ({i}, {j})")
        out.add((min(i, j), max(i, j)))
    return sorted(out)


def _build_from_connections(host: Graph, centers: Sequence[int], edges: list[Pair],
                            conn: Mapping[Pair, int]) -> MinorModel:
    """Trees of lex-least center-to-connection paths, then leaf contraction."""
    n = len(centers)
    paths: dict[tuple[int, Pair], list[int]] = {}
    parent: list[dict[int, int]] = [dict() for _ in range(n)]
    tree: list[set[int]] = [{centers[i]} for i in range(n)]
    has_child: list[set[int]] = [set() for _ in range(n)]
    for key in edges:
        x = conn[key]
        for i in key:
            p = lex_min_shortest_path(host, centers[i], x)
            paths[(i, key)] = p
            for a, b in zip(p, p[1:]):
                prev = parent[i].setdefault(b, a)
                if prev != a:
                    raise InternalError(f"T_{i} is not a tree: {b} has parents {prev} and {a}")
                has_child[i].add(a)
            tree[i].update(p)

    # Trees meet only at connection vertices of their shared pattern edge.
    edge_set = set(edges)
    where: dict[int, int] = {}
    for i in range(n):
        for v in tree[i]:
            if v in where:
                j = where[v]
                key = (min(i, j), max(i, j))
                if key not in edge_set or conn[key] != v:
                    raise InternalError(f"T_{j} and T_{i} meet at {v} outside a connection vertex")
            else:
                where[v] = i

    removed: list[set[int]] = [set() for _ in range(n)]
    for key in edges:
        x = conn[key]
        for i in key:
            if x != centers[i] and x not in has_child[i]:
                removed[i].add(x)
    edge_paths: dict[Pair, tuple[int, ...]] = {}
    for key in edges:
        i, j = key
        x = conn[key]
        in_i, in_j = x not in removed[i], x not in removed[j]
        if in_i and in_j:
            raise InternalError(f"connection vertex {x} of {key} is interior to both trees")
        if not in_i and not in_j:
            # Leaf of both trees: give it to the lower index, join directly.
            removed[i].discard(x)
            in_i = True
        if in_i:
            edge_paths[key] = (x, parent[j][x])
        else:
            edge_paths[key] = (parent[i][x], x)
    branch = tuple(frozenset(tree[i] - removed[i]) for i in range(n))
    model = MinorModel(Graph.from_edges(n, edges), branch, edge_paths)
    report = verify_minor_model(host, model, max_interior=1)
    if not report:
        raise InternalError(f"constructed model fails verification: {report.message}")
    return model


def minor_from_medians(host: Graph, balls: BallSystem, pattern_edges,
                       medians: Mapping[Pair, int]) -> MinorModel:
    """Minor model for pairwise incomparable balls joined at private medians.

    Centers must be distinct.  Every pattern edge needs a genuine median
    vertex of its two balls that no third ball contains.
    """
    n = len(balls)
    edges = _normalize_edges(pattern_edges, n)
    centers = [b.center for b in balls.balls]
    if len(set(centers)) != n:
        raise InputError("ball centers are not pairwise distinct")
    for i in range(n):
        for j in range(i + 1, n):
            if comparable(balls[i], balls[j]):
                raise InputError(f"balls {i} and {j} are comparable", (i, j))
    conn: dict[Pair, int] = {}
    for key in edges:
        x = medians.get(key, medians.get((key[1], key[0])))
        if x is None:
            raise InputError(f"no median given for pair {key}", key)
        i, j = key
        if not is_median(host, balls[i], balls[j], x):
            raise InputError(f"{x} is not a median vertex of pair {key}", key)
        others = [m for m in range(n) if m not in key and x in balls[m]]
        if others:
            raise InputError(f"median {x} of pair {key} also lies in ball {others[0]}", key)
        conn[key] = x
    return _build_from_connections(host, centers, edges, conn)


def is_median(g: Graph, b1: Ball, b2: Ball, x: int) -> bool:
    """Whether ``x`` is a median vertex of two intersecting incomparable balls."""
    if not b1.intersects(b2) or comparable(b1, b2):
        return False
    d = g.distance(b1.center, b2.center)
    d1, d2 = g.distance(b1.center, x), g.distance(b2.center, x)
    if d1 is None or d2 is None or d1 + d2 != d:
        return False
    lo = (b1.radius - b2.radius + d) // 2
    return d1 in (lo, -((b2.radius - b1.radius - d) // 2))


def _ball_distances(host: Graph, balls: BallSystem) -> list[list]:
    # Distance from every vertex to every ball of the system.
    out = []
    for b in balls.balls:
        dc = host.distances(b.center)
        out.append([None if x is None else max(0, x - b.radius) for x in dc])
    return out


def minor_from_connectors(host: Graph, balls: BallSystem, pattern_edges,
                          connectors: Mapping[Pair, Ball]) -> MinorModel:
    """Minor model for pairwise disjoint balls joined by private connector balls.

    Each connector is first replaced by a ball of least possible radius
    (ties: lowest center) that still meets exactly its two pattern balls,
    and its center is pulled toward the farther pattern ball while the
    distance normalization allows it; the connector centers then serve as
    connection vertices.
    """
    n = len(balls)
    edges = _normalize_edges(pattern_edges, n)
    for i in range(n):
        for j in range(i + 1, n):
            if balls[i].intersects(balls[j]):
                raise InputError(f"balls {i} and {j} intersect", (i, j))
    for key in edges:
        c = connectors.get(key, connectors.get((key[1], key[0])))
        if c is None:
            raise InputError(f"no connector for pair {key}", key)
        hit = [m for m in range(n) if c.intersects(balls[m])]
        if hit != list(key):
            raise InputError(f"connector of {key} meets balls {hit}", key)

    dist = _ball_distances(host, balls)
    centers = [b.center for b in balls.balls]
    conn: dict[Pair, int] = {}
    for key in edges:
        i, j = key
        best = None
        for c in range(host.vertex_count):
            di, dj = dist[i][c], dist[j][c]
            if di is None or dj is None:
                continue
            r = max(di, dj)
            if all(dist[m][c] is None or dist[m][c] > r for m in range(n) if m not in key):
                if best is None or r < best[0]:
                    best = (r, c)
        r, x = best
        x, r = _normalize_connector(host, balls, key, x, r)
        log.debug("connector %s: center %s radius %s, z-vertices %s", key, x, r,
                  [_z_vertex(host, balls[m], x) for m in key])
        conn[key] = x
    return _build_from_connections(host, centers, edges, conn)


def _normalize_connector(host: Graph, balls: BallSystem, key: Pair, x: int, r: int) -> tuple[int, int]:
    """Step the center toward one ball while it sits too close to the other one."""
    while True:
        moved = False
        for a, b in (key, key[::-1]):
            sa, ra = balls[a].center, balls[a].radius
            if host.distance(sa, x) < ra + r - 1:
                path = lex_min_shortest_path(host, balls[b].center, x)
                x, r = path[-2], r - 1
                moved = True
        if not moved:
            return x, r


def _z_vertex(host: Graph, ball: Ball, x: int) -> int:
    path = lex_min_shortest_path(host, ball.center, x)
    return path[min(ball.radius, len(path) - 1)]
