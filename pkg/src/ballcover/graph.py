"""Undirected simple graphs with BFS metrics and deterministic generators."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import InputError, NoPathError

# Distance value for vertices outside the source's component.
UNREACHABLE = None


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph on vertices ``0 .. vertex_count-1``.

    ``adjacency[v]`` is the strictly increasing tuple of neighbors of ``v``.
    BFS distance arrays are memoized per source, which is safe because the
    graph never changes after construction.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    _dist_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0 or len(self.adjacency) != self.vertex_count:
            raise InputError("adjacency must have one entry per vertex")
        n = self.vertex_count
        for v, nbrs in enumerate(self.adjacency):
            prev = -1
            for u in nbrs:
                if not 0 <= u < n:
                    raise InputError(f"neighbor {u} of {v} out of range")
                if u == v:
                    raise InputError(f"loop at vertex {v}")
                if u <= prev:
                    raise InputError(f"neighbors of {v} not strictly increasing")
                prev = u
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if not _contains(self.adjacency[u], v):
                    raise InputError(f"asymmetric edge {v}-{u}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.adjacency == other.adjacency

    def __hash__(self):
        return hash((self.vertex_count, self.adjacency))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an edge list, rejecting malformed edges."""
        if vertex_count < 0:
            raise InputError("vertex_count must be nonnegative")
        nbrs: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InputError(f"edge {u}-{v} out of range")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            if v in nbrs[u]:
                raise InputError(f"duplicate edge {min(u, v)}-{max(u, v)}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(vertex_count, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, ascending."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        return _contains(self.adjacency[u], v)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def distances(self, source: int) -> list:
        """Memoized :func:`bfs_distances`; callers must not mutate the result."""
        d = self._dist_cache.get(source)
        if d is None:
            d = bfs_distances(self, source)
            self._dist_cache[source] = d
        return d

    def distance(self, u: int, v: int):
        return self.distances(u)[v]

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled by position in ``vertices``."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u in vertices for v in self.adjacency[u]
                 if v in index and u < v]
        return Graph.from_edges(len(vertices), edges)

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        return all(d is not None for d in self.distances(0))


def _contains(seq: tuple[int, ...], x: int) -> bool:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(seq) and seq[lo] == x


def bfs_distances(g: Graph, source: int) -> list:
    """Hop distances from ``source``; ``UNREACHABLE`` (None) elsewhere."""
    if not 0 <= source < g.vertex_count:
        raise InputError(f"source {source} out of range")
    dist: list = [UNREACHABLE] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for u in g.adjacency[v]:
            if dist[u] is None:
                dist[u] = dv
                queue.append(u)
    return dist


def lex_min_shortest_path(g: Graph, s: int, x: int) -> list[int]:
    """Shortest ``s``-``x`` path whose vertex sequence is lexicographically least.

    Walks from ``s`` and always steps to the smallest neighbor that stays on
    some shortest path to ``x``.  Since every shortest path visits exactly one
    vertex per distance layer, greedy choice at each layer is optimal.
    """
    ds = g.distances(s)
    dx = g.distances(x)
    total = ds[x]
    if total is None:
        raise NoPathError(f"no path between {s} and {x}")
    path = [s]
    cur = s
    while cur != x:
        step = ds[cur] + 1
        for u in g.adjacency[cur]:
            if ds[u] == step and dx[u] == total - step:
                cur = u
                break
        path.append(cur)
    return path


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def path_graph(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, combinations(range(n), 2))


def _grid_edges(rows: int, cols: int, diagonals: bool) -> list[tuple[int, int]]:
    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
            if diagonals and r + 1 < rows:
                if c + 1 < cols:
                    edges.append((vid(r, c), vid(r + 1, c + 1)))
                if c > 0:
                    edges.append((vid(r, c), vid(r + 1, c - 1)))
    return edges


def grid_graph(rows: int, cols: int) -> Graph:
    """``rows x cols`` grid; vertex ``r * cols + c`` sits at ``(r, c)``."""
    _positive(rows=rows, cols=cols)
    return Graph.from_edges(rows * cols, _grid_edges(rows, cols, False))


def king_grid_graph(rows: int, cols: int) -> Graph:
    """Strong product of two paths: the grid with both diagonals per cell."""
    _positive(rows=rows, cols=cols)
    return Graph.from_edges(rows * cols, _grid_edges(rows, cols, True))


def _connected_random_subgraph(n: int, edges: list[tuple[int, int]], keep: float,
                               rng: random.Random) -> Graph:
    # Random spanning tree (Kruskal on a shuffled edge list) plus each
    # remaining edge independently with probability ``keep``.
    order = edges[:]
    rng.shuffle(order)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen = []
    rest = []
    for u, v in order:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
        else:
            rest.append((u, v))
    rest.sort()
    chosen.extend(e for e in rest if rng.random() < keep)
    return Graph.from_edges(n, chosen)


def random_king_subgraph(rows: int, cols: int, seed: int, keep: float = 0.5) -> Graph:
    """Seeded connected spanning subgraph of the king grid."""
    _positive(rows=rows, cols=cols)
    rng = random.Random(seed)
    return _connected_random_subgraph(rows * cols, _grid_edges(rows, cols, True), keep, rng)


def random_planar_graph(rows: int, cols: int, seed: int, keep: float = 0.5) -> Graph:
    """Seeded connected planar graph: a subgraph of a triangulated grid.

    Each grid cell receives one random diagonal, so the supergraph is planar
    and so is every subgraph of it.
    """
    _positive(rows=rows, cols=cols)
    rng = random.Random(seed)
    edges = _grid_edges(rows, cols, False)
    for r in range(rows - 1):
        for c in range(cols - 1):
            a = r * cols + c
            if rng.random() < 0.5:
                edges.append((a, a + cols + 1))
            else:
                edges.append((a + 1, a + cols))
    return _connected_random_subgraph(rows * cols, edges, keep, rng)


def random_tree(n: int, seed: int) -> Graph:
    """Seeded random recursive tree: vertex ``i`` attaches to a uniform earlier vertex."""
    _positive(n=n)
    rng = random.Random(seed)
    return Graph.from_edges(n, [(rng.randrange(i), i) for i in range(1, n)])


def subdivide(g: Graph, times: int = 1) -> Graph:
    """Replace every edge by a path with ``times`` new interior vertices."""
    if times < 0:
        raise InputError("times must be nonnegative")
    n = g.vertex_count
    edges = []
    for u, v in g.edges():
        prev = u
        for _ in range(times):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, v))
    return Graph.from_edges(n, edges)


FAMILIES = ("path", "cycle", "complete", "grid", "king_grid", "king_sub", "planar", "tree")


def gen_family(family: str, *, n: int | None = None, rows: int | None = None,
               cols: int | None = None, seed: int | None = None, keep: float = 0.5,
               subdivisions: int = 0) -> Graph:
    """Build a graph from a family descriptor.

    ``path``, ``cycle``, ``complete`` and ``tree`` take ``n``; the grid
    families take ``rows`` and ``cols``; ``king_sub``, ``planar`` and ``tree``
    also need ``seed``.  ``subdivisions`` subdivides every edge afterwards.
    """
    family = family.replace("-", "_")
    if family in ("path", "cycle", "complete", "tree"):
        if n is None:
            raise InputError(f"family {family} needs n")
    elif family in ("grid", "king_grid", "king_sub", "planar"):
        if rows is None or cols is None:
            raise InputError(f"family {family} needs rows and cols")
    else:
        raise InputError(f"unknown family {family!r}")
    if family in ("king_sub", "planar", "tree") and seed is None:
        raise InputError(f"family {family} needs a seed")

    if family == "path":
        g = path_graph(n)
    elif family == "cycle":
        g = cycle_graph(n)
    elif family == "complete":
        g = complete_graph(n)
    elif family == "tree":
        g = random_tree(n, seed)
    elif family == "grid":
        g = grid_graph(rows, cols)
    elif family == "king_grid":
        g = king_grid_graph(rows, cols)
    elif family == "king_sub":
        g = random_king_subgraph(rows, cols, seed, keep)
    else:
        g = random_planar_graph(rows, cols, seed, keep)
    if subdivisions:
        g = subdivide(g, subdivisions)
    return g


def _positive(**dims: int) -> None:
    for name, value in dims.items():
        if value is None or value < 1:
            raise InputError(f"{name} must be a positive integer, got {value}")


# ---------------------------------------------------------------------------
# Broom counterexample family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BroomInstance:
    """Broom graph: ``k`` brooms whose leaves meet on a subdivided path.

    ``roots[i]`` is the root of broom ``i`` (0-based) and
    ``junctions[(i, j)]`` with ``i < j`` is the shared leaf of brooms
    ``i`` and ``j``.
    """

    graph: Graph
    roots: tuple[int, ...]
    junctions: dict[tuple[int, int], int]
    k: int
    ell: int
    spacing: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "ell": self.ell,
            "spacing": self.spacing,
            "roots": list(self.roots),
            "junctions": [[i, j, y] for (i, j), y in sorted(self.junctions.items())],
        }


def gen_broom_counterexample(k: int, ell: int, spacing: int = 1) -> BroomInstance:
    """Build the broom graph for ``k`` and ``ell`` with caterpillar-shaped brooms.

    Broom ``i`` has a handle of length ``ell/2`` from its root, then splits
    at depths ``ell/2, ell/2 + spacing, ...``; every branch and the spine run
    to depth ``ell`` and end at the junction vertices ``y_{i,j}``.  The
    junctions are strung along a path of total length ``ell/2``.
    """
    if k < 3:
        raise InputError("k must be at least 3")
    if spacing < 1:
        raise InputError("spacing must be at least 1")
    pairs = comb(k, 2)
    if ell <= 0 or ell % (2 * (pairs - 1)):
        raise InputError(f"ell must be a positive multiple of {2 * (pairs - 1)}")
    half = ell // 2
    if half < (k - 2) * spacing + (k - 2):
        raise InputError("ell too small for the requested spacing")

    edges: list[tuple[int, int]] = []
    roots = tuple(range(k))
    next_id = k
    junctions: dict[tuple[int, int], int] = {}
    for pair in combinations(range(k), 2):
        junctions[pair] = next_id
        next_id += 1

    # Junction path, each edge subdivided so the whole path has length ell/2.
    step = half // (pairs - 1)
    ys = list(junctions.values())
    for a, b in zip(ys, ys[1:]):
        prev = a
        for _ in range(step - 1):
            edges.append((prev, next_id))
            prev = next_id
            next_id += 1
        edges.append((prev, b))

    def chain(start: int, length: int, end: int) -> None:
        # ``length`` edges from ``start`` to ``end`` through fresh vertices.
        nonlocal next_id
        prev = start
        for _ in range(length - 1):
            edges.append((prev, next_id))
            prev = next_id
            next_id += 1
        edges.append((prev, end))

    for i in range(k):
        leaves = [junctions[(min(i, j), max(i, j))] for j in range(k) if j != i]
        # Spine vertices by depth 0..ell-1; the leaf at depth ell is leaves[-1].
        spine = [roots[i]]
        for _ in range(ell - 1):
            edges.append((spine[-1], next_id))
            spine.append(next_id)
            next_id += 1
        edges.append((spine[-1], leaves[-1]))
        for m, leaf in enumerate(leaves[:-1]):
            depth = half + m * spacing
            chain(spine[depth], ell - depth, leaf)

    g = Graph.from_edges(next_id, edges)
    return BroomInstance(g, roots, junctions, k, ell, spacing)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` edge lines format."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise InputError("empty graph file")
    try:
        header = [int(x) for x in rows[0]]
        body = [tuple(int(x) for x in row) for row in rows[1:]]
    except ValueError as exc:
        raise InputError(f"non-integer token in graph file: {exc}") from None
    if len(header) != 2:
        raise InputError("graph header must be 'n m'")
    n, m = header
    if len(body) != m:
        raise InputError(f"header announces {m} edges, file has {len(body)}")
    for row in body:
        if len(row) != 2:
            raise InputError(f"bad edge line {row}")
    return Graph.from_edges(n, body)
