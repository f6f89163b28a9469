"""Exact rational LP optima and exact integral oracles for ball systems.

The matching LP (``nu*``) and the transversal LP (``tau*``) are solved
independently with the same exact simplex routine; their optima are then
compared, so strong duality acts as a runtime assertion rather than an
assumption.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Sequence

from .balls import BallSystem, intersection_graph, minimal_indices
from .errors import BudgetError, InputError, InternalError

MATCHING = "matching"
TRANSVERSAL = "transversal"

DEFAULT_BUDGET = int(os.environ.get("BALLCOVER_BUDGET", 10**7))


@dataclass(frozen=True)
class FractionalSolution:
    """Exact LP solution: per-ball weights (matching) or per-vertex (transversal)."""

    weights: tuple[Fraction, ...]
    objective: Fraction
    side: str

    def violations(self, h: BallSystem) -> list[str]:
        """Feasibility problems of this solution for ``h`` (empty when feasible)."""
        out = []
        if any(w < 0 for w in self.weights):
            out.append("negative weight")
        if sum(self.weights, Fraction(0)) != self.objective:
            out.append("objective differs from the sum of weights")
        if self.side == MATCHING:
            if len(self.weights) != len(h):
                return out + ["one weight per ball expected"]
            load = [Fraction(0)] * h.graph.vertex_count
            for w, b in zip(self.weights, h.balls):
                if w:
                    for v in b.members:
                        load[v] += w
            bad = [v for v, x in enumerate(load) if x > 1]
            if bad:
                out.append(f"vertex {bad[0]} overloaded")
        elif self.side == TRANSVERSAL:
            if len(self.weights) != h.graph.vertex_count:
                return out + ["one weight per vertex expected"]
            for i, b in enumerate(h.balls):
                if sum((self.weights[v] for v in b.members), Fraction(0)) < 1:
                    out.append(f"ball {i} under-covered")
                    break
        else:
            out.append(f"unknown side {self.side!r}")
        return out

    def is_feasible(self, h: BallSystem) -> bool:
        return not self.violations(h)

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "objective": _qstr(self.objective),
            "weights": [_qstr(w) for w in self.weights],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FractionalSolution":
        try:
            return cls(tuple(Fraction(w) for w in data["weights"]),
                       Fraction(data["objective"]), data["side"])
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad fractional solution: {exc}") from None


def _qstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Simplex
# ---------------------------------------------------------------------------

LE, GE = "<=", ">="


def simplex_max(rows: Sequence[Sequence[int | Fraction]], senses: Sequence[str],
                rhs: Sequence[int | Fraction], cost: Sequence[int | Fraction]
                ) -> tuple[Fraction, list[Fraction]]:
    """Maximize ``cost . x`` subject to ``rows[i] . x (<= or >=) rhs[i]``, ``x >= 0``.

    Requires ``rhs >= 0``.  Two-phase tableau simplex over ``Fraction`` with
    Bland's rule (lowest-index entering column, lowest-index basic variable
    among ratio ties), so it terminates on degenerate problems.  Returns the
    optimum and an optimal ``x``.  Raises ``InputError`` if infeasible or
    unbounded.
    """
    m, n = len(rows), len(cost)
    if any(Fraction(b) < 0 for b in rhs):
        raise InputError("simplex_max requires a nonnegative right-hand side")
    n_slack = m
    n_art = sum(1 for s in senses if s == GE)
    width = n + n_slack + n_art
    rhs_col = width
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    art_cols: list[int] = []
    a = n + n_slack
    for i, (row, sense, b) in enumerate(zip(rows, senses, rhs)):
        line = [Fraction(x) for x in row] + [Fraction(0)] * (n_slack + n_art) + [Fraction(b)]
        if sense == LE:
            line[n + i] = Fraction(1)
            basis.append(n + i)
        elif sense == GE:
            line[n + i] = Fraction(-1)
            line[a] = Fraction(1)
            basis.append(a)
            art_cols.append(a)
            a += 1
        else:
            raise InputError(f"unknown constraint sense {sense!r}")
        tab.append(line)

    allowed = [True] * width
    if art_cols:
        obj = [Fraction(0)] * (width + 1)
        for c in art_cols:
            obj[c] = Fraction(1)
        for i, bv in enumerate(basis):
            if bv in art_cols:
                row = tab[i]
                for j in range(width + 1):
                    if row[j]:
                        obj[j] -= row[j]
        _run(tab, basis, obj, allowed)
        if obj[rhs_col] != 0:
            raise InputError("LP is infeasible")
        art = set(art_cols)
        for c in art_cols:
            allowed[c] = False
        keep = []
        for i, bv in enumerate(basis):
            if bv in art:
                j = next((j for j in range(width) if allowed[j] and tab[i][j] != 0), None)
                if j is None:
                    continue  # redundant row
                _pivot(tab, basis, obj, i, j)
            keep.append(i)
        tab = [tab[i] for i in keep]
        basis = [basis[i] for i in keep]

    full_cost = [Fraction(c) for c in cost] + [Fraction(0)] * (n_slack + n_art)
    obj = [-c for c in full_cost] + [Fraction(0)]
    for i, bv in enumerate(basis):
        cb = full_cost[bv]
        if cb:
            row = tab[i]
            for j in range(width + 1):
                if row[j]:
                    obj[j] += cb * row[j]
    _run(tab, basis, obj, allowed)
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][rhs_col]
    return obj[rhs_col], x


def _run(tab, basis, obj, allowed) -> None:
    width = len(obj) - 1
    while True:
        enter = next((j for j in range(width) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return
        best = None
        for i, row in enumerate(tab):
            coef = row[enter]
            if coef > 0:
                ratio = row[width] / coef
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise InputError("LP is unbounded")
        _pivot(tab, basis, obj, best[1], enter)


def _pivot(tab, basis, obj, r: int, c: int) -> None:
    prow = tab[r]
    inv = 1 / prow[c]
    nz = [j for j, v in enumerate(prow) if v]
    for j in nz:
        prow[j] *= inv
    for row in tab + [obj]:
        if row is prow:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    basis[r] = c


# ---------------------------------------------------------------------------
# Ball-system LPs
# ---------------------------------------------------------------------------

def vertex_signatures(h: BallSystem, balls: Sequence[int]) -> dict[int, int]:
    """Map each inclusion-maximal ball signature to its lowest vertex.

    The signature of a vertex is the bitset (over positions in ``balls``)
    of balls containing it.  Vertices with dominated signatures give
    redundant matching constraints and dominated transversal variables.
    """
    masks = [h.balls[i].mask for i in balls]
    sigs: dict[int, int] = {}
    for v in range(h.graph.vertex_count):
        s = 0
        for p, m in enumerate(masks):
            if (m >> v) & 1:
                s |= 1 << p
        if s and s not in sigs:
            sigs[s] = v
    by_size = sorted(sigs, key=lambda s: -s.bit_count())
    maximal: list[int] = []
    for s in by_size:
        if not any(t & s == s for t in maximal):
            maximal.append(s)
    return {s: sigs[s] for s in maximal}


def solve_nu_star(h: BallSystem) -> FractionalSolution:
    """Exact fractional matching number with an optimal weighting of the balls."""
    weights = [Fraction(0)] * len(h)
    if not len(h):
        return FractionalSolution(tuple(weights), Fraction(0), MATCHING)
    kept = minimal_indices(h)
    sigs = sorted(vertex_signatures(h, kept))
    rows = [[(s >> p) & 1 for p in range(len(kept))] for s in sigs]
    value, x = simplex_max(rows, [LE] * len(rows), [1] * len(rows), [1] * len(kept))
    for p, i in enumerate(kept):
        weights[i] = x[p]
    sol = FractionalSolution(tuple(weights), value, MATCHING)
    if not sol.is_feasible(h):
        raise InternalError("matching LP returned an infeasible point")
    return sol


def solve_tau_star(h: BallSystem, check_duality: bool = True) -> FractionalSolution:
    """Exact fractional transversal number with an optimal vertex weighting.

    The transversal LP is solved on its own; when ``check_duality`` is set
    its optimum must equal that of :func:`solve_nu_star`.
    """
    n = h.graph.vertex_count
    weights = [Fraction(0)] * n
    if not len(h):
        return FractionalSolution(tuple(weights), Fraction(0), TRANSVERSAL)
    kept = minimal_indices(h)
    reps = sorted(vertex_signatures(h, kept).values())
    rows = [[(h.balls[i].mask >> v) & 1 for v in reps] for i in kept]
    value, y = simplex_max(rows, [GE] * len(rows), [1] * len(rows), [-1] * len(reps))
    for p, v in enumerate(reps):
        weights[v] = y[p]
    sol = FractionalSolution(tuple(weights), -value, TRANSVERSAL)
    if not sol.is_feasible(h):
        raise InternalError("transversal LP returned an infeasible point")
    if check_duality and solve_nu_star(h).objective != sol.objective:
        raise InternalError("strong duality violated: nu* != tau*")
    return sol


def floor_scale_weights(w: FractionalSolution, n: int) -> FractionalSolution:
    """Round every weight down to a multiple of ``1/n``."""
    if n < 1:
        raise InputError("n must be positive")
    scaled = tuple(Fraction(floor(x * n), n) for x in w.weights)
    return FractionalSolution(scaled, sum(scaled, Fraction(0)), w.side)


# ---------------------------------------------------------------------------
# Exact integral oracles
# ---------------------------------------------------------------------------

class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> bool:
        self.used += 1
        return self.used > self.limit


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exact_nu(h: BallSystem, budget: int = DEFAULT_BUDGET, lp_bound: bool = True
             ) -> tuple[int, list[int]]:
    """Maximum matching of ``h`` by branch and bound, with a certificate.

    Searches maximum independent sets of the intersection graph of the
    minimal balls (minimalization keeps the matching number).  The root
    upper bound is ``floor(nu*)`` when ``lp_bound`` is set; inner nodes use a
    greedy clique cover.
    """
    if not len(h):
        return 0, []
    kept = minimal_indices(h)
    ig = intersection_graph(h.subsystem(kept))
    n = ig.vertex_count
    closed = [(1 << v) | sum(1 << u for u in ig.adjacency[v]) for v in range(n)]
    root_ub = n
    if lp_bound:
        root_ub = min(root_ub, floor(solve_nu_star(h.subsystem(kept)).objective))

    ticks = _Budget(budget)
    best: list[int] = _greedy_independent(closed, (1 << n) - 1)

    def clique_cover(cand: int) -> int:
        count = 0
        while cand:
            v = (cand & -cand).bit_length() - 1
            common = cand & closed[v] & ~(1 << v)
            cand &= ~(1 << v)
            while common:
                u = (common & -common).bit_length() - 1
                cand &= ~(1 << u)
                common &= closed[u] & ~(1 << u)
            count += 1
        return count

    def search(cand: int, chosen: list[int]) -> bool:
        # Returns True once the root upper bound is met.
        nonlocal best
        if ticks.tick():
            raise BudgetError("exact_nu node budget exhausted",
                              best=len(best), certificate=[kept[i] for i in best])
        if not cand:
            if len(chosen) > len(best):
                best = chosen[:]
            return len(best) >= root_ub
        if len(chosen) + clique_cover(cand) <= len(best):
            return False
        pivot = min(_bits(cand), key=lambda v: ((closed[v] & cand).bit_count(), v))
        branch = closed[pivot] & cand
        for u in _bits(branch):
            chosen.append(u)
            if search(cand & ~closed[u], chosen):
                return True
            chosen.pop()
            cand &= ~(1 << u)
        return False

    if len(best) < root_ub:
        search((1 << n) - 1, [])
    cert = sorted(kept[i] for i in best)
    if not h.is_matching(cert):
        raise InternalError("exact_nu certificate is not a matching")
    return len(cert), cert


def _greedy_independent(closed: list[int], cand: int) -> list[int]:
    out = []
    while cand:
        v = min(_bits(cand), key=lambda u: ((closed[u] & cand).bit_count(), u))
        out.append(v)
        cand &= ~closed[v]
    return out


def exact_tau(h: BallSystem, budget: int = DEFAULT_BUDGET, lp_bound: bool = True
              ) -> tuple[int, list[int]]:
    """Minimum transversal of ``h`` by iterative deepening, with a certificate.

    Only vertices with inclusion-maximal signatures are branched on; each
    node branches over the vertices of the unhit ball with fewest
    candidates, skipping vertices dominated by an already-tried sibling, and
    prunes with a greedy packing of pairwise candidate-disjoint unhit balls.
    The starting depth is ``ceil(tau*)`` when ``lp_bound`` is set.
    """
    if not len(h):
        return 0, []
    kept = minimal_indices(h)
    sub = h.subsystem(kept)
    m = len(kept)
    reps = sorted(vertex_signatures(h, kept).values())
    cover = [0] * len(reps)          # bitset of balls hit, per rep position
    ball_reps = [0] * m              # bitset of rep positions, per ball
    for p, v in enumerate(reps):
        for e, b in enumerate(sub.balls):
            if v in b:
                cover[p] |= 1 << e
                ball_reps[e] |= 1 << p
    everything = (1 << m) - 1
    order_by_size = sorted(range(m), key=lambda e: (ball_reps[e].bit_count(), e))

    upper = _greedy_cover(cover, everything)
    lower = 1
    if lp_bound:
        lower = max(lower, ceil(solve_tau_star(sub, check_duality=False).objective))
    lower = max(lower, _packing_bound(everything, order_by_size, ball_reps))

    ticks = _Budget(budget)

    def feasible(unhit: int, k: int, chosen: list[int]) -> bool:
        if ticks.tick():
            raise BudgetError("exact_tau node budget exhausted", best=len(upper),
                              certificate=sorted(reps[p] for p in upper))
        if not unhit:
            return True
        if k == 0 or _packing_bound(unhit, order_by_size, ball_reps) > k:
            return False
        target = min(_bits(unhit), key=lambda e: (ball_reps[e].bit_count(), e))
        options = sorted(_bits(ball_reps[target]),
                         key=lambda p: (-(cover[p] & unhit).bit_count(), p))
        tried: list[int] = []
        for p in options:
            gain = cover[p] & unhit
            if any(gain & t == gain for t in tried):
                continue
            tried.append(gain)
            chosen.append(p)
            if feasible(unhit & ~gain, k - 1, chosen):
                return True
            chosen.pop()
        return False

    result = upper
    for k in range(lower, len(upper)):
        chosen: list[int] = []
        if feasible(everything, k, chosen):
            result = chosen
            break
    cert = sorted(reps[p] for p in result)
    if not h.is_transversal(cert):
        raise InternalError("exact_tau certificate misses a ball")
    return len(cert), cert


def _greedy_cover(cover: list[int], unhit: int) -> list[int]:
    chosen = []
    while unhit:
        p = max(range(len(cover)), key=lambda q: ((cover[q] & unhit).bit_count(), -q))
        chosen.append(p)
        unhit &= ~cover[p]
    return chosen


def _packing_bound(unhit: int, order: list[int], ball_reps: list[int]) -> int:
    used = 0
    count = 0
    for e in order:
        if (unhit >> e) & 1 and not ball_reps[e] & used:
            used |= ball_reps[e]
            count += 1
    return count


# ---------------------------------------------------------------------------
# VC-dimension
# ---------------------------------------------------------------------------

def vc_dimension(h: BallSystem, budget: int = DEFAULT_BUDGET) -> int:
    """Exact VC-dimension by level-wise growth of shattered vertex sets.

    Subsets of shattered sets are shattered, so level ``s + 1`` candidates
    are built only from level ``s`` sets, and the search stops at the first
    empty level.  An edgeless system has VC-dimension 0 by convention.
    """
    edges = sorted({b.mask for b in h.balls})
    if not edges:
        return 0
    ticks = _Budget(budget)
    n = h.graph.vertex_count
    union = 0
    inter = -1
    for e in edges:
        union |= e
        inter &= e
    # {v} is shattered iff some edge contains v and some edge avoids it.
    level = [(v,) for v in range(n) if (union >> v) & 1 and not (inter >> v) & 1]
    dim = 0
    while level:
        dim = len(level[0])
        if 1 << (dim + 1) > len(edges):
            break
        present = set(level)
        nxt = []
        for x in level:
            for v in range(x[-1] + 1, n):
                cand = x + (v,)
                if ticks.tick():
                    raise BudgetError("vc_dimension budget exhausted", best=dim)
                if any(cand[:i] + cand[i + 1:] not in present for i in range(len(cand) - 1)):
                    continue
                xm = 0
                for u in cand:
                    xm |= 1 << u
                if len({e & xm for e in edges}) == 1 << len(cand):
                    nxt.append(cand)
        level = nxt
    return dim
