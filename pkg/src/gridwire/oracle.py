"""Independent brute-force ground truth for tiny instances.

`optimal_wiring` certifies the minimum volume of a coarse 1-wiring by
exhaustion: vertices are placed one at a time in depth-first order, edge
routes are enumerated shortest-first with lexicographic moves, and a
rising volume target turns the first feasible target into the optimum.
Paths may cross at lattice points (only vertex injectivity and
edge-disjointness are required), so the search space is the full
coarse-1 definition, not just planar embeddings.

`exhaustive_peak_ratio` enumerates every mass-ordered subdivision plan
of a reduction at a fixed total and wires each one, giving the true
finite-total maximum of vol/|tree|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError
from .analysis import RatioEstimate, plan_ratio
from .trees import OrderedTree, Reduction, SubdivisionPlan
from .wiring import GridWiring, bounding_box, validate_k_wiring, volume, wire

_MOVES = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass
class OracleResult:
    """Certified-optimal wiring of a tiny tree."""

    best_volume: int
    witness: GridWiring
    explored: int
    box_half_width: int
    node_budget: int

    def meta(self):
        return {"oracle": {"explored": self.explored,
                           "box_half_width": self.box_half_width,
                           "node_budget": self.node_budget}}


def optimal_wiring(tree: OrderedTree, box_half_width: int | None = None, *,
                   max_vertices: int = 7,
                   node_budget: int = 20_000_000) -> OracleResult:
    """Minimum-volume coarse 1-wiring of a tree, certified by exhaustion.

    The root is pinned to the origin and the first edge's first step to
    the closed north-east quadrant (a pure symmetry reduction).  The
    search box is the square |x|, |y| <= box_half_width, defaulting to
    the vertex count.  Exceeding `node_budget` raises BudgetError rather
    than returning a silent approximation.
    """
    n = tree.n
    if n > max_vertices:
        raise BudgetError(
            f"tree has {n} > {max_vertices} vertices; raise max_vertices "
            "to force the search")
    if box_half_width is None:
        box_half_width = n
    constructed = wire(tree)
    (minx, miny), (maxx, maxy) = bounding_box(constructed)
    if max(abs(minx), abs(maxx), abs(miny), abs(maxy)) > box_half_width:
        raise BudgetError("search box cannot hold the constructed incumbent")
    upper = volume(constructed)

    # depth-first vertex order; each vertex's parent precedes it
    par = tree.parents()
    order = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(tree.children(v)))

    explored = 0
    pos = {}
    vertex_points = set()
    points = set()
    used_edges = set()
    chosen_paths = {}

    def search(target):
        nonlocal explored
        pos.clear()
        vertex_points.clear()
        points.clear()
        used_edges.clear()
        chosen_paths.clear()
        pos[tree.root] = (0, 0)
        vertex_points.add((0, 0))
        points.add((0, 0))

        def place(idx):
            nonlocal explored
            if idx == n:
                return True
            v = order[idx]
            start = pos[par[v]]
            length_cap = 2 * target

            def walk(cur, remaining, trail):
                nonlocal explored
                explored += 1
                if explored > node_budget:
                    raise BudgetError(
                        f"node budget {node_budget} exceeded at volume "
                        f"target {target}")
                if remaining == 0:
                    if cur in vertex_points:
                        return False
                    pos[v] = cur
                    vertex_points.add(cur)
                    if place(idx + 1):
                        chosen_paths[v] = list(trail)
                        return True
                    del pos[v]
                    vertex_points.discard(cur)
                    return False
                for dx, dy in _MOVES:
                    if idx == 1 and len(trail) == 1 and (dx, dy) not in ((1, 0), (0, 1)):
                        continue  # symmetry: first step of the first edge
                    nxt = (cur[0] + dx, cur[1] + dy)
                    if abs(nxt[0]) > box_half_width or abs(nxt[1]) > box_half_width:
                        continue
                    edge = (cur, nxt) if cur < nxt else (nxt, cur)
                    if edge in used_edges:
                        continue
                    is_new = nxt not in points
                    if is_new and len(points) + 1 > target:
                        continue
                    used_edges.add(edge)
                    if is_new:
                        points.add(nxt)
                    trail.append(nxt)
                    if walk(nxt, remaining - 1, trail):
                        return True
                    trail.pop()
                    used_edges.discard(edge)
                    if is_new:
                        points.discard(nxt)
                return False

            # shortest routes first; a longer route never beats a shorter
            # one at the same target, but completeness needs them all
            for length in range(1, length_cap + 1):
                if walk(start, length, [start]):
                    return True
            return False

        return place(1) if n > 1 else True

    for target in range(n, upper):
        if search(target):
            witness = _witness(tree, order, par, pos, chosen_paths)
            report = validate_k_wiring(witness, 1)
            if not report.passed or volume(witness) != target:
                raise AssertionError("oracle produced an invalid witness")
            return OracleResult(target, witness, explored, box_half_width,
                                node_budget)
    return OracleResult(upper, constructed, explored, box_half_width,
                        node_budget)


def _witness(tree, order, par, pos, chosen_paths):
    vertices = [pos[v] for v in range(tree.n)]
    edges = []
    for v in range(tree.n):
        for w in tree.children(v):
            edges.append((v, w, chosen_paths[w]))
    return GridWiring.from_parts(vertices, edges)


def _mass_plans(red: Reduction, total: int):
    """All per-leaf count tuples with the given total, left mass >= right
    at every node, in leftmost-heavy-first order."""
    tree = red.tree

    def gen(v, budget):
        kids = tree.children(v)
        if not kids:
            yield (budget,)
            return
        a, b = kids
        for right in range(budget // 2 + 1):
            for left_part in gen(a, budget - right):
                for right_part in gen(b, right):
                    yield left_part + right_part

    return gen(tree.root, total)


def exhaustive_peak_ratio(red: Reduction, total: int, *,
                          plan_budget: int = 500_000) -> RatioEstimate:
    """True maximum of vol/|tree| over all mass-ordered plans of a total.

    Plans are enumerated completely and each subdivided tree is wired;
    ties keep the leftmost-heavy plan.  Raises BudgetError if the plan
    count exceeds `plan_budget`.
    """
    if total < 0:
        raise ValueError("total must be >= 0")
    best_plan = None
    best_ratio = None
    seen = 0
    for counts in _mass_plans(red, total):
        seen += 1
        if seen > plan_budget:
            raise BudgetError(
                f"more than {plan_budget} plans at total {total}")
        ratio = plan_ratio(red, counts)
        if best_ratio is None or ratio > best_ratio:
            best_ratio = ratio
            best_plan = counts
    return RatioEstimate(red, total, SubdivisionPlan.from_counts(best_plan),
                         best_ratio)
