"""Extremal analysis of the placement rule: how large vol/|tree| can get.

For a fixed reduction R the extremal ratio is approached by subdividing
leaf edges.  Plans are evaluated on the tree hung below a degree-1 stem
vertex (the analysis convention: the recursion starts at an order-1
root), with the child order pinned to R.  The evaluator reproduces the
constructed wiring's volume exactly through the same box/clearance
recursion the placement uses, without materializing points, so marginal
volumes and exhaustive plan sweeps stay cheap at any subdivision count.

All arithmetic here is exact (ints and fractions); the only approximation
anywhere is the finite subdivision total N, whose O(1/N) slack the
callers report explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, OrderingError
from .trees import (Reduction, SubdivisionPlan, _plan_counts,
                    _subdivide_unchecked, generate_sn, reduce)
from .wiring import volume, wire


def _counts_of(red, plan):
    """Normalize a SubdivisionPlan or plain count sequence to a tuple."""
    if isinstance(plan, SubdivisionPlan):
        return _plan_counts(red, plan)
    return _plan_counts(red, SubdivisionPlan.from_counts(tuple(plan)))


def popcount(x: int) -> int:
    """Number of ones in the binary expansion of x."""
    if x < 0:
        raise ValueError("x must be >= 0")
    return x.bit_count()


def leaf_rotations(l: int) -> int:
    """Quarter-turns the l-th spiral leaf's segment has undergone."""
    return popcount(l) + 2


def leaf_cost_upper(l: int) -> int:
    """Upper bound on the volume added per subdivision of spiral leaf l."""
    return 2 + popcount(l) // 2


def spiral_leaf_positions(n: int) -> list:
    """Spiral leaf positions that receive mass in the extremal assignment.

    Position p_j = 2**(n-2) - 2**(n-2-j) = sum of 2**i for
    n-2-j <= i <= n-3; the list is [0, p_1, ..., p_{n-2}] and its last
    entry is always 2**(n-2) - 1 (the all-ones position).
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    return [0] + [2 ** (n - 2) - 2 ** (n - 2 - j) for j in range(1, n - 1)]


def spiral_plan(n: int) -> SubdivisionPlan:
    """Extremal proportional plan over the leaves of reduce(sn-tree).

    The two straight-section leaves take 1/2 and 1/4 of the mass; the
    spiral quarter assigns 1/2 to spiral position 0, 1/2**(j+1) to p_j
    for 1 <= j <= n-3 and 1/2**(n-2) to the final position p_{n-2}.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    spiral = [Fraction(0)] * (2 ** (n - 2))
    spiral[0] = Fraction(1, 2)
    positions = spiral_leaf_positions(n)
    for j in range(1, n - 2):
        spiral[positions[j]] = Fraction(1, 2 ** (j + 1))
    spiral[positions[n - 2]] += Fraction(1, 2 ** (n - 2))
    props = [Fraction(1, 2), Fraction(1, 4)]
    props.extend(s / 4 for s in spiral)
    return SubdivisionPlan.from_proportions(props)


def scale_plan(red: Reduction, plan: SubdivisionPlan, total: int) -> SubdivisionPlan:
    """Integer plan of the given total closest to the proportions.

    Budgets are split top-down; at every two-child node the left share
    is raised to the least value that keeps the subdivided tree
    left-heavy, so the result always passes :func:`gridwire.trees.subdivide`.
    Remainders go to the leftmost side.  Raises OrderingError when the
    total is too small to repair the structural imbalance.
    """
    if plan.proportions is None:
        raise ValueError("scale_plan expects a proportional plan")
    if len(plan.proportions) != red.leaf_count:
        raise ValueError("plan does not match the reduction's leaves")
    if total < 0:
        raise ValueError("total must be >= 0")
    tree = red.tree
    lo, hi = red.leaf_ranges()
    struct = red.struct_sizes()
    prefix = [Fraction(0)]
    for p in plan.proportions:
        prefix.append(prefix[-1] + p)

    counts = [0] * red.leaf_count
    stack = [(tree.root, total)]
    while stack:
        v, budget = stack.pop()
        kids = tree.children(v)
        if not kids:
            counts[lo[v]] = budget
            continue
        a, b = kids
        wa = prefix[hi[a]] - prefix[lo[a]]
        wb = prefix[hi[b]] - prefix[lo[b]]
        if wa + wb > 0:
            left = budget - int(budget * wb / (wa + wb))  # remainder leftward
        else:
            left = budget - budget // 2
        least = (struct[b] - struct[a] + budget + 1) // 2
        left = max(left, least, 0)
        if left > budget:
            raise OrderingError(
                f"total {total} cannot keep node {v} left-heavy")
        stack.append((a, left))
        stack.append((b, budget - left))
    return SubdivisionPlan.from_counts(counts)


def mass_ordering_violation(red: Reduction, counts) -> int | None:
    """First node whose right leaves get more mass than its left, else None.

    This is the limit form of the size ordering: structural vertex counts
    vanish against the subdivision mass as the total grows, leaving pure
    mass comparisons.  Extremal-ratio searches use this polytope.
    """
    lo, hi = red.leaf_ranges()
    prefix = [0]
    for c in counts:
        prefix.append(prefix[-1] + c)
    tree = red.tree
    for v in range(tree.n):
        kids = tree.children(v)
        if len(kids) == 2:
            a, b = kids
            if prefix[hi[a]] - prefix[lo[a]] < prefix[hi[b]] - prefix[lo[b]]:
                return v
    return None


def plan_tree(red: Reduction, counts, stem: bool = True):
    """Materialize the subdivided tree a plan describes (stem on top)."""
    return _subdivide_unchecked(red, _counts_of(red, counts), stem=stem)


def plan_volume(red: Reduction, counts, stem: bool = True) -> int:
    """Volume of the placement of the plan's tree, child order as in R.

    Computed by the same clearance/bounding-box recursion the placement
    performs, one step per reduction node; equals
    volume(wire(plan_tree(...), preserve_order=True)) exactly.
    """
    counts = _counts_of(red, counts)
    tree = red.tree
    leaf_pos = {v: i for i, v in enumerate(red.leaves)}
    memo = {}
    for v in reversed(tree._bfs_order()):
        kids = tree.children(v)
        if not kids:
            k = counts[leaf_pos[v]]
            memo[v] = (0, 0, 0, k, k)
            continue
        a, b = kids
        aminx, amaxx, aminy, amaxy, asum = memo[a]
        bminx, bmaxx, bminy, bmaxy, bsum = memo[b]
        dy = -aminy + 1
        dx = -bminy + 1
        minx = min(0, aminx, bminy + dx)
        maxx = max(0, amaxx, bmaxy + dx)
        miny = min(0, -bmaxx)
        maxy = max(0, amaxy + dy, -bminx)
        memo[v] = (minx, maxx, miny, maxy, asum + bsum + dx + dy)
    minx, maxx, miny, maxy, esum = memo[tree.root]
    vol = 1 + esum
    if stem:
        vol += -miny + 1
    return vol


def plan_size(red: Reduction, counts, stem: bool = True) -> int:
    """Vertex count of the plan's tree."""
    return red.tree.n + sum(_counts_of(red, counts)) + (1 if stem else 0)


def plan_ratio(red: Reduction, counts, stem: bool = True) -> Fraction:
    """Exact vol/|tree| for a plan."""
    return Fraction(plan_volume(red, counts, stem), plan_size(red, counts, stem))


def marginal_volume(red: Reduction, leaf: int, base) -> int:
    """Volume added by one extra subdivision at a leaf, in context.

    `leaf` is a position in the reduction's left-to-right leaf order and
    `base` an integer plan; both the base and the incremented plan must
    respect the mass ordering.  Shadowing is captured exactly: a leaf
    whose clearance a sibling's longer segment already pays for adds
    only its own image point.
    """
    counts = list(_counts_of(red, base))
    bumped = list(counts)
    bumped[leaf] += 1
    for c in (counts, bumped):
        bad = mass_ordering_violation(red, c)
        if bad is not None:
            raise OrderingError(f"plan breaks the mass ordering at node {bad}")
    return plan_volume(red, bumped) - plan_volume(red, counts)


@dataclass
class RatioEstimate:
    """A witnessed lower estimate of a reduction's extremal ratio."""

    reduction: Reduction
    total_subdivisions: int
    plan: SubdivisionPlan
    ratio: Fraction


def estimate_peak_ratio(red: Reduction, total: int, strategy: str = "exhaustive",
                        budget: int = 500_000) -> RatioEstimate:
    """Best vol/|tree| over integer plans with the given total.

    `exhaustive` enumerates every mass-ordered plan (true maximum for
    this total, budget permitting); `greedy` repeatedly adds one
    subdivision to the legal leaf with the highest marginal volume,
    ties to the leftmost leaf.
    """
    if strategy == "exhaustive":
        from .oracle import exhaustive_peak_ratio
        try:
            return exhaustive_peak_ratio(red, total, plan_budget=budget)
        except BudgetError as exc:
            raise BudgetError(f"{exc}; use strategy='greedy'") from None
    if strategy != "greedy":
        raise ValueError("strategy must be 'exhaustive' or 'greedy'")
    counts = [0] * red.leaf_count
    vol = plan_volume(red, counts)
    for _ in range(total):
        best = None
        for i in range(red.leaf_count):
            counts[i] += 1
            if mass_ordering_violation(red, counts) is None:
                gain = plan_volume(red, counts) - vol
                if best is None or gain > best[0]:
                    best = (gain, i)
            counts[i] -= 1
        if best is None:
            raise OrderingError("no legal move; mass ordering is stuck")
        counts[best[1]] += 1
        vol += best[0]
    plan = SubdivisionPlan.from_counts(counts)
    return RatioEstimate(red, total, plan, plan_ratio(red, counts))


def leaf_only_normalize(red: Reduction, edge_counts) -> SubdivisionPlan:
    """Move subdivision counts from internal edges to leaf edges.

    `edge_counts` maps a reduction node id (the lower endpoint of its
    parent edge) to a count.  Counts on internal edges migrate to the
    leftmost leaf below the edge; leaf-edge counts stay.  The wired
    volume never decreases under this move.
    """
    lo, hi = red.leaf_ranges()
    counts = [0] * red.leaf_count
    for v, c in edge_counts.items():
        if c < 0:
            raise ValueError("edge counts must be non-negative")
        if v == red.tree.root:
            raise ValueError("the root has no parent edge")
        if not 0 <= v < red.tree.n:
            raise ValueError(f"unknown node {v}")
        counts[lo[v]] += c
    return SubdivisionPlan.from_counts(counts)


def lp_upper_bound(red: Reduction) -> Fraction:
    """Linear-objective bound on the extremal ratio of a reduction.

    Each leaf gets the per-subdivision cost cap 2 + floor((r - 2)/2)
    (1 when r < 2) from its quarter-turn count r, and mass is split
    under the ordering constraint; at every node the optimum is either
    all-left or an even split, so the bound folds bottom-up.
    """
    tree = red.tree
    rots = {tree.root: 0}
    best = {}
    for v in tree._bfs_order():
        kids = tree.children(v)
        if kids:
            rots[kids[0]] = rots[v]
            rots[kids[1]] = rots[v] + 1
    for v in reversed(tree._bfs_order()):
        kids = tree.children(v)
        if not kids:
            r = rots[v]
            best[v] = Fraction(1) if r < 2 else Fraction(2 + (r - 2) // 2)
        else:
            a, b = kids
            best[v] = max(best[a], Fraction(best[a] + best[b], 2))
    return best[tree.root]


def spiral_ratio_series(n: int) -> Fraction:
    """Extremal ratio of the spiral family as the explicit series.

    1 + (2 + floor((n-2)/2)) / 2**n + sum over 1 <= j <= n-3 of
    (2 + floor(j/2)) / 2**(j+3).  Values stay below 4/3 and increase
    toward it.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    s = Fraction(1) + Fraction(2 + (n - 2) // 2, 2 ** n)
    for j in range(1, n - 2):
        s += Fraction(2 + j // 2, 2 ** (j + 3))
    return s


def spiral_ratio_closed_form(n: int) -> Fraction:
    """The published closed form 4/3 - (2 + floor((n-1)/2) - floor(n/2)) / 2**n.

    Disagrees with :func:`spiral_ratio_series` for small n (61/48 vs
    21/16 at n = 4); both values are reported side by side, never
    silently reconciled.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    return Fraction(4, 3) - Fraction(2 + (n - 1) // 2 - n // 2, 2 ** n)


def spiral_ratio_forms(n: int):
    """(series value, closed-form value, disagreement flag)."""
    a = spiral_ratio_series(n)
    b = spiral_ratio_closed_form(n)
    return a, b, a != b


@dataclass
class RecurrenceTable:
    """Exact upper-bound sequence for the family ratio, and a refinement.

    values[n] follows V(n) = 7/12 + V(n-1)/2 + V(n-2)/4 with
    V(0) = V(1) = 1 (monotone, limit 7/3).  refined[n] replaces the 4/3
    spiral bound by the exact series value via
    V(n) = (V(n-1) - 1)/2 + (V(n-2) - 1)/4 + spiral_ratio_series(n).
    """

    values: list
    refined: list

    LIMIT = Fraction(7, 3)


def recurrence_table(n_max: int) -> RecurrenceTable:
    """Evaluate the ratio recurrence exactly up to n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    values = [Fraction(1), Fraction(1)]
    for n in range(2, n_max + 1):
        values.append(Fraction(7, 12) + values[n - 1] / 2 + values[n - 2] / 4)
    refined = [Fraction(1), Fraction(1)]
    for n in range(2, n_max + 1):
        spiral = Fraction(4, 3) if n < 3 else spiral_ratio_series(n)
        refined.append((refined[n - 1] - 1) / 2 + (refined[n - 2] - 1) / 4 + spiral)
    return RecurrenceTable(values=values, refined=refined)


@dataclass
class LeafCost:
    """Per-spiral-leaf cost: rotation count, cap, and measured marginal."""

    leaf_index: int
    rotations: int
    v_upper: int
    v_empirical: int


def leaf_cost_table(n: int, per_leaf: int = 8) -> list:
    """Measured marginal volume of every spiral leaf at a near-balanced base.

    The base staircases gently leftward (leaf l gets per_leaf + count - l)
    and gives the two straight-section leaves enough slack that every
    single increment stays mass-ordered.
    """
    red = reduce(generate_sn(n))
    spiral_count = 2 ** (n - 2)
    spiral_base = [per_leaf + spiral_count - l for l in range(spiral_count)]
    sp_total = sum(spiral_base)
    base = [2 * sp_total + 4, sp_total + 2] + spiral_base
    out = []
    for l in range(spiral_count):
        out.append(LeafCost(
            leaf_index=l,
            rotations=leaf_rotations(l),
            v_upper=leaf_cost_upper(l),
            v_empirical=marginal_volume(red, 2 + l, base),
        ))
    return out


def measured_plan_volume(red: Reduction, counts, stem: bool = True) -> int:
    """Volume of the materialized, actually-wired plan tree.

    Slow path used to cross-check :func:`plan_volume`; both must agree
    on every plan.
    """
    return volume(wire(plan_tree(red, counts, stem), preserve_order=True))
