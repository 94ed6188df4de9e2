"""Extremal subdivision analysis: exact values, recurrences, estimators."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gridwire as gw
from gridwire.analysis import measured_plan_volume
from gridwire.errors import BudgetError, OrderingError


def s4_reduction():
    return gw.reduce(gw.generate_sn(4))


def test_popcount():
    assert gw.popcount(0) == 0
    assert gw.popcount(3) == 2
    assert gw.popcount(5) == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 40))
def test_popcount_matches_binary_expansion(x):
    assert gw.popcount(x) == bin(x).count("1")


def test_leaf_rotations():
    assert gw.leaf_rotations(0) == 2
    assert gw.leaf_rotations(1) == 3
    assert gw.leaf_rotations(3) == 4


def test_leaf_cost_upper():
    assert gw.leaf_cost_upper(0) == 2
    assert gw.leaf_cost_upper(2) == 2
    assert gw.leaf_cost_upper(3) == 3


def test_spiral_leaf_positions():
    assert gw.spiral_leaf_positions(4) == [0, 2, 3]
    assert gw.spiral_leaf_positions(5) == [0, 4, 6, 7]
    for n in range(3, 13):
        assert gw.spiral_leaf_positions(n)[-1] == 2 ** (n - 2) - 1


def test_spiral_plan_n4():
    plan = gw.spiral_plan(4)
    assert plan.proportions == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8),
                                Fraction(0), Fraction(1, 16), Fraction(1, 16))


def test_spiral_plan_sums_to_one():
    for n in range(3, 11):
        assert sum(gw.spiral_plan(n).proportions) == 1


def test_scaled_spiral_plan_passes_subdivide():
    for n in range(3, 7):
        red = gw.reduce(gw.generate_sn(n))
        scaled = gw.scale_plan(red, gw.spiral_plan(n), 2 ** 10)
        assert scaled.total == 2 ** 10
        t = gw.subdivide(red, scaled)      # would raise on an ordering break
        assert gw.reduce(t) == red


def test_scale_plan_rejects_tiny_totals():
    red = s4_reduction()
    with pytest.raises(OrderingError):
        gw.scale_plan(red, gw.spiral_plan(4), 4)


def test_spiral_ratio_series_values():
    assert gw.spiral_ratio_series(3) == Fraction(5, 4)
    assert gw.spiral_ratio_series(4) == Fraction(21, 16)


def test_spiral_ratio_series_bounded_and_monotone():
    values = [gw.spiral_ratio_series(n) for n in range(3, 21)]
    assert all(v <= Fraction(4, 3) for v in values)
    assert all(a <= b for a, b in zip(values, values[1:]))
    # approaches 4/3 from below
    assert Fraction(4, 3) - values[-1] < Fraction(1, 10000)


def test_spiral_ratio_closed_form_disagrees_at_4():
    series, closed, differ = gw.spiral_ratio_forms(4)
    assert series == Fraction(21, 16)
    assert closed == Fraction(61, 48)
    assert differ
    for n in range(3, 21):
        assert gw.spiral_ratio_closed_form(n) <= Fraction(4, 3)


def test_recurrence_table_values():
    table = gw.recurrence_table(30)
    assert table.values[0] == 1 and table.values[1] == 1
    assert table.values[2] == Fraction(4, 3)
    assert table.values[3] == Fraction(3, 2)
    assert table.values[4] == Fraction(5, 3)
    assert all(a <= b for a, b in zip(table.values, table.values[1:]))
    assert all(v <= Fraction(7, 3) for v in table.values)
    # refined sequence never exceeds the bound form
    assert all(r <= v for r, v in zip(table.refined, table.values))
    assert all(r <= Fraction(7, 3) for r in table.refined)


def test_recurrence_approaches_limit():
    table = gw.recurrence_table(40)
    assert Fraction(7, 3) - table.values[40] < Fraction(1, 1000)


def test_plan_volume_matches_wired_volume():
    red = s4_reduction()
    for counts in ([0] * 6, [5, 2, 1, 0, 1, 1], [8, 4, 2, 0, 1, 1],
                   [12, 6, 3, 1, 1, 1]):
        assert gw.plan_volume(red, counts) == measured_plan_volume(red, counts)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=2, max_value=16),
       seed=st.integers(min_value=0, max_value=2 ** 32),
       data=st.data())
def test_plan_volume_matches_wired_volume_random(n, seed, data):
    red = gw.reduce(gw.random_tree(n, seed))
    counts = [data.draw(st.integers(min_value=0, max_value=5))
              for _ in range(red.leaf_count)]
    assert gw.plan_volume(red, counts) == measured_plan_volume(red, counts)


def test_marginal_volume_single_leaf_reduction():
    red = gw.reduce(gw.generate_path(3))
    for base in ([0], [5], [12]):
        assert gw.marginal_volume(red, 0, base) == 1


def test_marginal_volume_shadowing():
    red = s4_reduction()
    # spiral leaves sit at positions 2..5 of the leaf order
    base = [40, 20, 5, 1, 3, 0]      # spiral leaf 2 ahead of spiral leaf 1
    assert gw.marginal_volume(red, 3, base) == 1
    base = [40, 20, 5, 3, 1, 0]      # roles reversed
    assert gw.marginal_volume(red, 4, base) == 1


def test_marginal_volume_leaf0_is_two():
    red = s4_reduction()
    assert gw.marginal_volume(red, 2, [40, 20, 4, 4, 4, 4]) == 2


def test_marginal_volume_at_least_one():
    red = s4_reduction()
    # slack at every node so each single increment stays mass-ordered
    base = [24, 12, 4, 2, 3, 1]
    for leaf in range(6):
        assert gw.marginal_volume(red, leaf, base) >= 1


def test_marginal_volume_rejects_illegal_base():
    red = s4_reduction()
    with pytest.raises(OrderingError):
        gw.marginal_volume(red, 0, [0, 5, 0, 0, 0, 0])


def test_leaf_cost_table_respects_upper_bounds():
    for n in (3, 4, 5):
        for cost in gw.leaf_cost_table(n):
            assert 1 <= cost.v_empirical <= cost.v_upper
            assert cost.rotations == gw.popcount(cost.leaf_index) + 2


def test_estimate_zero_budget_ratio():
    red = s4_reduction()
    est = gw.estimate_peak_ratio(red, 0)
    assert est.ratio == Fraction(gw.plan_volume(red, [0] * 6), red.tree.n + 1)


def test_estimate_single_leaf_ratio_is_one():
    red = gw.reduce(gw.generate_path(2))
    for total in (0, 5, 40):
        assert gw.estimate_peak_ratio(red, total).ratio == 1


def test_greedy_is_a_deterministic_lower_estimate():
    cherry = gw.reduce(gw.parse_tree("(()())"))
    b2 = gw.reduce(gw.generate_bn(2))
    for red, total in ((cherry, 6), (b2, 4), (b2, 8)):
        greedy = gw.estimate_peak_ratio(red, total, strategy="greedy")
        exact = gw.estimate_peak_ratio(red, total, strategy="exhaustive")
        assert greedy.ratio <= exact.ratio
        again = gw.estimate_peak_ratio(red, total, strategy="greedy")
        assert again.plan.counts == greedy.plan.counts
    # on a family with one dominant leaf the greedy walk is exact
    assert gw.estimate_peak_ratio(cherry, 6, strategy="greedy").ratio == \
        gw.estimate_peak_ratio(cherry, 6, strategy="exhaustive").ratio == 1


def test_estimate_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        gw.estimate_peak_ratio(s4_reduction(), 4, strategy="magic")


def test_scaled_spiral_ratio_converges_to_21_16():
    red = s4_reduction()
    target = Fraction(21, 16)
    plan = gw.scale_plan(red, gw.spiral_plan(4), 2 ** 12)
    ratio = gw.plan_ratio(red, plan.counts)
    assert abs(ratio - target) < Fraction(1, 200)


def test_leaf_only_normalize_identity_on_leaf_plans():
    red = s4_reduction()
    lo, _ = red.leaf_ranges()
    edge_counts = {red.leaves[0]: 3, red.leaves[4]: 2}
    plan = gw.leaf_only_normalize(red, edge_counts)
    assert plan.counts == (3, 0, 0, 0, 2, 0)


def test_leaf_only_normalize_moves_to_leftmost_leaf():
    red = gw.reduce(gw.generate_bn(2))
    tree = red.tree
    internal = [v for v in range(tree.n)
                if not tree.is_leaf(v) and v != tree.root]
    edge_counts = {internal[0]: 3}
    plan = gw.leaf_only_normalize(red, edge_counts)
    lo, _ = red.leaf_ranges()
    expect = [0] * red.leaf_count
    expect[lo[internal[0]]] = 3
    assert plan.counts == tuple(expect)


def test_leaf_only_normalize_never_loses_volume():
    # wiring an internal-edge subdivision directly, against the normalized
    # leaf-only plan of the same total
    from gridwire.trees import _Builder

    def tree_with_edge_subdivisions(red, edge_counts):
        src = red.tree
        b = _Builder()
        top = b.add()
        stack = [(src.root, top)]
        while stack:
            v, parent = stack.pop()
            chain_top = b.chain(parent, edge_counts.get(v, 0))
            node = b.add(chain_top)
            for w in reversed(src.children(v)):
                stack.append((w, node))
        return b.tree()

    import random
    rnd = random.Random(5)
    for _ in range(120):
        red = gw.reduce(gw.random_tree(rnd.randint(3, 14), rnd.randint(0, 10 ** 6)))
        if red.tree.n == 1:
            continue
        edge_counts = {v: rnd.randint(0, 3) for v in range(1, red.tree.n)}
        direct = gw.volume(gw.wire(tree_with_edge_subdivisions(red, edge_counts),
                                   preserve_order=True))
        plan = gw.leaf_only_normalize(red, edge_counts)
        assert gw.plan_volume(red, plan.counts) >= direct


def test_lp_upper_bound_values():
    assert gw.lp_upper_bound(s4_reduction()) == Fraction(21, 16)
    assert gw.lp_upper_bound(gw.reduce(gw.generate_bn(2))) == Fraction(5, 4)
    assert gw.lp_upper_bound(gw.reduce(gw.generate_path(5))) == 1


def test_exhaustive_ratio_stays_below_lp_bound_for_bn():
    red = gw.reduce(gw.generate_bn(2))
    lp = gw.lp_upper_bound(red)
    for total in (0, 4, 8, 16, 24):
        assert gw.exhaustive_peak_ratio(red, total).ratio <= lp


def test_subtree_monotonicity_of_estimates():
    cherry = gw.reduce(gw.parse_tree("(()())"))
    b2 = gw.reduce(gw.generate_bn(2))
    b3 = gw.reduce(gw.generate_bn(3))
    for total in (4, 8, 12):
        rc = gw.exhaustive_peak_ratio(cherry, total).ratio
        r2 = gw.exhaustive_peak_ratio(b2, total).ratio
        r3 = gw.exhaustive_peak_ratio(b3, total).ratio
        assert rc <= r2 <= r3


def test_estimates_dominated_by_refined_recurrence():
    # branching depth L pins the dominating family member; the refined
    # sequence bounds every measured ratio on a fixed random corpus
    table = gw.recurrence_table(12)
    for seed in range(40):
        red = gw.reduce(gw.random_tree(4 + seed % 9, seed))
        depth = gw.compute_L(red)
        if depth < 1:
            continue
        est = gw.exhaustive_peak_ratio(red, 12, plan_budget=10 ** 6)
        assert est.ratio <= table.refined[depth]


def test_spiral_plan_smallest_index():
    assert gw.spiral_plan(3).proportions == (
        Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8))
    with pytest.raises(ValueError):
        gw.spiral_plan(2)


def test_exhaustive_budget_error_suggests_greedy():
    red = gw.reduce(gw.generate_bn(3))
    with pytest.raises(BudgetError, match="greedy"):
        gw.estimate_peak_ratio(red, 40, budget=10)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(min_value=2, max_value=14),
       seed=st.integers(min_value=0, max_value=2 ** 32),
       data=st.data())
def test_public_subdivide_pipeline_matches_evaluator(n, seed, data):
    # for plans that pass the full size-ordering gate, the public
    # subdivide+wire pipeline and the stemless evaluator agree exactly,
    # and reordering inside wire() is a no-op
    red = gw.reduce(gw.random_tree(n, seed))
    counts = [data.draw(st.integers(min_value=0, max_value=6))
              for _ in range(red.leaf_count)]
    try:
        tree = gw.subdivide(red, gw.SubdivisionPlan.from_counts(counts))
    except OrderingError:
        return
    w = gw.wire(tree)
    assert gw.volume(w) == gw.plan_volume(red, counts, stem=False)
    assert gw.to_canonical_json(w) == \
        gw.to_canonical_json(gw.wire(tree, preserve_order=True))
