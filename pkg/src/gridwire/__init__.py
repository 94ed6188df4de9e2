"""gridwire: low-volume embeddings of bounded-degree trees into the lattice.

Build trees (tree families, random sampling, parsing), embed them into
the integer lattice with a recursive placement whose image meets at most
ceil(7n/3) lattice vertices, validate and measure embeddings, analyze
extremal subdivision families with exact arithmetic, and certify tiny
instances against a brute-force oracle.
"""

__version__ = "0.1.0"

from ._core import BACKEND
from .errors import (BudgetError, DegreeError, GridwireError, OrderingError,
                     ParseError)
from .trees import (OrderedTree, Reduction, SubdivisionPlan, compute_L,
                    count_trees, generate_bn, generate_path, generate_sn,
                    iter_trees, parse_tree, random_tree, reduce,
                    serialize_tree, subdivide, subtree_sizes)
from .wiring import (GridWiring, ValidationReport, bounding_box, conn,
                     from_canonical_json, quadrant_separation, rotate_cw,
                     to_canonical_json, translate, validate_k_wiring, volume,
                     volume_by_formula, wire)
from .analysis import (LeafCost, RatioEstimate, RecurrenceTable,
                       estimate_peak_ratio, leaf_cost_table, leaf_cost_upper,
                       leaf_only_normalize, leaf_rotations, lp_upper_bound,
                       marginal_volume, mass_ordering_violation, plan_ratio,
                       plan_size, plan_tree, plan_volume, popcount,
                       recurrence_table, scale_plan, spiral_leaf_positions,
                       spiral_plan, spiral_ratio_closed_form,
                       spiral_ratio_forms, spiral_ratio_series)
from .oracle import OracleResult, exhaustive_peak_ratio, optimal_wiring
