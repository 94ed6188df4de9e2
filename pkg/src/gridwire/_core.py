"""Kernel backend selection: compiled extension if present, else pure Python.

Set GRIDWIRE_PURE=1 to force the pure backend (used by the benchmark and
the backend-parity tests).
"""

import os

if os.environ.get("GRIDWIRE_PURE"):
    from . import _core_py as _impl
else:
    try:
        from . import _core_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = _impl.BACKEND

layout = _impl.layout
build_edges = _impl.build_edges
expand_paths = _impl.expand_paths
count_distinct = _impl.count_distinct
max_multiplicity = _impl.max_multiplicity
duplicate_points = _impl.duplicate_points
max_edge_usage = _impl.max_edge_usage
overused_edges = _impl.overused_edges
check_paths = _impl.check_paths
taxicab_sum = _impl.taxicab_sum
quadrant_violation = _impl.quadrant_violation
