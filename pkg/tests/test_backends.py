"""Parity between the compiled core and the pure-Python fallback."""

import pytest

import gridwire as gw
from gridwire import _core, _core_py

compiled = pytest.importorskip("gridwire._core_c")


def _trees():
    yield gw.parse_tree("()")
    yield gw.generate_path(9)
    yield gw.generate_bn(4)
    yield gw.generate_sn(4)
    for seed in range(6):
        yield gw.random_tree(200, seed)


@pytest.mark.parametrize("reorder", [True, False])
def test_layout_parity(reorder):
    for t in _trees():
        got = compiled.layout(t.c1, t.c2, t.root, reorder)
        want = _core_py.layout(t.c1, t.c2, t.root, reorder)
        assert [list(a) for a in got] == [list(a) for a in want]


def test_pipeline_parity():
    for t in _trees():
        vx, vy, rot, o1, o2 = compiled.layout(t.c1, t.c2, t.root, True)
        eu_c, ev_c = compiled.build_edges(t.c1, t.c2)
        eu_p, ev_p = _core_py.build_edges(t.c1, t.c2)
        assert list(eu_c) == list(eu_p) and list(ev_c) == list(ev_p)
        px_c, py_c, off_c = compiled.expand_paths(eu_c, ev_c, vx, vy)
        px_p, py_p, off_p = _core_py.expand_paths(eu_p, ev_p, vx, vy)
        assert list(px_c) == list(px_p)
        assert list(py_c) == list(py_p)
        assert list(off_c) == list(off_p)
        ax, ay = vx + px_c, vy + py_c
        assert compiled.count_distinct(ax, ay) == _core_py.count_distinct(ax, ay)
        assert compiled.max_multiplicity(vx, vy) == _core_py.max_multiplicity(vx, vy)
        assert compiled.max_edge_usage(px_c, py_c, off_c) == \
            _core_py.max_edge_usage(px_p, py_p, off_p)
        assert compiled.taxicab_sum(eu_c, ev_c, vx, vy) == \
            _core_py.taxicab_sum(eu_p, ev_p, vx, vy)
        assert compiled.check_paths(px_c, py_c, off_c, eu_c, ev_c, vx, vy) == \
            _core_py.check_paths(px_p, py_p, off_p, eu_p, ev_p, vx, vy)
        assert compiled.quadrant_violation(t.root, o1, o2, rot, vx, vy) == \
            _core_py.quadrant_violation(t.root, o1, o2, rot, vx, vy)


def test_edge_usage_parity_on_pathological_paths():
    w = gw.GridWiring.from_parts(
        [(0, 0), (0, 1), (1, 1)],
        [(0, 1, [(0, 0), (0, 1)]),
         (1, 2, [(0, 1), (0, 0), (0, 1), (1, 1)])])
    assert compiled.max_edge_usage(w.px, w.py, w.off) == \
        _core_py.max_edge_usage(w.px, w.py, w.off) == 2


def test_selected_backend_is_reported():
    assert _core.BACKEND in ("compiled", "pure")
    assert gw.BACKEND == _core.BACKEND
