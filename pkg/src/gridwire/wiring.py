"""Recursive lattice placement, plus measurement and validation of embeddings.

The placement rule: the root goes to (0, 0); an only (or larger) child's
wiring is copied upward, shifted just high enough to clear the x-axis;
a second child's wiring is rotated a quarter-turn clockwise and shifted
just far enough right to clear the y-axis.  Straight axis segments
connect each child's root to its parent.  The resulting image meets
every lattice vertex at most once and uses every lattice edge at most
once, and its volume (distinct lattice vertices met) stays below 7/3
times the vertex count.
"""

from __future__ import annotations

import json
from array import array
from dataclasses import dataclass, field

from . import _core
from .trees import OrderedTree

# compiled kernels key points into 64 bits; beyond this we fall back to
# pure-Python counting (translate() can move coordinates arbitrarily far)
_COORD_LIMIT = 2 ** 30 - 2


class GridWiring:
    """A lattice embedding: vertex images plus one lattice path per edge.

    Vertex images live in `vx`/`vy` (indexed by node), edge endpoints in
    `eu`/`ev`, and the concatenated per-edge path points in `px`/`py`
    with `off[i]:off[i+1]` delimiting edge i.  `labels` carries the
    external node names used in serialized form.
    """

    __slots__ = ("labels", "vx", "vy", "eu", "ev", "px", "py", "off",
                 "_frames", "_volume")

    def __init__(self, labels, vx, vy, eu, ev, px, py, off, frames=None):
        self.labels = labels
        self.vx = vx
        self.vy = vy
        self.eu = eu
        self.ev = ev
        self.px = px
        self.py = py
        self.off = off
        self._frames = frames  # (root, o1, o2, rot) for constructed wirings
        self._volume = None

    @classmethod
    def from_parts(cls, vertices, edges, labels=None):
        """Build from explicit vertex points and (u, v, path) triples."""
        n = len(vertices)
        vx = array("q", (p[0] for p in vertices))
        vy = array("q", (p[1] for p in vertices))
        eu, ev = array("q"), array("q")
        px, py = array("q"), array("q")
        off = array("q", [0])
        for u, v, path in edges:
            eu.append(u)
            ev.append(v)
            for x, y in path:
                px.append(x)
                py.append(y)
            off.append(len(px))
        if labels is None:
            labels = [str(i) for i in range(n)]
        return cls(labels, vx, vy, eu, ev, px, py, off)

    @property
    def n(self):
        return len(self.vx)

    @property
    def edge_count(self):
        return len(self.eu)

    def vertex_map(self):
        """Node label -> image point."""
        return {self.labels[i]: (self.vx[i], self.vy[i]) for i in range(self.n)}

    def edge_path(self, i):
        lo, hi = self.off[i], self.off[i + 1]
        return list(zip(self.px[lo:hi], self.py[lo:hi]))

    def edge_paths(self):
        """(from-label, to-label) -> list of lattice points."""
        return {(self.labels[self.eu[i]], self.labels[self.ev[i]]): self.edge_path(i)
                for i in range(self.edge_count)}

    def image_points(self):
        """All image points, vertices first, with repetitions."""
        yield from zip(self.vx, self.vy)
        yield from zip(self.px, self.py)

    def coords_in_kernel_range(self):
        vals = []
        for arr in (self.vx, self.vy, self.px, self.py):
            if len(arr):
                vals.append(min(arr))
                vals.append(max(arr))
        return all(-_COORD_LIMIT < v < _COORD_LIMIT for v in vals)

    def _transformed(self, fx, fy, rot_delta):
        vx = array("q", (fx(x, y) for x, y in zip(self.vx, self.vy)))
        vy = array("q", (fy(x, y) for x, y in zip(self.vx, self.vy)))
        px = array("q", (fx(x, y) for x, y in zip(self.px, self.py)))
        py = array("q", (fy(x, y) for x, y in zip(self.px, self.py)))
        frames = None
        if self._frames is not None:
            root, o1, o2, rot = self._frames
            if rot_delta:
                rot = array("q", ((r + rot_delta) % 4 for r in rot))
            frames = (root, o1, o2, rot)
        return GridWiring(self.labels, vx, vy, self.eu, self.ev, px, py,
                          self.off, frames)

    def __eq__(self, other):
        if not isinstance(other, GridWiring):
            return NotImplemented
        return (self.labels == other.labels and self.vx == other.vx
                and self.vy == other.vy and self.eu == other.eu
                and self.ev == other.ev and self.px == other.px
                and self.py == other.py and self.off == other.off)

    def __repr__(self):
        return f"GridWiring(n={self.n}, edges={self.edge_count})"


def wire(tree: OrderedTree, *, preserve_order=False) -> GridWiring:
    """Embed a tree into the lattice by the recursive placement rule.

    Children are ordered so the larger subtree is placed first (upward);
    ties keep the input order.  With `preserve_order` the input order is
    used as given, which reproduces a fixed reduction's geometry even
    for mass assignments on the boundary of the size ordering.
    """
    vx, vy, rot, o1, o2 = _core.layout(tree.c1, tree.c2, tree.root,
                                       not preserve_order)
    eu, ev = _core.build_edges(tree.c1, tree.c2)
    px, py, off = _core.expand_paths(eu, ev, vx, vy)
    labels = [str(i) for i in range(tree.n)]
    return GridWiring(labels, vx, vy, eu, ev, px, py, off,
                      frames=(tree.root, o1, o2, rot))


def conn(w: GridWiring) -> int:
    """Vertical clearance |min y| over every image point."""
    if not w.n:
        raise ValueError("empty wiring has no connector clearance")
    m = min(w.vy)
    if len(w.py):
        m = min(m, min(w.py))
    return abs(m)


def rotate_cw(w: GridWiring) -> GridWiring:
    """Quarter-turn clockwise about the origin: (x, y) -> (y, -x)."""
    return w._transformed(lambda x, y: y, lambda x, y: -x, 1)


def translate(w: GridWiring, d) -> GridWiring:
    """Shift every image point by the lattice vector d."""
    dx, dy = d
    return w._transformed(lambda x, y: x + dx, lambda x, y: y + dy, 0)


def volume(w: GridWiring) -> int:
    """Distinct lattice vertices met by the image."""
    if w._volume is None:
        if w.coords_in_kernel_range():
            ax = w.vx + w.px
            ay = w.vy + w.py
            w._volume = _core.count_distinct(ax, ay)
        else:
            pts = set(zip(w.vx, w.vy))
            pts.update(zip(w.px, w.py))
            w._volume = len(pts)
    return w._volume


def volume_by_formula(w: GridWiring, tree: OrderedTree | None = None) -> int:
    """1 plus the taxicab length of every edge path's endpoints.

    Agrees with :func:`volume` whenever paths are geodesics meeting only
    at shared tree-vertex images, as the constructor guarantees.
    """
    if tree is not None and tree.n != w.n:
        raise ValueError("tree does not match the wiring")
    return 1 + _core.taxicab_sum(w.eu, w.ev, w.vx, w.vy)


def bounding_box(w: GridWiring):
    """((min x, min y), (max x, max y)) over all image points."""
    if not w.n:
        raise ValueError("empty wiring has no bounding box")
    minx, maxx = min(w.vx), max(w.vx)
    miny, maxy = min(w.vy), max(w.vy)
    if len(w.px):
        minx = min(minx, min(w.px))
        maxx = max(maxx, max(w.px))
        miny = min(miny, min(w.py))
        maxy = max(maxy, max(w.py))
    return ((minx, miny), (maxx, maxy))


@dataclass
class ValidationReport:
    """Outcome of checking the coarse-k conditions against a requested k."""

    requested_k: int
    k_vertex: int = 1
    k_edge: int = 1
    structural: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return (not self.structural and self.k_vertex <= self.requested_k
                and self.k_edge <= self.requested_k)

    def summary(self):
        state = "ok" if self.passed else "FAILED"
        return (f"k_vertex={self.k_vertex} k_edge={self.k_edge} "
                f"requested_k={self.requested_k} {state}")


def validate_k_wiring(w: GridWiring, k: int = 1) -> ValidationReport:
    """Check vertex multiplicity, per-lattice-edge usage and path structure.

    `k_vertex` / `k_edge` are the smallest k each condition satisfies
    (at least 1 for nonempty wirings); `violations` lists offenders only
    when the requested k is exceeded.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    report = ValidationReport(requested_k=k)
    small = w.coords_in_kernel_range()

    bad = _core.check_paths(w.px, w.py, w.off, w.eu, w.ev, w.vx, w.vy) \
        if small else _check_paths_py(w)
    if bad >= 0:
        u, v = w.labels[w.eu[bad]], w.labels[w.ev[bad]]
        report.structural.append(
            f"edge {u}->{v}: path is not a lattice path between its endpoints")

    mult = _core.max_multiplicity(w.vx, w.vy) if small else \
        _max_mult_py(w.vx, w.vy)
    report.k_vertex = max(1, mult)
    usage = _core.max_edge_usage(w.px, w.py, w.off) if small else \
        _max_usage_py(w)
    report.k_edge = max(1, usage)

    if report.k_vertex > k:
        by_point = {}
        for i in range(w.n):
            by_point.setdefault((w.vx[i], w.vy[i]), []).append(w.labels[i])
        for p, labs in sorted(by_point.items()):
            if len(labs) > k:
                report.violations.append(f"vertex image {p} shared by {labs}")
    if report.k_edge > k:
        for (x0, y0, x1, y1), c in _core.overused_edges(w.px, w.py, w.off, k):
            report.violations.append(
                f"lattice edge ({x0},{y0})-({x1},{y1}) used by {c} paths")
    return report


def _check_paths_py(w):
    from . import _core_py
    return _core_py.check_paths(w.px, w.py, w.off, w.eu, w.ev, w.vx, w.vy)


def _max_mult_py(xs, ys):
    from . import _core_py
    return _core_py.max_multiplicity(xs, ys)


def _max_usage_py(w):
    from . import _core_py
    return _core_py.max_edge_usage(w.px, w.py, w.off)


def quadrant_separation(w: GridWiring):
    """Verify the two-quadrant placement at every assembly frame.

    Relative to each node's frame, the first child's subtree image must
    lie in {x >= 0, y >= 1} and the second child's in {x >= 1, y <= 0}.
    Returns (ok, offending_node_label).  Works on any constructed wiring;
    deserialized ones have their frames re-derived from the geometry.
    """
    frames = w._frames if w._frames is not None else _reconstruct_frames(w)
    root, o1, o2, rot = frames
    bad = _core.quadrant_violation(root, o1, o2, rot, w.vx, w.vy)
    if bad < 0:
        return True, None
    return False, w.labels[bad]


def _reconstruct_frames(w):
    """Re-derive per-node frames of a constructed wiring from its geometry."""
    n = w.n
    is_child = bytearray(n)
    kids = [[] for _ in range(n)]
    for i in range(w.edge_count):
        kids[w.eu[i]].append(w.ev[i])
        is_child[w.ev[i]] = 1
    roots = [v for v in range(n) if not is_child[v]]
    if len(roots) != 1:
        raise ValueError("embedding is not a single rooted tree")
    root = roots[0]
    o1 = array("q", [-1]) * n
    o2 = array("q", [-1]) * n
    rot = array("q", [0]) * n
    stack = [root]
    while stack:
        v = stack.pop()
        for c in kids[v]:
            dx = w.vx[c] - w.vx[v]
            dy = w.vy[c] - w.vy[v]
            # undo the frame rotation (counter-clockwise r times)
            for _ in range(rot[v] % 4):
                dx, dy = -dy, dx
            if dx == 0 and dy > 0:
                if o1[v] >= 0:
                    raise ValueError(f"node {w.labels[v]} has two upward children")
                o1[v] = c
                rot[c] = rot[v]
            elif dy == 0 and dx > 0:
                if o2[v] >= 0:
                    raise ValueError(f"node {w.labels[v]} has two rotated children")
                o2[v] = c
                rot[c] = (rot[v] + 1) % 4
            else:
                raise ValueError(
                    f"edge {w.labels[v]}->{w.labels[c]} is not an axis connector")
            stack.append(c)
    return root, o1, o2, rot


def to_canonical_json(w: GridWiring, meta=None) -> str:
    """Canonical single-line serialization with fixed field order."""
    doc = {
        "vertices": {w.labels[i]: [w.vx[i], w.vy[i]] for i in range(w.n)},
        "edges": [
            {
                "from": w.labels[w.eu[i]],
                "to": w.labels[w.ev[i]],
                "path": [[x, y] for x, y in w.edge_path(i)],
            }
            for i in range(w.edge_count)
        ],
        "volume": volume(w),
        "bbox": [list(p) for p in bounding_box(w)],
    }
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_canonical_json(text: str):
    """Parse a serialized embedding.

    Returns (wiring, declared_volume, declared_bbox); the declared fields
    are reported as-is so a verifier can cross-check them.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise ValueError("embedding must carry 'vertices' and 'edges'")
    verts = doc["vertices"]
    labels = list(verts.keys())
    index = {lab: i for i, lab in enumerate(labels)}
    try:
        vertices = [(int(verts[lab][0]), int(verts[lab][1])) for lab in labels]
        edges = []
        for e in doc["edges"]:
            path = [(int(x), int(y)) for x, y in e["path"]]
            edges.append((index[e["from"]], index[e["to"]], path))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed embedding: {exc}") from None
    w = GridWiring.from_parts(vertices, edges, labels)
    declared_volume = doc.get("volume")
    declared_bbox = doc.get("bbox")
    if declared_bbox is not None:
        declared_bbox = ((declared_bbox[0][0], declared_bbox[0][1]),
                         (declared_bbox[1][0], declared_bbox[1][1]))
    return w, declared_volume, declared_bbox
