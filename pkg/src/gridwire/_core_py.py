"""Pure-Python kernels for the placement recursion and lattice bookkeeping.

Mirror of the compiled backend in ``_core_c.pyx``; selected at import by
``_core`` when the extension is unavailable.  Semantics of the two
backends are identical (checked by tests/test_backends.py).
"""

from array import array

BACKEND = "pure"


def _zeros(n):
    return array("q", bytes(8 * n))


def layout(c1, c2, root, reorder):
    """Place a tree in the lattice by the recursive first-up/second-right rule.

    Returns (vx, vy, rot, o1, o2): vertex images, the number of clockwise
    quarter-turns each node's frame has undergone, and the children in
    execution order (first = placed upward, second = rotated rightward).
    When `reorder` is set, two children are swapped so the larger subtree
    (by vertex count) is placed first; ties keep the input order.
    """
    n = len(c1)
    vx, vy = _zeros(n), _zeros(n)
    rot = _zeros(n)
    o1, o2 = _zeros(n), _zeros(n)
    order = _zeros(n)

    # breadth-first order (root first)
    order[0] = root
    tail = 1
    head = 0
    while head < tail:
        v = order[head]
        head += 1
        if c1[v] >= 0:
            order[tail] = c1[v]
            tail += 1
        if c2[v] >= 0:
            order[tail] = c2[v]
            tail += 1

    size = _zeros(n)
    # local-frame bounding box of each subtree's wiring, and the child offsets
    bminx, bmaxx = _zeros(n), _zeros(n)
    bminy, bmaxy = _zeros(n), _zeros(n)
    off1, off2 = _zeros(n), _zeros(n)

    for i in range(n - 1, -1, -1):
        v = order[i]
        a, b = c1[v], c2[v]
        size[v] = 1 + (size[a] if a >= 0 else 0) + (size[b] if b >= 0 else 0)
        if b >= 0 and reorder and size[b] > size[a]:
            a, b = b, a
        o1[v], o2[v] = a, b
        if a < 0:
            continue
        # first child: shift up until its lowest image row sits at y = 1
        dy = -bminy[a] + 1
        off1[v] = dy
        minx = min(0, bminx[a])
        maxx = max(0, bmaxx[a])
        miny = 0
        maxy = bmaxy[a] + dy
        if b >= 0:
            # second child: quarter-turn clockwise, then shift right so its
            # leftmost image column sits at x = 1
            dx = -bminy[b] + 1
            off2[v] = dx
            minx = min(minx, bminy[b] + dx)
            maxx = max(maxx, bmaxy[b] + dx)
            miny = min(miny, -bmaxx[b])
            maxy = max(maxy, -bminx[b])
        bminx[v], bmaxx[v] = minx, maxx
        bminy[v], bmaxy[v] = miny, maxy

    for i in range(n):
        v = order[i]
        r = rot[v]
        x, y = vx[v], vy[v]
        a, b = o1[v], o2[v]
        if a >= 0:
            dx, dy = _rot_point(0, off1[v], r)
            vx[a], vy[a] = x + dx, y + dy
            rot[a] = r
        if b >= 0:
            dx, dy = _rot_point(off2[v], 0, r)
            vx[b], vy[b] = x + dx, y + dy
            rot[b] = (r + 1) % 4
    return vx, vy, rot, o1, o2


def _rot_point(x, y, r):
    for _ in range(r):
        x, y = y, -x
    return x, y


def build_edges(c1, c2):
    """Tree edges (parent, child) in node-id order, original child order."""
    eu, ev = array("q"), array("q")
    for v in range(len(c1)):
        if c1[v] >= 0:
            eu.append(v)
            ev.append(c1[v])
        if c2[v] >= 0:
            eu.append(v)
            ev.append(c2[v])
    return eu, ev


def expand_paths(eu, ev, vx, vy):
    """Lattice points of the straight path for each edge, endpoints included.

    Returns (px, py, off) with edge i's points at off[i]:off[i+1].
    """
    m = len(eu)
    off = _zeros(m + 1)
    total = 0
    for i in range(m):
        total += abs(vx[eu[i]] - vx[ev[i]]) + abs(vy[eu[i]] - vy[ev[i]]) + 1
        off[i + 1] = total
    px, py = _zeros(total), _zeros(total)
    k = 0
    for i in range(m):
        x0, y0 = vx[eu[i]], vy[eu[i]]
        x1, y1 = vx[ev[i]], vy[ev[i]]
        sx = (x1 > x0) - (x1 < x0)
        sy = (y1 > y0) - (y1 < y0)
        x, y = x0, y0
        px[k], py[k] = x, y
        k += 1
        while x != x1 or y != y1:
            x += sx
            y += sy
            px[k], py[k] = x, y
            k += 1
    return px, py, off


def count_distinct(xs, ys):
    """Number of distinct lattice points among (xs[i], ys[i])."""
    return len(set(zip(xs, ys)))


def max_multiplicity(xs, ys):
    """Largest number of coincident points, 0 for empty input."""
    if not len(xs):
        return 0
    counts = {}
    for p in zip(xs, ys):
        counts[p] = counts.get(p, 0) + 1
    return max(counts.values())


def duplicate_points(xs, ys):
    """Points hit more than once, with their multiplicities (sorted)."""
    counts = {}
    for p in zip(xs, ys):
        counts[p] = counts.get(p, 0) + 1
    return sorted((p, c) for p, c in counts.items() if c > 1)


def _edge_iter(px, py, off):
    """(path index, canonical unit edge) pairs, one per containment."""
    last = {}
    for i in range(len(off) - 1):
        for k in range(off[i], off[i + 1] - 1):
            x0, y0, x1, y1 = px[k], py[k], px[k + 1], py[k + 1]
            if (x1, y1) < (x0, y0):
                x0, y0, x1, y1 = x1, y1, x0, y0
            e = (x0, y0, x1, y1)
            # an edge counts once per path containing it, not per traversal
            if last.get(e) == i:
                continue
            last[e] = i
            yield e


def max_edge_usage(px, py, off):
    """Largest number of paths containing a single unit lattice edge."""
    counts = {}
    best = 0
    for e in _edge_iter(px, py, off):
        c = counts.get(e, 0) + 1
        counts[e] = c
        if c > best:
            best = c
    return best


def overused_edges(px, py, off, k):
    """Unit lattice edges contained in more than k paths (sorted)."""
    counts = {}
    for e in _edge_iter(px, py, off):
        counts[e] = counts.get(e, 0) + 1
    return sorted((e, c) for e, c in counts.items() if c > k)


def check_paths(px, py, off, eu, ev, vx, vy):
    """Index of the first broken path (continuity or endpoints), or -1."""
    for i in range(len(eu)):
        lo, hi = off[i], off[i + 1]
        if hi - lo < 1:
            return i
        if px[lo] != vx[eu[i]] or py[lo] != vy[eu[i]]:
            return i
        if px[hi - 1] != vx[ev[i]] or py[hi - 1] != vy[ev[i]]:
            return i
        for k in range(lo, hi - 1):
            if abs(px[k + 1] - px[k]) + abs(py[k + 1] - py[k]) != 1:
                return i
    return -1


def taxicab_sum(eu, ev, vx, vy):
    """Sum over edges of the taxicab distance between endpoint images."""
    total = 0
    for i in range(len(eu)):
        total += abs(vx[eu[i]] - vx[ev[i]]) + abs(vy[eu[i]] - vy[ev[i]])
    return total


def quadrant_violation(root, o1, o2, rot, vx, vy):
    """First node whose children leave their assigned quadrants, or -1.

    In every assembly frame the first child's subtree image must lie in
    {x >= 0, y >= 1} and the second child's in {x >= 1, y <= 0}; boxes of
    actual placed geometry are checked, so this re-derives the separation
    rather than assuming it.
    """
    n = len(o1)
    order = _zeros(n)
    order[0] = root
    tail = 1
    head = 0
    while head < tail:
        v = order[head]
        head += 1
        if o1[v] >= 0:
            order[tail] = o1[v]
            tail += 1
        if o2[v] >= 0:
            order[tail] = o2[v]
            tail += 1

    gminx, gmaxx = _zeros(n), _zeros(n)
    gminy, gmaxy = _zeros(n), _zeros(n)
    for i in range(n - 1, -1, -1):
        v = order[i]
        minx = maxx = vx[v]
        miny = maxy = vy[v]
        for w in (o1[v], o2[v]):
            if w >= 0:
                minx = min(minx, gminx[w])
                maxx = max(maxx, gmaxx[w])
                miny = min(miny, gminy[w])
                maxy = max(maxy, gmaxy[w])
        gminx[v], gmaxx[v] = minx, maxx
        gminy[v], gmaxy[v] = miny, maxy

    for v in range(n):
        x, y, r = vx[v], vy[v], rot[v]
        a, b = o1[v], o2[v]
        if a >= 0:
            lminx, lminy, lmaxx, lmaxy = _unrotate_box(
                gminx[a] - x, gminy[a] - y, gmaxx[a] - x, gmaxy[a] - y, r)
            if lminx < 0 or lminy < 1:
                return v
        if b >= 0:
            lminx, lminy, lmaxx, lmaxy = _unrotate_box(
                gminx[b] - x, gminy[b] - y, gmaxx[b] - x, gmaxy[b] - y, r)
            if lminx < 1 or lmaxy > 0:
                return v
    return -1


def _unrotate_box(minx, miny, maxx, maxy, r):
    # apply the counter-clockwise quarter-turn r times: (x, y) -> (-y, x)
    for _ in range(r % 4):
        minx, miny, maxx, maxy = -maxy, minx, -miny, maxx
    return minx, miny, maxx, maxy
