# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the placement recursion and lattice bookkeeping.

Twin of ``_core_py``; both expose the same functions with identical
semantics.  Coordinates handled here are bounded by the callers to
|x|, |y| < 2**30 so point and unit-edge keys fit in 64 bits.
"""

from cpython cimport array
import array

from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set

ctypedef long long i64
ctypedef unsigned long long u64

BACKEND = "compiled"

cdef array.array _I64_TEMPLATE = array.array("q", [])


cdef array.array _zeros(Py_ssize_t n):
    return array.clone(_I64_TEMPLATE, n, zero=True)


cdef inline u64 _enc(i64 x, i64 y) nogil:
    # 31 bits per coordinate after the +2**30 offset; 62-bit key
    return ((<u64> (x + 1073741824)) << 31) | (<u64> (y + 1073741824))


cdef inline void _rot_point(i64 x, i64 y, i64 r, i64 *ox, i64 *oy) nogil:
    cdef i64 t
    cdef int i
    for i in range(r):
        t = x
        x = y
        y = -t
    ox[0] = x
    oy[0] = y


def layout(object c1o, object c2o, i64 root, bint reorder):
    """See ``_core_py.layout``."""
    cdef i64[::1] c1 = c1o
    cdef i64[::1] c2 = c2o
    cdef Py_ssize_t n = c1.shape[0]
    cdef array.array vxa = _zeros(n), vya = _zeros(n), rota = _zeros(n)
    cdef array.array o1a = _zeros(n), o2a = _zeros(n)
    cdef i64[::1] vx = vxa, vy = vya, rot = rota, o1 = o1a, o2 = o2a
    cdef array.array ordera = _zeros(n)
    cdef i64[::1] order = ordera
    cdef array.array sizea = _zeros(n)
    cdef i64[::1] size = sizea
    cdef array.array bminxa = _zeros(n), bmaxxa = _zeros(n)
    cdef array.array bminya = _zeros(n), bmaxya = _zeros(n)
    cdef i64[::1] bminx = bminxa, bmaxx = bmaxxa, bminy = bminya, bmaxy = bmaxya
    cdef array.array off1a = _zeros(n), off2a = _zeros(n)
    cdef i64[::1] off1 = off1a, off2 = off2a

    cdef Py_ssize_t head = 0, tail = 1
    cdef i64 v, a, b, t, dx, dy, minx, maxx, miny, maxy, r, x, y
    cdef Py_ssize_t i

    order[0] = root
    while head < tail:
        v = order[head]
        head += 1
        if c1[v] >= 0:
            order[tail] = c1[v]
            tail += 1
        if c2[v] >= 0:
            order[tail] = c2[v]
            tail += 1

    for i in range(n - 1, -1, -1):
        v = order[i]
        a = c1[v]
        b = c2[v]
        size[v] = 1
        if a >= 0:
            size[v] += size[a]
        if b >= 0:
            size[v] += size[b]
        if b >= 0 and reorder and size[b] > size[a]:
            t = a
            a = b
            b = t
        o1[v] = a
        o2[v] = b
        if a < 0:
            continue
        dy = -bminy[a] + 1
        off1[v] = dy
        minx = 0 if bminx[a] > 0 else bminx[a]
        maxx = 0 if bmaxx[a] < 0 else bmaxx[a]
        miny = 0
        maxy = bmaxy[a] + dy
        if b >= 0:
            dx = -bminy[b] + 1
            off2[v] = dx
            if bminy[b] + dx < minx:
                minx = bminy[b] + dx
            if bmaxy[b] + dx > maxx:
                maxx = bmaxy[b] + dx
            if -bmaxx[b] < miny:
                miny = -bmaxx[b]
            if -bminx[b] > maxy:
                maxy = -bminx[b]
        bminx[v] = minx
        bmaxx[v] = maxx
        bminy[v] = miny
        bmaxy[v] = maxy

    for i in range(n):
        v = order[i]
        r = rot[v]
        x = vx[v]
        y = vy[v]
        a = o1[v]
        b = o2[v]
        if a >= 0:
            _rot_point(0, off1[v], r, &dx, &dy)
            vx[a] = x + dx
            vy[a] = y + dy
            rot[a] = r
        if b >= 0:
            _rot_point(off2[v], 0, r, &dx, &dy)
            vx[b] = x + dx
            vy[b] = y + dy
            rot[b] = (r + 1) % 4
    return vxa, vya, rota, o1a, o2a


def build_edges(object c1o, object c2o):
    """See ``_core_py.build_edges``."""
    cdef i64[::1] c1 = c1o
    cdef i64[::1] c2 = c2o
    cdef Py_ssize_t n = c1.shape[0]
    cdef Py_ssize_t m = 0
    cdef Py_ssize_t v
    for v in range(n):
        if c1[v] >= 0:
            m += 1
        if c2[v] >= 0:
            m += 1
    cdef array.array eua = _zeros(m), eva = _zeros(m)
    cdef i64[::1] eu = eua, ev = eva
    cdef Py_ssize_t k = 0
    for v in range(n):
        if c1[v] >= 0:
            eu[k] = v
            ev[k] = c1[v]
            k += 1
        if c2[v] >= 0:
            eu[k] = v
            ev[k] = c2[v]
            k += 1
    return eua, eva


def expand_paths(object euo, object evo, object vxo, object vyo):
    """See ``_core_py.expand_paths``."""
    cdef i64[::1] eu = euo, ev = evo, vx = vxo, vy = vyo
    cdef Py_ssize_t m = eu.shape[0]
    cdef array.array offa = _zeros(m + 1)
    cdef i64[::1] off = offa
    cdef i64 total = 0
    cdef Py_ssize_t i
    cdef i64 x0, y0, x1, y1, sx, sy, x, y
    for i in range(m):
        x0 = vx[eu[i]] - vx[ev[i]]
        y0 = vy[eu[i]] - vy[ev[i]]
        total += (x0 if x0 >= 0 else -x0) + (y0 if y0 >= 0 else -y0) + 1
        off[i + 1] = total
    cdef array.array pxa = _zeros(total), pya = _zeros(total)
    cdef i64[::1] px = pxa, py = pya
    cdef Py_ssize_t k = 0
    for i in range(m):
        x0 = vx[eu[i]]
        y0 = vy[eu[i]]
        x1 = vx[ev[i]]
        y1 = vy[ev[i]]
        sx = (x1 > x0) - (x1 < x0)
        sy = (y1 > y0) - (y1 < y0)
        x = x0
        y = y0
        px[k] = x
        py[k] = y
        k += 1
        while x != x1 or y != y1:
            x += sx
            y += sy
            px[k] = x
            py[k] = y
            k += 1
    return pxa, pya, offa


def count_distinct(object xso, object yso):
    """See ``_core_py.count_distinct``."""
    cdef i64[::1] xs = xso, ys = yso
    cdef Py_ssize_t n = xs.shape[0]
    cdef unordered_set[u64] seen
    seen.reserve(<size_t> (n * 2))
    cdef Py_ssize_t i
    for i in range(n):
        seen.insert(_enc(xs[i], ys[i]))
    return <i64> seen.size()


def max_multiplicity(object xso, object yso):
    """See ``_core_py.max_multiplicity``."""
    cdef i64[::1] xs = xso, ys = yso
    cdef Py_ssize_t n = xs.shape[0]
    cdef unordered_map[u64, i64] counts
    counts.reserve(<size_t> (n * 2))
    cdef i64 best = 0, c
    cdef Py_ssize_t i
    for i in range(n):
        c = counts[_enc(xs[i], ys[i])] + 1
        counts[_enc(xs[i], ys[i])] = c
        if c > best:
            best = c
    return best


def duplicate_points(xs, ys):
    """Report path: same as the pure backend (not performance-critical)."""
    counts = {}
    for p in zip(xs, ys):
        counts[p] = counts.get(p, 0) + 1
    return sorted((p, c) for p, c in counts.items() if c > 1)


cdef inline u64 _edge_key(i64 x0, i64 y0, i64 x1, i64 y1) nogil:
    cdef i64 t
    if x1 < x0 or (x1 == x0 and y1 < y0):
        t = x0
        x0 = x1
        x1 = t
        t = y0
        y0 = y1
        y1 = t
    # orientation bit: 0 horizontal, 1 vertical
    return (_enc(x0, y0) << 1) | (<u64> (1 if y1 != y0 else 0))


def max_edge_usage(object pxo, object pyo, object offo):
    """See ``_core_py.max_edge_usage``."""
    cdef i64[::1] px = pxo, py = pyo, off = offo
    cdef Py_ssize_t m = off.shape[0] - 1
    cdef unordered_map[u64, i64] counts
    cdef unordered_map[u64, i64] last
    counts.reserve(<size_t> (px.shape[0] * 2))
    last.reserve(<size_t> (px.shape[0] * 2))
    cdef i64 best = 0, c
    cdef Py_ssize_t i, k
    cdef u64 key
    for i in range(m):
        for k in range(off[i], off[i + 1] - 1):
            key = _edge_key(px[k], py[k], px[k + 1], py[k + 1])
            # an edge counts once per path containing it, not per traversal
            if last.count(key) and last[key] == <i64> i:
                continue
            last[key] = <i64> i
            c = counts[key] + 1
            counts[key] = c
            if c > best:
                best = c
    return best


def overused_edges(px, py, off, k):
    """Report path: same as the pure backend (not performance-critical)."""
    counts = {}
    last = {}
    for i in range(len(off) - 1):
        for j in range(off[i], off[i + 1] - 1):
            x0, y0, x1, y1 = px[j], py[j], px[j + 1], py[j + 1]
            if (x1, y1) < (x0, y0):
                x0, y0, x1, y1 = x1, y1, x0, y0
            e = (x0, y0, x1, y1)
            if last.get(e) == i:
                continue
            last[e] = i
            counts[e] = counts.get(e, 0) + 1
    return sorted((e, c) for e, c in counts.items() if c > k)


def check_paths(object pxo, object pyo, object offo, object euo, object evo,
                object vxo, object vyo):
    """See ``_core_py.check_paths``."""
    cdef i64[::1] px = pxo, py = pyo, off = offo, eu = euo, ev = evo
    cdef i64[::1] vx = vxo, vy = vyo
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t i, k
    cdef i64 lo, hi, d
    for i in range(m):
        lo = off[i]
        hi = off[i + 1]
        if hi - lo < 1:
            return i
        if px[lo] != vx[eu[i]] or py[lo] != vy[eu[i]]:
            return i
        if px[hi - 1] != vx[ev[i]] or py[hi - 1] != vy[ev[i]]:
            return i
        for k in range(lo, hi - 1):
            d = px[k + 1] - px[k]
            if d < 0:
                d = -d
            if py[k + 1] > py[k]:
                d += py[k + 1] - py[k]
            else:
                d += py[k] - py[k + 1]
            if d != 1:
                return i
    return -1


def taxicab_sum(object euo, object evo, object vxo, object vyo):
    """See ``_core_py.taxicab_sum``."""
    cdef i64[::1] eu = euo, ev = evo, vx = vxo, vy = vyo
    cdef Py_ssize_t m = eu.shape[0]
    cdef i64 total = 0, d
    cdef Py_ssize_t i
    for i in range(m):
        d = vx[eu[i]] - vx[ev[i]]
        total += d if d >= 0 else -d
        d = vy[eu[i]] - vy[ev[i]]
        total += d if d >= 0 else -d
    return total


cdef void _unrotate_box(i64 *minx, i64 *miny, i64 *maxx, i64 *maxy, i64 r) nogil:
    cdef i64 a, b, c, d
    cdef int i
    for i in range(r % 4):
        a = -maxy[0]
        b = minx[0]
        c = -miny[0]
        d = maxx[0]
        minx[0] = a
        miny[0] = b
        maxx[0] = c
        maxy[0] = d


def quadrant_violation(i64 root, object o1o, object o2o, object roto,
                       object vxo, object vyo):
    """See ``_core_py.quadrant_violation``."""
    cdef i64[::1] o1 = o1o, o2 = o2o, rot = roto, vx = vxo, vy = vyo
    cdef Py_ssize_t n = o1.shape[0]
    cdef array.array ordera = _zeros(n)
    cdef i64[::1] order = ordera
    cdef array.array gminxa = _zeros(n), gmaxxa = _zeros(n)
    cdef array.array gminya = _zeros(n), gmaxya = _zeros(n)
    cdef i64[::1] gminx = gminxa, gmaxx = gmaxxa, gminy = gminya, gmaxy = gmaxya
    cdef Py_ssize_t head = 0, tail = 1
    cdef Py_ssize_t i
    cdef i64 v, w, a, b, x, y, r
    cdef i64 minx, maxx, miny, maxy

    order[0] = root
    while head < tail:
        v = order[head]
        head += 1
        if o1[v] >= 0:
            order[tail] = o1[v]
            tail += 1
        if o2[v] >= 0:
            order[tail] = o2[v]
            tail += 1

    for i in range(n - 1, -1, -1):
        v = order[i]
        minx = maxx = vx[v]
        miny = maxy = vy[v]
        for w in (o1[v], o2[v]):
            if w >= 0:
                if gminx[w] < minx:
                    minx = gminx[w]
                if gmaxx[w] > maxx:
                    maxx = gmaxx[w]
                if gminy[w] < miny:
                    miny = gminy[w]
                if gmaxy[w] > maxy:
                    maxy = gmaxy[w]
        gminx[v] = minx
        gmaxx[v] = maxx
        gminy[v] = miny
        gmaxy[v] = maxy

    for v in range(n):
        x = vx[v]
        y = vy[v]
        r = rot[v]
        a = o1[v]
        b = o2[v]
        if a >= 0:
            minx = gminx[a] - x
            miny = gminy[a] - y
            maxx = gmaxx[a] - x
            maxy = gmaxy[a] - y
            _unrotate_box(&minx, &miny, &maxx, &maxy, r)
            if minx < 0 or miny < 1:
                return v
        if b >= 0:
            minx = gminx[b] - x
            miny = gminy[b] - y
            maxx = gmaxx[b] - x
            maxy = gmaxy[b] - y
            _unrotate_box(&minx, &miny, &maxx, &maxy, r)
            if minx < 1 or maxy > 0:
                return v
    return -1
