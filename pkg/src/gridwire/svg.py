"""Static SVG rendering of lattice embeddings.

Fixed 16-pixel lattice unit, vertices as filled circles, paths as 2-px
strokes; colors cycle with tree depth mod 3 (black, blue, red) so the
recursive bands stand out.  Output is deterministic: integer pixel
coordinates only.
"""

UNIT = 16
_PAD = 1  # lattice units of margin
_PALETTE = ("#000000", "#2050c8", "#d02020")


def render_svg(w, meta_comment=None):
    """Render a GridWiring to an SVG document string."""
    from .wiring import bounding_box

    (minx, miny), (maxx, maxy) = bounding_box(w)
    width = (maxx - minx + 2 * _PAD) * UNIT
    height = (maxy - miny + 2 * _PAD) * UNIT

    def sx(x):
        return (x - minx + _PAD) * UNIT

    def sy(y):
        #. lattice y grows upward, svg y downward
        return (maxy - y + _PAD) * UNIT

    depth = _depths(w)
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if meta_comment:
        # XML comments cannot contain "--" (for instance from CLI flags)
        out.append(f"<!-- {meta_comment.replace('--', '- -')} -->")
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">')
    out.append('<g stroke="#dddddd" stroke-width="1">')
    for gx in range(minx - _PAD, maxx + _PAD + 1):
        out.append(f'<line x1="{sx(gx)}" y1="0" x2="{sx(gx)}" y2="{height}"/>')
    for gy in range(miny - _PAD, maxy + _PAD + 1):
        out.append(f'<line x1="0" y1="{sy(gy)}" x2="{width}" y2="{sy(gy)}"/>')
    out.append("</g>")
    for i in range(w.edge_count):
        color = _PALETTE[depth[w.ev[i]] % 3]
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in w.edge_path(i))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                   f'points="{pts}"/>')
    for v in range(w.n):
        color = _PALETTE[depth[v] % 3]
        out.append(f'<circle cx="{sx(w.vx[v])}" cy="{sy(w.vy[v])}" r="5" '
                   f'fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _depths(w):
    depth = [0] * w.n
    kids = [[] for _ in range(w.n)]
    has_parent = bytearray(w.n)
    for i in range(w.edge_count):
        kids[w.eu[i]].append(w.ev[i])
        has_parent[w.ev[i]] = 1
    roots = [v for v in range(w.n) if not has_parent[v]]
    stack = list(roots)
    while stack:
        v = stack.pop()
        for c in kids[v]:
            depth[c] = depth[v] + 1
            stack.append(c)
    return depth
