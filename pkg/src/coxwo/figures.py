"""Deterministic SVG rendering of rank-2/3 projective root pictures.

The normalized simplex is mapped to a fixed equilateral triangle (rank 3) or
a horizontal segment (rank 2).  Layers: simplex frame, isotropic curve, root
dots shrinking with depth, highlighted root sets with hull fills, the
imaginary domain K with optional orbit trails, and corner labels.  All float
output is fixed-format, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import itertools
import math

from .coxsys import CoxeterSystem
from .errors import InputError
from .imagcone import build_K, orbit_sample
from .rootstore import RootStore, norm_floats

WIDTH, HEIGHT = 640, 600
MARGIN = 50
SIDE = WIDTH - 2 * MARGIN
APEX = (WIDTH / 2, HEIGHT - MARGIN - SIDE * math.sqrt(3) / 2)
CORNERS3 = [(MARGIN, HEIGHT - MARGIN), (WIDTH - MARGIN, HEIGHT - MARGIN), APEX]
PALETTE = ["#3b6fd4", "#d45b3b", "#3bd47e", "#b03bd4", "#d4a63b"]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


class Canvas:
    def __init__(self):
        self.parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        ]

    def line(self, p, q, color="#2a7d2a", width=1.5, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(p[0])}" y1="{_fmt(p[1])}" x2="{_fmt(q[0])}" y2="{_fmt(q[1])}" '
            f'stroke="{color}" stroke-width="{width}"{d}/>'
        )

    def circle(self, p, r, fill="#1f3d99", stroke="none"):
        self.parts.append(
            f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="{_fmt(r)}" fill="{fill}" '
            f'stroke="{stroke}"/>'
        )

    def polygon(self, pts, fill, opacity=0.35, stroke="none"):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
            f'stroke="{stroke}"/>'
        )

    def polyline(self, pts, color, width=1.2):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>'
        )

    def text(self, p, s, size=16, color="black"):
        self.parts.append(
            f'<text x="{_fmt(p[0])}" y="{_fmt(p[1])}" font-size="{size}" '
            f'font-family="serif" fill="{color}">{s}</text>'
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _project(rank: int):
    if rank == 3:
        corners = CORNERS3

        def proj(coords):
            x = sum(c * v[0] for c, v in zip(coords, corners))
            y = sum(c * v[1] for c, v in zip(coords, corners))
            return (x, y)

        return proj, corners
    if rank == 2:
        left, right = (MARGIN, HEIGHT / 2), (WIDTH - MARGIN, HEIGHT / 2)

        def proj(coords):
            x = coords[0] * left[0] + coords[1] * right[0]
            return (x, HEIGHT / 2)

        return proj, [left, right]
    raise InputError("figures are drawn for rank 2 and 3 systems only")


def _isotropic_points(sys: CoxeterSystem, steps: int = 240):
    """Float sample of the normalized isotropic set, for drawing only."""
    rank = sys.rank
    gram = [[sys.gram[i][j].to_float() for j in range(rank)] for i in range(rank)]

    def q(v):
        return sum(v[i] * v[j] * gram[i][j] for i in range(rank) for j in range(rank))

    if rank == 2:
        out = []
        for k in range(steps + 1):
            t = k / steps
            val = q((1 - t, t))
            if abs(val) < 1e-9:
                out.append([(1 - t, t)])
        return out
    center = [1 / 3] * 3
    if q(center) >= -1e-12:
        # no interior direction to shoot rays from: affine systems still have
        # the single radical direction to mark
        from .coxsys import gram_kernel

        kernel = gram_kernel(sys)
        if len(kernel) == 1:
            vec = [c.to_float() for c in kernel[0]]
            total = sum(vec)
            if abs(total) > 1e-12:
                return [[tuple(c / total for c in vec)]]
        return []
    loops = []
    loop = []
    for k in range(steps + 1):
        ang = 2 * math.pi * k / steps
        d = (math.cos(ang), math.sin(ang))
        # direction embedded in the sum-zero plane via two basis vectors
        e1 = (1 / math.sqrt(2), -1 / math.sqrt(2), 0.0)
        e2 = (1 / math.sqrt(6), 1 / math.sqrt(6), -2 / math.sqrt(6))
        dirv = tuple(d[0] * e1[i] + d[1] * e2[i] for i in range(3))
        lo, hi = 0.0, 4.0
        if q(tuple(center[i] + hi * dirv[i] for i in range(3))) < 0:
            continue
        for _ in range(60):
            mid = (lo + hi) / 2
            if q(tuple(center[i] + mid * dirv[i] for i in range(3))) < 0:
                lo = mid
            else:
                hi = mid
        loop.append(tuple(center[i] + lo * dirv[i] for i in range(3)))
    if loop:
        loops.append(loop + loop[:1])
    return loops


def _hull_float(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1] or pts


def _k_polygon(sys: CoxeterSystem, proj):
    """Outline of K in the drawing plane (float, rendering only)."""
    rank = sys.rank
    gram = [[sys.gram[i][j].to_float() for j in range(rank)] for i in range(rank)]
    # halfplanes in barycentric coords: B(u, alpha_s) <= 0 and u_s >= 0
    rows = [tuple(gram[s]) for s in range(rank)]
    rows += [tuple(-1.0 if i == s else 0.0 for i in range(rank)) for s in range(rank)]
    vertices = []
    if rank == 2:
        candidates = []
        for row in rows:
            denom = row[0] - row[1]
            if abs(denom) > 1e-12:
                t = row[0] / denom
                candidates.append((1 - t, t))
        for v in candidates:
            if all(sum(r[i] * v[i] for i in range(2)) <= 1e-9 for r in rows):
                vertices.append(v)
    else:
        for r1, r2 in itertools.combinations(rows, 2):
            # solve r1.u = 0, r2.u = 0, sum u = 1
            a = [[r1[0], r1[1], r1[2]], [r2[0], r2[1], r2[2]], [1.0, 1.0, 1.0]]
            b = [0.0, 0.0, 1.0]
            v = _solve3(a, b)
            if v is None:
                continue
            if all(sum(r[i] * v[i] for i in range(3)) <= 1e-9 for r in rows):
                vertices.append(tuple(v))
    pts = [proj(v) for v in vertices]
    if len(pts) < 3:
        return pts
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    return pts


def _solve3(a, b):
    m = [row[:] + [bv] for row, bv in zip(a, b)]
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) < 1e-12:
            return None
        m[col], m[piv] = m[piv], m[col]
        m[col] = [x / m[col][col] for x in m[col]]
        for r in range(3):
            if r != col and abs(m[r][col]) > 1e-15:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[r][3] for r in range(3)]


def render_figure(store: RootStore, spec: dict) -> str:
    """Render one figure; see the CLI docs for the spec schema."""
    sys = store.system
    proj, corners = _project(sys.rank)
    canvas = Canvas()

    depth = int(spec.get("store_depth", 6))
    store.generate(depth)

    if spec.get("triangle", True):
        for i in range(len(corners)):
            canvas.line(corners[i], corners[(i + 1) % len(corners)])

    if spec.get("isotropic", True):
        for loop in _isotropic_points(sys):
            pts = [proj(p) for p in loop]
            if len(pts) == 1:
                canvas.circle(pts[0], 5, fill="#cc2222")
            else:
                canvas.polyline(pts, "#cc2222", width=1.8)

    imaginary = spec.get("imaginary", False)
    if imaginary:
        poly = _k_polygon(sys, proj)
        if len(poly) >= 3:
            canvas.polygon(poly, "#e8d44d", opacity=0.45, stroke="#a89510")
        elif poly:
            canvas.circle(poly[0], 4, fill="#e8d44d", stroke="#a89510")
        orbit_depth = imaginary.get("orbit_depth", 0) if isinstance(imaginary, dict) else 0
        if orbit_depth:
            dom = build_K(sys)
            if dom.interior_point is not None:
                trail = orbit_sample(sys, dom.interior_point, orbit_depth)
                for letters, point in trail:
                    fp = proj(tuple(c.to_float() for c in point))
                    canvas.circle(fp, 2.2, fill="#806600")

    if spec.get("roots", True):
        for r in store.roots:
            if r.depth > depth:
                continue
            p = proj(norm_floats(r.vec))
            radius = max(2.0, 6.5 * (0.82 ** r.depth))
            canvas.circle(p, radius, fill="#1f3d99")

    for idx, layer in enumerate(spec.get("highlights", [])):
        color = layer.get("color", PALETTE[idx % len(PALETTE)])
        pts = []
        for literal in layer["roots"]:
            vec = _parse_root(sys, literal)
            pts.append(proj(norm_floats(vec)))
        hull = _hull_float(pts)
        if len(hull) >= 3:
            canvas.polygon(hull, color)
        elif len(hull) == 2:
            canvas.line(hull[0], hull[1], color=color, width=3)
        for p in pts:
            canvas.circle(p, 4.5, fill=color, stroke="black")
        if layer.get("label"):
            cx = sum(p[0] for p in pts) / len(pts)
            cy = sum(p[1] for p in pts) / len(pts)
            canvas.text((cx + 6, cy - 6), layer["label"], size=14, color=color)

    if spec.get("labels", True):
        offsets = [(-18, 18), (6, 18), (-6, -10)] if sys.rank == 3 else [(-18, -10), (6, -10)]
        for name, corner, off in zip(sys.generators, corners, offsets):
            canvas.text((corner[0] + off[0], corner[1] + off[1]), name)

    return canvas.render()


def _parse_root(sys: CoxeterSystem, literal):
    from .scalar import parse_scalar

    if len(literal) != sys.rank:
        raise InputError(f"root literal {literal!r} has wrong length")
    return tuple(parse_scalar(t, sys.field_d) for t in literal)
