"""The imaginary cone: fundamental domain K, exact regions, orbits, probes.

K = {u in conv(normalized simple roots) : B(u, alpha_s) <= 0 for all s} tiles
the normalized imaginary convex body under the projective group action.  For
finite systems the body is empty; for irreducible affine systems it is the
single radical direction; for irreducible rank <= 3 systems of signature
(rank-1, 0, 1) it equals {x in the simplex : B(x,x) <= 0} exactly (its
extreme points are isotropic limit directions of rank <= 2 subsystems).
Those three cases give decide_join an exact, complete emptiness test; other
systems fall back to orbit sampling of K.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxsys import CoxeterSystem, Vector, is_nonneg
from .errors import InputError, InternalCheckError
from .lp import solve_combination
from .rootstore import RootStore, height, norm_floats, normalize
from .scalar import ONE, ZERO, Scalar


@dataclass
class ImaginaryDomain:
    """Fundamental domain K with an exact distinguished point when nonempty."""

    kind: str  # "empty" | "point" | "interior" | "flat"
    interior_point: Vector | None = None  # normalized; strict iff kind == "interior"
    strict: bool = False
    slack: Scalar = ZERO  # max of min_s(-B(z, alpha_s)) over K


def build_K(sys: CoxeterSystem) -> ImaginaryDomain:
    """Slack-maximizing exact LP over K; classifies empty/point/flat domains."""
    n = sys.rank
    # variables u_1..u_n, eps, slack_s; rows: sum u = 1, B(u, alpha_s) + eps + t_s = 0
    cols: list[list[Scalar]] = []
    for j in range(n):
        col = [ONE] + [sys.gram[s][j] for s in range(n)]
        cols.append(col)
    cols.append([ZERO] + [ONE] * n)  # eps
    for s in range(n):
        col = [ZERO] * (n + 1)
        col[1 + s] = ONE
        cols.append(col)
    rhs = [ONE] + [ZERO] * n
    objective = [ZERO] * len(cols)
    objective[n] = ONE
    res = solve_combination(cols, rhs, maximize=objective)
    if not res.feasible:
        return ImaginaryDomain(kind="empty")
    z = tuple(res.x[:n])
    eps = res.x[n]
    if eps.sign() > 0:
        return ImaginaryDomain(kind="interior", interior_point=z, strict=True, slack=eps)
    # zero slack: K lies inside the boundary of its own halfspaces
    kind = "point" if _is_affine_point(sys, z) else "flat"
    return ImaginaryDomain(kind=kind, interior_point=z, strict=False, slack=ZERO)


def _is_affine_point(sys: CoxeterSystem, z: Vector) -> bool:
    return all(sys.gram_with_simple(s, z).is_zero() for s in range(sys.rank))


@dataclass
class Region:
    """Exact description of conv(E), when one is available.

    kind "empty": no limit roots (finite group).  kind "point": singleton
    radical direction (irreducible affine).  kind "nonpositive": the body is
    {x in simplex : B(x,x) <= 0} (irreducible rank <= 3, signature
    (rank-1,0,1)).  kind "generic": no exact description; only sampling.
    `complete` marks the kinds that decide emptiness of intersections.
    """

    kind: str
    complete: bool
    point: Vector | None = None  # the body, for kind "point"
    z: Vector | None = None  # a point of K for orbit sampling / witness
    domain: ImaginaryDomain | None = None


def imaginary_region(sys: CoxeterSystem) -> Region:
    npos, nzero, nneg = sys.signature()
    n = sys.rank
    if npos == n:
        return Region(kind="empty", complete=True)
    domain = build_K(sys)
    if sys.is_irreducible() and (npos, nzero, nneg) == (n - 1, 1, 0):
        if domain.kind != "point" or domain.interior_point is None:
            raise InternalCheckError("affine system without a point domain")
        delta = domain.interior_point
        return Region(kind="point", complete=True, point=delta, z=delta, domain=domain)
    if n <= 3 and sys.is_irreducible() and (npos, nzero, nneg) == (n - 1, 0, 1):
        if domain.interior_point is None:
            raise InternalCheckError("indefinite rank-<=3 system with empty K")
        return Region(
            kind="nonpositive", complete=True, z=domain.interior_point, domain=domain
        )
    return Region(kind="generic", complete=False, z=domain.interior_point, domain=domain)


def _segment_min_form(sys: CoxeterSystem, u: Vector, v: Vector):
    """Exact minimum of B(x,x) on the segment [u, v] and its witness point."""
    d = tuple(b - a for a, b in zip(u, v))
    qa = sys.bilinear(d, d)
    qb = sys.bilinear(u, d) * Scalar(2)
    qc = sys.bilinear(u, u)

    def at(t: Scalar):
        point = tuple(a + t * b for a, b in zip(u, d))
        return qc + qb * t + qa * t * t, point

    candidates = [at(ZERO), at(ONE)]
    if qa.sign() > 0:
        t_star = -qb / (Scalar(2) * qa)
        if t_star.sign() > 0 and (t_star - 1).sign() < 0:
            candidates.append(at(t_star))
    return min(candidates, key=lambda pair: pair[0])


def region_meets_hull(sys: CoxeterSystem, region: Region, points: list[Vector]):
    """Exact test conv(points) meets conv(E), for a complete region.

    Returns a witness point of the intersection, or None.  Points must be
    normalized.  Complete kinds only.
    """
    if not region.complete:
        raise InputError("region has no exact description")
    if not points:
        return None
    if region.kind == "empty":
        return None
    if region.kind == "point":
        cols = [list(p) + [ONE] for p in points]
        res = solve_combination(cols, list(region.point) + [ONE])
        return region.point if res.feasible else None
    # nonpositive body: vertex inside, edge crossing, or body inside the hull
    for p in points:
        if sys.bilinear(p, p).sign() <= 0:
            return p
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            value, witness = _segment_min_form(sys, points[i], points[j])
            if value.sign() <= 0:
                return witness
    z = region.z
    cols = [list(p) + [ONE] for p in points]
    if solve_combination(cols, list(z) + [ONE]).feasible:
        return z
    return None


# -- projective action and orbits ---------------------------------------------


def act(sys: CoxeterSystem, letters: tuple[int, ...], x: Vector) -> Vector:
    """w . x = normalized w(x); defined where the image keeps positive height."""
    image = sys.apply_word(letters, x)
    h = height(image)
    if h.sign() <= 0:
        raise InputError("point left the region where the projective action is defined")
    return normalize(image)


def orbit_sample(
    sys: CoxeterSystem, z: Vector, depth: int, node_cap: int = 20000
) -> list[tuple[tuple[int, ...], Vector]]:
    """All distinct points w . z for l(w) <= depth, BFS, exact deduplication."""
    if z is None:
        raise InputError("no interior point available for orbit sampling")
    out = [((), z)]
    seen = {z}
    frontier = [((), z)]
    for _ in range(depth):
        nxt = []
        for letters, point in frontier:
            for s in range(sys.rank):
                img = act(sys, (s,), point)
                if img not in seen:
                    seen.add(img)
                    entry = ((s,) + letters, img)
                    nxt.append(entry)
                    out.append(entry)
                    if len(out) > node_cap:
                        return out
        if not nxt:
            break
        frontier = nxt
    return out


# -- probes (evidence only, never proofs) --------------------------------------


def _cluster(points: list[tuple[float, ...]], tol: float):
    clusters: list[list[tuple[float, ...]]] = []
    for p in points:
        for cl in clusters:
            c = cl[0]
            if max(abs(a - b) for a, b in zip(p, c)) <= tol:
                cl.append(p)
                break
        else:
            clusters.append([p])
    out = []
    for cl in clusters:
        dim = len(cl[0])
        center = tuple(sum(p[k] for p in cl) / len(cl) for k in range(dim))
        diameter = max(
            (max(abs(a - b) for a, b in zip(p, q)) for p in cl for q in cl), default=0.0
        )
        out.append({"center": center, "size": len(cl), "diameter": diameter})
    out.sort(key=lambda c: -c["size"])
    return out


def limit_root_sample(store: RootStore, depth: int, tol: float = 1e-6, tail: int = 3):
    """Cluster float-normalized deep roots; isotropy residual per cluster.

    Evidence for the limit-root set only; exact decisions never consume this.
    """
    store.generate(depth)
    lo = max(0, depth - tail)
    pts = [norm_floats(r.vec) for r in store.roots if lo <= r.depth <= depth]
    clusters = _cluster(pts, tol)
    sys = store.system
    for cl in clusters:
        v = cl["center"]
        residual = 0.0
        for i in range(sys.rank):
            for j in range(sys.rank):
                residual += v[i] * v[j] * sys.gram[i][j].to_float()
        cl["isotropy_residual"] = abs(residual)
    return clusters


def probe_orbit_vs_inversions(
    sys: CoxeterSystem,
    letters,
    z: Vector,
    n: int,
    tol: float = 1e-4,
):
    """Track w_k . z against the normalized inversion roots of the same word.

    `letters` yields generator indices of an infinite reduced word.  Both
    sequences are float shadows driven by one running matrix of w_k (columns
    rescaled jointly, which leaves all projective data unchanged).  Returns
    tail cluster reports for both sequences plus their final distance.
    """
    rank = sys.rank
    gram_f = [[sys.gram[i][j].to_float() for j in range(rank)] for i in range(rank)]
    zf = [c.to_float() for c in z]
    # columns[j] = w_k(e_j) as floats
    columns = [[1.0 if i == j else 0.0 for i in range(rank)] for j in range(rank)]

    def normalized(vec):
        total = sum(vec)
        return tuple(c / total for c in vec)

    orbit_pts: list[tuple[float, ...]] = []
    root_pts: list[tuple[float, ...]] = []
    for k, s in enumerate(letters):
        if k >= n:
            break
        # beta_{k+1} = w_k(alpha_s) is the current column s
        root_pts.append(normalized(columns[s]))
        # w_{k+1} = w_k s: col_j -= 2 gram[s][j] col_s
        col_s = list(columns[s])
        for j in range(rank):
            g = gram_f[s][j]
            if g != 0.0:
                cj = columns[j]
                for i in range(rank):
                    cj[i] -= 2.0 * g * col_s[i]
        scale = max(abs(v) for col in columns for v in col)
        if scale > 1e120:
            for col in columns:
                for i in range(rank):
                    col[i] /= scale
        image = [sum(columns[j][i] * zf[j] for j in range(rank)) for i in range(rank)]
        orbit_pts.append(normalized(image))
    tail = max(1, len(orbit_pts) // 10)
    final_distance = (
        max(abs(a - b) for a, b in zip(orbit_pts[-1], root_pts[-1]))
        if orbit_pts
        else float("inf")
    )
    return {
        "orbit_clusters": _cluster(orbit_pts[-tail:], tol),
        "inversion_clusters": _cluster(root_pts[-tail:], tol),
        "final_distance": final_distance,
        "steps": len(orbit_pts),
    }
