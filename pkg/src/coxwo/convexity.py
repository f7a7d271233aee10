"""Exact convex geometry over root sets: cones, hulls, separation, closures.

All decisions run over the scalar field; floats never enter.  Cone and hull
membership are small exact LPs with certificates both ways (coefficients when
feasible, a separating functional otherwise).  Set classification combines
geometric window scans (which produce witnesses) with the exact finite-set
equivalences pinned by peeling; rank <= 3 systems get fast projective-plane
paths, higher ranks fall back to LPs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coxsys import Vector, vsub
from .errors import InternalCheckError
from .lp import solve_combination
from .rootstore import RootStore, dihedral_interval, normalize
from .scalar import ONE, ZERO, Scalar


@dataclass
class ConeMembership:
    inside: bool
    coefficients: list[Scalar] = field(default_factory=list)
    separator: list[Scalar] = field(default_factory=list)  # rho with rho.target > 0 >= rho.gen


def in_cone(target: Vector, generators: list[Vector]) -> ConeMembership:
    """Exact test target in cone(generators), with a certificate either way."""
    res = solve_combination([list(g) for g in generators], list(target))
    if res.feasible:
        return ConeMembership(inside=True, coefficients=res.x)
    return ConeMembership(inside=False, separator=res.farkas)


def in_hull(target: Vector, points: list[Vector]) -> ConeMembership:
    """Exact test target in conv(points): cone membership plus weight sum 1."""
    cols = [list(p) + [ONE] for p in points]
    rhs = list(target) + [ONE]
    res = solve_combination(cols, rhs)
    if res.feasible:
        return ConeMembership(inside=True, coefficients=res.x)
    return ConeMembership(inside=False, separator=res.farkas)


@dataclass
class Separation:
    hyperplane: list[Scalar] | None  # functional rho, or None if the hulls meet
    threshold: Scalar = ZERO  # rho(p) >= threshold + gap, rho(q) <= threshold - gap
    gap: Scalar = ZERO
    common_point: Vector | None = None  # exact point in both hulls when not separable


def strictly_separate(p_points: list[Vector], q_points: list[Vector]) -> Separation:
    """Strict hyperplane separation of two finite point sets, or its refutation.

    Decided through the hull-intersection LP (few rows, one column per
    point); infeasibility yields a Farkas functional that separates with an
    exact positive gap, feasibility yields an exact common point.  The two
    outcomes cross-check each other by duality.
    """
    dim = len(p_points[0])
    cols = [list(p) + [ONE, ZERO] for p in p_points]
    cols += [[-c for c in q] + [ZERO, ONE] for q in q_points]
    rhs = [ZERO] * dim + [ONE, ONE]
    res = solve_combination(cols, rhs)
    if res.feasible:
        common = tuple(
            sum((res.x[i] * p_points[i][k] for i in range(len(p_points))), ZERO)
            for k in range(dim)
        )
        return Separation(hyperplane=None, common_point=common)
    y = res.farkas
    # y.col <= 0 reads rho0.p <= -s and rho0.q >= t with s + t > 0; negating
    # rho0 puts P on the high side: rho.p >= s, rho.q <= -t
    rho0, s, t = y[:dim], y[dim], y[dim + 1]
    rho = [-v for v in rho0]
    mid = (s - t) / Scalar(2)
    gap = (s + t) / Scalar(2)
    if gap.sign() <= 0:
        raise InternalCheckError("Farkas certificate lost its gap")
    return Separation(hyperplane=rho, threshold=mid, gap=gap)


# -- exact plane geometry (rank <= 3 fast paths) ------------------------------


def _plane(vec: Vector) -> tuple[Scalar, Scalar]:
    n = normalize(vec)
    return (n[0], n[1] if len(n) > 1 else ZERO)


def _orient(p, q, r) -> int:
    return ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])).sign()


def hull2d(points: list[tuple[Scalar, Scalar]]) -> list[tuple[Scalar, Scalar]]:
    """Convex hull, counterclockwise, via Andrew's monotone chain; exact."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) >= 3:
        return hull
    return [pts[0], pts[-1]]  # collinear: lexicographic extremes span the segment


def _between(a, b, p) -> bool:
    if _orient(a, b, p) != 0:
        return False
    lo0, hi0 = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
    lo1, hi1 = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
    return lo0 <= p[0] <= hi0 and lo1 <= p[1] <= hi1


def in_hull2d(p, hull: list[tuple[Scalar, Scalar]]) -> bool:
    """Inclusive membership in a convex polygon/segment/point from hull2d."""
    if not hull:
        return False
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        return _between(hull[0], hull[1], p)
    for i in range(len(hull)):
        if _orient(hull[i], hull[(i + 1) % len(hull)], p) < 0:
            return False
    return True


def _direction_key(frm, to):
    """Exact line key (slope) of the 2D ray frm -> to, plus its side bit."""
    dx, dy = to[0] - frm[0], to[1] - frm[1]
    sx, sy = dx.sign(), dy.sign()
    if sx != 0:
        return (ONE, dy / dx), sx > 0
    return (ZERO, ONE), sy > 0


# -- closure operators --------------------------------------------------------


@dataclass
class ClosureResult:
    finite: bool
    members: list[Vector] = field(default_factory=list)
    witness_pair: tuple[Vector, Vector] | None = None  # forces an infinite tail


def two_closure(store: RootStore, roots: list[Vector], pair_cap: int = 40000) -> ClosureResult:
    """Smallest closed superset: worklist fixpoint over pairwise intervals.

    Infinitude is detected eagerly: the moment any two members have B <= -1,
    their interval accumulates at an isotropic direction and is forced
    wholesale into every closed superset, so the closure is infinite.  The
    eager scan keeps the verdict independent of the worklist order.
    """
    sys = store.system
    members: list[Vector] = []
    seen: set[Vector] = set()
    pending: list[tuple[int, int]] = []

    def add(vec: Vector):
        for other in members:
            if (sys.bilinear(vec, other) + 1).sign() <= 0:
                return vec, other
        k = len(members)
        members.append(vec)
        seen.add(vec)
        pending.extend((m, k) for m in range(k))
        return None

    for v in roots:
        if v not in seen:
            witness = add(v)
            if witness:
                return ClosureResult(finite=False, witness_pair=witness)
    processed = 0
    while pending:
        processed += 1
        if processed > pair_cap:
            raise InternalCheckError("two_closure failed to stabilize within the pair cap")
        i, j = pending.pop()
        for vec in dihedral_interval(store, members[i], members[j]).members:
            if vec not in seen:
                witness = add(vec)
                if witness:
                    return ClosureResult(finite=False, witness_pair=witness)
    return ClosureResult(finite=True, members=sorted(members))


def cone_closure(store: RootStore, roots: list[Vector], depth: int) -> list[Vector]:
    """All stored roots of depth <= depth inside cone(roots); window-only."""
    window = store.window(depth)
    rootset = set(roots)
    if store.system.rank <= 3 and roots:
        hull = hull2d([_plane(v) for v in roots])
        return [r.vec for r in window if r.vec in rootset or in_hull2d(_plane(r.vec), hull)]
    gens = [list(v) for v in roots]
    return [
        r.vec
        for r in window
        if r.vec in rootset or solve_combination(gens, list(r.vec)).feasible
    ]


# -- classification ------------------------------------------------------------


@dataclass
class Flag:
    value: bool
    exact: bool
    witness: object = None

    def as_json(self, depth: int) -> dict:
        out = {"value": self.value, "exactness": "exact" if self.exact else "window"}
        if not self.exact:
            out["depth"] = depth
        if self.witness is not None:
            out["witness"] = _witness_json(self.witness)
        return out


def _witness_json(w):
    if isinstance(w, tuple) and w and isinstance(w[0], Scalar):
        return [str(c) for c in w]
    if isinstance(w, (list, tuple)):
        return [_witness_json(x) for x in w]
    return str(w)


@dataclass
class Classification:
    closed: Flag
    coclosed: Flag
    convex: Flag
    coconvex: Flag
    separable: Flag
    depth: int
    biclosed_override: Flag | None = None
    biconvex_override: Flag | None = None

    @property
    def biclosed(self) -> Flag:
        return self.biclosed_override or _conj(self.closed, self.coclosed)

    @property
    def biconvex(self) -> Flag:
        return self.biconvex_override or _conj(self.convex, self.coconvex)

    def as_json(self) -> dict:
        out = {
            name: getattr(self, name).as_json(self.depth)
            for name in ("closed", "coclosed", "convex", "coconvex", "separable")
        }
        out["biclosed"] = self.biclosed.as_json(self.depth)
        out["biconvex"] = self.biconvex.as_json(self.depth)
        out["depth"] = self.depth
        return out


def _conj(a: Flag, b: Flag) -> Flag:
    if not a.value and a.exact:
        return Flag(False, True, a.witness)
    if not b.value and b.exact:
        return Flag(False, True, b.witness)
    return Flag(a.value and b.value, a.exact and b.exact)


def classify(
    store: RootStore,
    roots: list[Vector],
    depth: int,
    truncated: bool = False,
    imaginary_points: list[Vector] | None = None,
    pool_margin: int = 2,
    universe: list[Vector] | None = None,
    pool: list[Vector] | None = None,
) -> Classification:
    """Closed/coclosed/convex/coconvex/separable flags with exactness tags.

    `roots` is the set A inside the positive system enumerated by `store`
    (pass a subsystem store, or an explicit `universe` of roots, to classify
    inside a root subsystem).  The complement is the universe (default: the
    store window at `depth`) minus A; refutation witnesses are additionally
    searched in a slightly deeper pool.  With truncated=False, A is a
    complete finite set and peeling pins the biclosed = biconvex = separable
    values exactly; geometric window results must be consistent with them.
    With truncated=True (a window of an infinite set), every surviving flag
    is window-qualified, while exact refutation witnesses keep their exact
    tag.
    """
    from .weakorder import peel  # local import: weakorder builds on this module

    sys = store.system
    aset = set(roots)
    if universe is None:
        universe = [r.vec for r in store.window(depth)]
    if pool is None:
        if truncated:
            # beyond the window the set membership of a root is unknown, so
            # only universe roots can serve as witnesses
            pool = universe
        else:
            pool = [r.vec for r in store.window(depth + pool_margin)]
            if len(pool) < len(universe):
                pool = universe
    complement = [v for v in universe if v not in aset]
    pool_complement = [v for v in pool if v not in aset]

    closed = _closed_flag(sys, roots, aset, pool, truncated)
    coclosed = _coclosed_flag(roots, pool_complement)
    convex = _convex_flag(sys, roots, aset, pool_complement)
    coconvex = _coconvex_flag(sys, roots, complement)

    norm_a = [normalize(v) for v in roots]
    norm_c = [normalize(v) for v in complement]
    if imaginary_points:
        norm_c = norm_c + [normalize(p) for p in imaginary_points]
    if roots and norm_c:
        sep = strictly_separate(norm_a, norm_c)
        separable = Flag(sep.hyperplane is not None, False,
                         None if sep.hyperplane is not None else sep.common_point)
    else:
        separable = Flag(True, False)

    result = Classification(closed, coclosed, convex, coconvex, separable, depth)
    if store.is_complete() and len(universe) == len(store.roots):
        # finite root system fully enumerated: every window scan was exhaustive
        for name in ("closed", "coclosed", "convex", "coconvex", "separable"):
            flag = getattr(result, name)
            setattr(result, name, Flag(flag.value, True, flag.witness))
    if truncated:
        return result

    peeled = peel(sys, roots)
    if peeled.word is not None:
        # inversion set: all five notions hold exactly; window scans must agree
        if not (closed.value and coclosed.value and convex.value and coconvex.value
                and separable.value):
            raise InternalCheckError("peelable set failed a geometric window check")
        exact_true = Flag(True, True)
        result.closed = exact_true
        result.coclosed = exact_true
        result.convex = exact_true
        result.coconvex = exact_true
        result.separable = exact_true
    else:
        result.biclosed_override = _refute(result.biclosed, peeled.witness)
        result.biconvex_override = _refute(result.biconvex, peeled.witness)
        result.separable = _refute(result.separable, peeled.witness)
        if result.closed.value and result.closed.exact and result.coclosed.value:
            result.coclosed = Flag(False, True, peeled.witness)
    return result


def _refute(flag: Flag, fallback_witness) -> Flag:
    if not flag.value and flag.exact:
        return flag
    return Flag(False, True, flag.witness if (not flag.value and flag.witness) else fallback_witness)


def _closed_flag(sys, roots, aset, pool, truncated: bool) -> Flag:
    if not truncated and len(roots) >= 2:
        # a pair with B <= -1 forces an infinite interval, which a complete
        # finite set cannot contain; for window truncations of infinite sets
        # such pairs are legitimate and only the window scan applies
        for i, a in enumerate(roots):
            for b in roots[i + 1 :]:
                if (sys.bilinear(a, b) + 1).sign() <= 0:
                    return Flag(False, True, (a, b))
    witness = _straddled(roots, [v for v in pool if v not in aset])
    if witness:
        u, pair = witness
        return Flag(False, True, u)
    return Flag(True, not truncated)


def _coclosed_flag(roots, pool_complement) -> Flag:
    witness = _straddled(pool_complement, roots)
    if witness:
        a, pair = witness
        return Flag(False, True, pair)
    return Flag(True, False)


def _straddled(points: list[Vector], probes: list[Vector]):
    """First probe lying strictly between two of `points` (projectively).

    p in cone(a, b) for distinct positive roots iff the normalized p sits
    strictly between the normalized a and b, i.e. the exact directions from
    p to a and to b are opposite.  Fully rational coordinates take an
    integer-pair fast path; quadratic fields go through scalar slopes.
    """
    if len(points) < 2 or not probes:
        return None
    planar = [(_plane(v), v) for v in points]
    probe_planes = [(_plane(p), p) for p in probes]
    rational = all(
        q[0].b == 0 and q[1].b == 0 for q, _ in planar
    ) and all(q[0].b == 0 and q[1].b == 0 for q, _ in probe_planes)
    if rational:
        rat = [((q[0].a, q[1].a), vec) for q, vec in planar]
        for (pp, probe) in probe_planes:
            px, py = pp[0].a, pp[1].a
            seen: dict = {}
            for (qx, qy), vec in rat:
                dx, dy = qx - px, qy - py
                if not dx and not dy:
                    continue
                # reduced integer direction: exact and division-free
                a = dx.numerator * dy.denominator
                b = dy.numerator * dx.denominator
                positive = b > 0 or (b == 0 and a > 0)
                if not positive:
                    a, b = -a, -b
                g = math.gcd(a, abs(b)) if b else a
                key = (a // g, b // g)
                sides = seen.setdefault(key, {})
                sides[positive] = vec
                if True in sides and False in sides:
                    return probe, (sides[True], sides[False])
        return None
    for (pp, probe) in probe_planes:
        seen = {}
        for q, vec in planar:
            if q == pp:
                continue
            key, positive = _direction_key(pp, q)
            sides = seen.setdefault(key, {})
            sides[positive] = vec
            if True in sides and False in sides:
                return probe, (sides[True], sides[False])
    return None


def _convex_flag(sys, roots, aset, pool_complement) -> Flag:
    if not roots:
        return Flag(True, True)
    if sys.rank <= 3:
        hull = hull2d([_plane(v) for v in roots])
        for v in pool_complement:
            if in_hull2d(_plane(v), hull):
                return Flag(False, True, v)
        return Flag(True, False)
    gens = [list(v) for v in roots]
    for v in pool_complement:
        if solve_combination(gens, list(v)).feasible:
            return Flag(False, True, v)
    return Flag(True, False)


def _coconvex_flag(sys, roots, complement) -> Flag:
    if not complement or not roots:
        return Flag(True, not complement)
    if sys.rank <= 3:
        hull = hull2d([_plane(v) for v in complement])
        for a in roots:
            if in_hull2d(_plane(a), hull):
                return Flag(False, True, a)
        return Flag(True, False)
    gens = [list(v) for v in complement]
    for a in roots:
        if solve_combination(gens, list(a)).feasible:
            return Flag(False, True, a)
    return Flag(True, False)
