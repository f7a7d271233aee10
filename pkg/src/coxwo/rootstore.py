"""Depth-windowed enumeration of positive roots and the projective view.

The store holds positive roots only, discovered breadth-first: depth 0 is the
simple system, and depth k+1 roots are new positive images of depth-k roots
under the simple reflections.  Ties inside a depth are broken by exact
lexicographic coordinate order, so indices are reproducible.  A store built
from a non-basis simple system (a reflection subsystem living inside an
ambient system) works identically; coordinates always refer to the ambient
basis.

Extension is single-writer; readers work on the immutable index prefix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxsys import CoxeterSystem, Vector, is_nonneg, is_nonpos, vneg
from .errors import InputError, InternalCheckError
from .lp import solve_combination
from .scalar import ONE, ZERO, Scalar


@dataclass(frozen=True)
class Root:
    vec: Vector
    depth: int
    index: int


def height(vec: Vector) -> Scalar:
    total = ZERO
    for c in vec:
        total = total + c
    return total


def normalize(vec: Vector) -> Vector:
    """Intersection of the ray through vec with the affine slice {sum = 1}."""
    h = height(vec)
    if h.sign() == 0:
        raise InputError("cannot normalize a vector with zero coordinate sum")
    return tuple(c / h for c in vec)


def norm_floats(vec: Vector) -> tuple[float, ...]:
    h = sum(c.to_float() for c in vec)
    return tuple(c.to_float() / h for c in vec)


class RootStore:
    def __init__(self, system: CoxeterSystem, simples: list[Vector] | None = None):
        self.system = system
        self.is_ambient = simples is None
        if simples is None:
            simples = [system.simple_root(i) for i in range(system.rank)]
        self.simples: tuple[Vector, ...] = tuple(simples)
        self.roots: list[Root] = []
        self.index: dict[Vector, int] = {}
        self.heights: list[Scalar] = []
        self.frontier_depth = 0
        self._depth_start = [0]
        for vec in self.simples:
            self._append(vec, 0)

    def __len__(self) -> int:
        return len(self.roots)

    def _append(self, vec: Vector, depth: int) -> int:
        idx = len(self.roots)
        self.roots.append(Root(vec=vec, depth=depth, index=idx))
        self.index[vec] = idx
        self.heights.append(height(vec))
        return idx

    def _reflect(self, k: int, vec: Vector) -> Vector:
        if self.is_ambient:
            return self.system.reflect_simple(k, vec)
        return self.system.reflect(self.simples[k], vec)

    def step(self) -> int:
        """Advance the frontier one depth; returns the number of new roots."""
        lo = self._depth_start[self.frontier_depth]
        hi = len(self.roots)
        found: set[Vector] = set()
        for i in range(lo, hi):
            vec = self.roots[i].vec
            for k in range(len(self.simples)):
                img = self._reflect(k, vec)
                if img in self.index or img in found:
                    continue
                if is_nonneg(img):
                    found.add(img)
                elif not is_nonpos(img):
                    raise InternalCheckError("reflection produced a mixed-sign vector")
        self.frontier_depth += 1
        self._depth_start.append(len(self.roots))
        for vec in sorted(found):
            self._append(vec, self.frontier_depth)
        return len(found)

    def generate(self, depth_limit: int) -> RootStore:
        while self.frontier_depth < depth_limit and not self.is_complete():
            self.step()
        return self

    def is_complete(self) -> bool:
        """True once a whole frontier produced nothing new (finite root system)."""
        return (
            self.frontier_depth > 0
            and self._depth_start[self.frontier_depth] == len(self.roots)
        )

    def depth_counts(self) -> list[int]:
        starts = self._depth_start + [len(self.roots)]
        return [starts[k + 1] - starts[k] for k in range(self.frontier_depth + 1)]

    def depth_slice(self, depth: int) -> list[Root]:
        starts = self._depth_start + [len(self.roots)]
        if depth > self.frontier_depth:
            return []
        return self.roots[starts[depth] : starts[depth + 1]]

    def window(self, depth: int) -> list[Root]:
        """All roots of depth <= depth (generating the store as needed)."""
        self.generate(depth)
        if depth >= self.frontier_depth:
            return list(self.roots)
        return self.roots[: self._depth_start[depth + 1]]

    def lookup(self, vec: Vector) -> int | None:
        return self.index.get(vec)

    def ensure_contains(self, vec: Vector, max_extra_depth: int = 40) -> int:
        """Extend the store until vec appears; it must be a positive root."""
        idx = self.index.get(vec)
        steps = 0
        while idx is None:
            if self.is_complete() or steps >= max_extra_depth:
                raise InternalCheckError("vector never appeared as a positive root")
            self.step()
            steps += 1
            idx = self.index.get(vec)
        return idx


# -- rank-2 intervals -------------------------------------------------------


@dataclass
class Interval:
    finite: bool
    members: list[Vector]  # complete when finite, truncated otherwise


def span_coefficients(alpha: Vector, beta: Vector, gamma: Vector):
    """Exact (a, b) with gamma = a*alpha + b*beta, or None if not in the span."""
    pair = None
    n = len(alpha)
    for i in range(n):
        for j in range(i + 1, n):
            det = alpha[i] * beta[j] - alpha[j] * beta[i]
            if det.sign() != 0:
                pair = (i, j, det)
                break
        if pair:
            break
    if pair is None:
        return None  # proportional vectors; distinct unit roots never hit this
    i, j, det = pair
    a = (gamma[i] * beta[j] - gamma[j] * beta[i]) / det
    b = (alpha[i] * gamma[j] - alpha[j] * gamma[i]) / det
    for k in range(n):
        if not (a * alpha[k] + b * beta[k] == gamma[k]):
            return None
    return a, b


def _cone_coefficients(alpha: Vector, beta: Vector, gamma: Vector):
    coeffs = span_coefficients(alpha, beta, gamma)
    if coeffs and coeffs[0].sign() >= 0 and coeffs[1].sign() >= 0:
        return coeffs
    return None


def _closure_members(store: RootStore, alpha: Vector, beta: Vector, cap: int) -> list[Vector]:
    """Close {alpha, beta} under their own reflections, keeping cone members."""
    sys = store.system
    members = {alpha, beta}
    frontier = [alpha, beta]
    while frontier and len(members) < cap:
        nxt = []
        for v in frontier:
            for mirror in (alpha, beta):
                img = sys.reflect(mirror, v)
                if img not in members and _cone_coefficients(alpha, beta, img):
                    members.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(members)


def dihedral_interval(store: RootStore, alpha: Vector, beta: Vector, cap: int = 200) -> Interval:
    """All roots in cone(alpha, beta), for two distinct positive roots.

    Infinite exactly when B(alpha, beta) <= -1 (the segment between the
    normalized endpoints then meets the isotropic set, where roots
    accumulate); the members list is a truncation in that case.  In the
    finite case every member gamma = a*alpha + b*beta has bounded
    coefficients, hence height below an exact bound; the store is grown until
    its last two depth levels sit entirely above that bound, scanned, and the
    result closed under member reflections as a safety net.
    """
    sys = store.system
    if alpha == beta:
        raise InputError("dihedral_interval needs two distinct roots")
    c = sys.bilinear(alpha, beta)
    if (c + 1).sign() <= 0:
        return Interval(finite=False, members=_closure_members(store, alpha, beta, cap))

    # coefficient bound: a^2 + 2abc + b^2 = 1 with a,b >= 0 gives a,b <= 1
    # for c >= 1 and a^2, b^2 <= 1/(1 - c^2) otherwise
    m2 = ONE if (c - 1).sign() >= 0 else ONE / (ONE - c * c)
    hsum = height(alpha) + height(beta)
    h2_bound = m2 * hsum * hsum

    def level_clear(depth: int) -> bool:
        return all(
            (store.heights[r.index] * store.heights[r.index] - h2_bound).sign() > 0
            for r in store.depth_slice(depth)
        )

    while not store.is_complete():
        d = store.frontier_depth
        if d >= 1 and level_clear(d) and level_clear(d - 1):
            break
        store.step()

    members: set[Vector] = set()
    for r in store.roots:
        if _cone_coefficients(alpha, beta, r.vec):
            members.add(r.vec)

    # close under reflections of the members themselves; any root found this
    # way must already be in the store (if not, the window was too shallow:
    # ensure_contains extends it and we keep going)
    work = list(members)
    guard = 0
    while work:
        guard += 1
        if guard > cap * cap:
            raise InternalCheckError("interval closure failed to stabilize")
        v = work.pop()
        for w in list(members):
            img = sys.reflect(v, w)
            if img not in members and _cone_coefficients(alpha, beta, img):
                store.ensure_contains(img)
                members.add(img)
                work.append(img)

    def position(vec: Vector) -> Scalar:
        a, b = span_coefficients(alpha, beta, vec)
        bh = b * height(beta)
        return bh / (a * height(alpha) + bh)

    return Interval(finite=True, members=sorted(members, key=position))


# -- reflection subsystems ---------------------------------------------------


def subsystem(
    sys: CoxeterSystem, generating_roots: list[Vector], depth_budget: int = 8
) -> tuple[list[Vector], RootStore]:
    """Simple system and store of the reflection subgroup of the given roots.

    The orbit of the generators under their own reflections is collected up to
    depth_budget generations (stopping early once stable); the simple system
    is the set of orbit members that are not nonnegative combinations of the
    others (extreme rays of the generated cone, decided by exact LP).
    """
    for g in generating_roots:
        if not is_nonneg(g):
            raise InputError("subsystem generators must be positive roots")
    orbit: set[Vector] = set(generating_roots)
    frontier = list(orbit)
    for _ in range(depth_budget):
        nxt = []
        for v in frontier:
            for g in generating_roots:
                img = sys.reflect(g, v)
                if is_nonpos(img):
                    img = vneg(img)
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        if not nxt:
            break
        frontier = nxt

    ordered = sorted(orbit)
    simples = []
    for i, v in enumerate(ordered):
        others = [list(w) for j, w in enumerate(ordered) if j != i]
        if not others or not solve_combination(others, list(v)).feasible:
            simples.append(v)

    for i, u in enumerate(simples):
        for v in simples[i + 1 :]:
            if sys.bilinear(u, v).sign() > 0:
                raise InternalCheckError(
                    "orbit budget too small: extracted rays are not a simple system"
                )
    return simples, RootStore(sys, simples=simples)
