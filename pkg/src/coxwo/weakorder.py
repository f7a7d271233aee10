"""Words, inversion sets, prefix order, meet, peeling and the join decision.

Words are tuples of generator indices; reducedness is decided by the
positivity of the produced inversion roots (the one exact mechanism the whole
module leans on).  decide_join follows the geometric criterion: the join of X
exists iff conv of the normalized inversion roots of X misses the imaginary
convex body.  Where an exact body description exists (finite, irreducible
affine, irreducible rank <= 3 indefinite) that test is decisive on its own;
otherwise a budgeted breadth-first search inside cone(N(X)) and exact orbit
sampling of the imaginary cone take over, and a verdict may remain unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxsys import CoxeterSystem, Vector, is_nonneg, is_nonpos
from .errors import InputError, InternalCheckError
from .imagcone import Region, imaginary_region, orbit_sample, region_meets_hull
from .lp import solve_combination
from .rootstore import RootStore, normalize
from .scalar import ONE, ZERO, Scalar

Letters = tuple[int, ...]


class NonReducedError(InputError):
    def __init__(self, position: int):
        super().__init__(f"word is not reduced: letter at position {position}")
        self.position = position


def parse_word(sys: CoxeterSystem, text: str) -> Letters:
    """Generator names joined by "."; the empty string is the identity."""
    if text == "":
        return ()
    return tuple(sys.generator_index(part) for part in text.split("."))


def format_word(sys: CoxeterSystem, letters: Letters) -> str:
    return ".".join(sys.generators[i] for i in letters)


def inversion_roots(sys: CoxeterSystem, letters: Letters) -> list[Vector]:
    """The roots s_1...s_{i-1}(alpha_{s_i}); raises NonReducedError on a
    negative one, reporting the offending position (0-based)."""
    roots: list[Vector] = []
    for i, s in enumerate(letters):
        vec = sys.apply_word(letters[:i], sys.simple_root(s))
        if not is_nonneg(vec):
            if not is_nonpos(vec):
                raise InternalCheckError("inversion root has mixed signs")
            raise NonReducedError(i)
        roots.append(vec)
    return roots


def is_reduced(sys: CoxeterSystem, letters: Letters) -> bool:
    try:
        inversion_roots(sys, letters)
        return True
    except NonReducedError:
        return False


def inversion_set(store: RootStore, letters: Letters) -> frozenset[int]:
    """Inversion roots as store indices; extends the store as needed."""
    roots = inversion_roots(store.system, letters)
    store.generate(len(letters))
    return frozenset(store.ensure_contains(v) for v in roots)


def concat_inversions(store: RootStore, u: Letters, v: Letters) -> frozenset[int]:
    """N(uv) = N(u) disjoint-union u(N(v)); errors if the product is not reduced."""
    sys = store.system
    nu = inversion_roots(sys, u)
    nv = inversion_roots(sys, v)
    mapped = [sys.apply_word(u, vec) for vec in nv]
    for i, vec in enumerate(mapped):
        if not is_nonneg(vec):
            raise NonReducedError(len(u) + i)
    union = set(nu)
    for vec in mapped:
        if vec in union:
            raise NonReducedError(len(u) + len(v))  # overlap: uv not reduced
        union.add(vec)
    store.generate(len(u) + len(v))
    return frozenset(store.ensure_contains(vec) for vec in union)


def reduce_word(sys: CoxeterSystem, letters: Letters) -> Letters:
    """Reduced word for the same element, by the deletion condition."""
    word = list(letters)
    while True:
        try:
            inversion_roots(sys, tuple(word))
            return tuple(word)
        except NonReducedError as err:
            k = err.position
            # walk v_m = s_m ... s_{k-1}(alpha_{s_k}) down from m = k; the
            # first sign flip happens exactly where v_{m+1} = alpha_{s_m}
            v = sys.simple_root(word[k])
            m = k - 1
            while m >= 0:
                if v == sys.simple_root(word[m]):
                    break
                v = sys.reflect_simple(word[m], v)
                m -= 1
            if m < 0:
                raise InternalCheckError("deletion pair not found in a non-reduced word")
            del word[k]
            del word[m]


def multiply(sys: CoxeterSystem, u: Letters, v: Letters) -> Letters:
    return reduce_word(sys, u + v)


def inverse(letters: Letters) -> Letters:
    return tuple(reversed(letters))


def word_length(sys: CoxeterSystem, letters: Letters) -> int:
    return len(reduce_word(sys, letters))


def is_prefix(sys: CoxeterSystem, u: Letters, w: Letters) -> bool:
    """u <= w in the right weak order: l(u) + l(u^-1 w) = l(w)."""
    rest = reduce_word(sys, inverse(u) + w)
    return len(u) + len(rest) == len(w)


def meet(sys: CoxeterSystem, words: list[Letters]) -> Letters:
    """Greatest common prefix: grow g letter by letter while g s stays below
    every word.  Lower bounds of a set form an interval [e, meet], so the
    greedy extension stalls exactly at the meet."""
    if not words:
        raise InputError("meet needs at least one word")
    for w in words:
        inversion_roots(sys, w)  # validate reducedness
    g: Letters = ()
    while True:
        for s in range(sys.rank):
            gs = g + (s,)
            if is_reduced(sys, gs) and all(is_prefix(sys, gs, w) for w in words):
                g = gs
                break
        else:
            return g


@dataclass
class PeelResult:
    word: Letters | None  # indices into the simple system used for peeling
    witness: object = None  # set without a simple root, or a negated root


def peel(sys: CoxeterSystem, roots: list[Vector], simples: list[Vector] | None = None) -> PeelResult:
    """Reconstruct a word from a finite root set, or certify it is not an
    inversion set.

    Pick a simple root alpha_s in A (lexicographically first for
    determinism), replace A by s(A minus alpha_s), recurse.  Success returns
    a word whose inversion set is exactly the input; failure returns the
    witness ("no simple root present", or a root sent negative).
    """
    if simples is None:
        simples = [sys.simple_root(i) for i in range(sys.rank)]
    current = sorted(set(roots))
    word: list[int] = []
    while current:
        pick = None
        for s, simple in enumerate(simples):
            if simple in current:
                pick = s
                break
        if pick is None:
            return PeelResult(word=None, witness=("no_simple_root", list(current)))
        mirror = simples[pick]
        word.append(pick)
        rest = []
        for vec in current:
            if vec == mirror:
                continue
            img = sys.reflect(mirror, vec)
            if not is_nonneg(img):
                if not is_nonpos(img):
                    raise InternalCheckError("peel produced a mixed-sign vector")
                return PeelResult(word=None, witness=("negative_root", vec))
            rest.append(img)
        current = sorted(rest)
    return PeelResult(word=tuple(word))


# -- element enumeration (finite windows) --------------------------------------


@dataclass
class Element:
    letters: Letters
    inversions: frozenset  # store indices (ball enumeration) or raw vectors (join search)
    columns: tuple[Vector, ...]  # images of the basis under the element


def enumerate_ball(store: RootStore, max_length: int, node_cap: int = 500000) -> list[Element]:
    """All group elements of length <= max_length with their inversion sets."""
    sys = store.system
    store.generate(max_length)
    identity = Element(
        letters=(), inversions=frozenset(), columns=tuple(sys.simple_root(i) for i in range(sys.rank))
    )
    seen = {identity.inversions}
    out = [identity]
    frontier = [identity]
    for _ in range(max_length):
        nxt = []
        for el in frontier:
            for s in range(sys.rank):
                root = el.columns[s]
                if not is_nonneg(root):
                    continue  # descent: gs is shorter
                idx = store.ensure_contains(root)
                inv = el.inversions | {idx}
                if inv in seen:
                    continue
                seen.add(inv)
                child = Element(
                    letters=el.letters + (s,),
                    inversions=inv,
                    columns=_extend_columns(sys, el.columns, s),
                )
                nxt.append(child)
                out.append(child)
                if len(out) > node_cap:
                    raise InternalCheckError("element ball exceeded the node cap")
        if not nxt:
            break
        frontier = nxt
    return out


def _extend_columns(sys: CoxeterSystem, columns: tuple[Vector, ...], s: int) -> tuple[Vector, ...]:
    # columns of g * s: (g s)(e_j) = g(e_j) - 2 gram[s][j] g(e_s)
    col_s = columns[s]
    two = Scalar(2)
    new = []
    for j, col in enumerate(columns):
        g = sys.gram[s][j]
        if g.is_zero():
            new.append(col)
        else:
            c = two * g
            new.append(tuple(a - c * b for a, b in zip(col, col_s)))
    return tuple(new)


def longest_element(store: RootStore, cap: int = 200000) -> Letters:
    """w_o of a finite group: the unique element with no ascent."""
    if store.system.signature() != (store.system.rank, 0, 0):
        raise InputError("the group is not finite (gram matrix is not positive definite)")
    ball = enumerate_ball(store, cap)
    top = max(ball, key=lambda el: len(el.letters))
    maxima = [el for el in ball if len(el.letters) == len(top.letters)]
    if len(maxima) != 1:
        raise InternalCheckError("finite group has more than one maximal element")
    return top.letters


def finite_group_join(store: RootStore, words: list[Letters]) -> Letters:
    """Join in a finite group through the longest element:
    join(X) = (meet of X w_o) w_o."""
    sys = store.system
    w0 = longest_element(store)
    shifted = [multiply(sys, w, w0) for w in words]
    return multiply(sys, meet(sys, shifted), w0)


# -- join decision --------------------------------------------------------------


@dataclass
class JoinVerdict:
    kind: str  # "exists" | "not_exists" | "unknown"
    word: Letters | None = None
    inversions: frozenset[Vector] | None = None
    witness_kind: str | None = None  # "imaginary_point" | "multiple_maxima"
    witness_point: Vector | None = None
    witness_words: list[Letters] = field(default_factory=list)
    report: dict = field(default_factory=dict)


def decide_join(
    store: RootStore,
    words: list[Letters],
    node_budget: int = 100000,
    orbit_depth: int = 12,
    region: Region | None = None,
) -> JoinVerdict:
    """Decide whether the join of the given elements exists, with certificates.

    The imaginary-region test comes first: an exact intersection point of
    conv of the normalized inversion roots with the imaginary convex body
    refutes existence outright, and for systems with a complete region a miss
    proves existence, making the subsequent bounded search a pure
    construction.  The search explores exactly the elements whose inversion
    sets sit inside cone(N(X)); the minimal element containing N(X) is the
    join.  If the search closes without one, no upper bound exists at all.
    Only systems without a complete region can end unknown.
    """
    sys = store.system
    if not words:
        raise InputError("decide_join needs at least one word")
    inv_sets = [frozenset(inversion_roots(sys, w)) for w in words]
    target: frozenset[Vector] = frozenset().union(*inv_sets)
    for w, inv in zip(words, inv_sets):
        if target <= inv:
            return JoinVerdict(kind="exists", word=w, inversions=inv)

    target_vecs = sorted(target)
    normalized = [normalize(v) for v in target_vecs]
    if region is None:
        region = imaginary_region(sys)
    if region.complete:
        witness = region_meets_hull(sys, region, normalized)
        if witness is not None:
            return JoinVerdict(
                kind="not_exists", witness_kind="imaginary_point", witness_point=witness
            )

    verdict = _phase_a(sys, target, target_vecs, node_budget)
    if verdict is not None:
        return verdict

    if region.complete:
        raise InternalCheckError(
            "join guaranteed by the imaginary criterion but not found within budget; "
            "raise the node budget"
        )
    if region.z is not None:
        cols = [list(p) + [ONE] for p in normalized]
        for letters, point in orbit_sample(sys, region.z, orbit_depth):
            if solve_combination(cols, list(point) + [ONE]).feasible:
                return JoinVerdict(
                    kind="not_exists",
                    witness_kind="imaginary_point",
                    witness_point=point,
                    witness_words=[letters],
                )
    return JoinVerdict(
        kind="unknown",
        report={"node_budget": node_budget, "orbit_depth": orbit_depth},
    )


def _phase_a(
    sys: CoxeterSystem, target: frozenset[Vector], target_vecs: list[Vector], node_budget: int
) -> JoinVerdict | None:
    """Level-synchronous BFS over {g : N(g) inside cone(N(X))}.

    Every element below the join is reachable (its inversion roots all lie in
    the cone), the space is finite whenever cone_Phi(N(X)) is, and the first
    level holding an element whose inversions contain N(X) holds exactly the
    join.  Nodes are deduplicated by their inversion sets as raw vectors, so
    no global root enumeration is ever triggered.  Returns None when the node
    budget runs out.
    """
    identity = Element(
        letters=(),
        inversions=frozenset(),
        columns=tuple(sys.simple_root(i) for i in range(sys.rank)),
    )
    cone_memo: dict[Vector, bool] = {v: True for v in target}
    gens = [list(v) for v in target_vecs]

    def in_target_cone(vec: Vector) -> bool:
        hit = cone_memo.get(vec)
        if hit is None:
            hit = solve_combination(gens, list(vec)).feasible
            cone_memo[vec] = hit
        return hit

    seen = {identity.inversions}
    frontier = [identity]
    explored = 1
    maxima: list[Letters] = []
    while frontier:
        nxt = []
        for el in frontier:
            extended = False
            for s in range(sys.rank):
                root = el.columns[s]
                if not is_nonneg(root):
                    continue
                if not in_target_cone(root):
                    continue
                inv = el.inversions | {root}
                if inv in seen:
                    extended = True  # the element exists, just reached earlier
                    continue
                seen.add(inv)
                nxt.append(
                    Element(
                        letters=el.letters + (s,),
                        inversions=inv,
                        columns=_extend_columns(sys, el.columns, s),
                    )
                )
                extended = True
            if not extended:
                maxima.append(el.letters)
        explored += len(nxt)
        hits = [el for el in nxt if target <= el.inversions]
        if hits:
            if len(hits) > 1:
                raise InternalCheckError("two minimal upper bounds: join uniqueness violated")
            el = hits[0]
            for vec, ok in cone_memo.items():
                if ok and vec not in el.inversions:
                    raise InternalCheckError("join misses a root of cone(N(X))")
            return JoinVerdict(kind="exists", word=el.letters, inversions=el.inversions)
        if explored > node_budget:
            return None
        frontier = nxt
    return JoinVerdict(kind="not_exists", witness_kind="multiple_maxima", witness_words=maxima)
