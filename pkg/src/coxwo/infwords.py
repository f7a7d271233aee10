"""Eventually periodic infinite reduced words and the limit weak order.

An infinite word is a finite prefix followed by a repeated nonempty period.
Its inversion roots come off a running matrix of the prefixes; reducedness is
verified exactly up to a certificate horizon at construction and trusted
beyond.  Membership of a single root in an inversion stream is decided
exactly: beyond the prefix the stream is a union of orbits of one exact
linear map (the conjugated period), so iterating the inverse map either lands
in the first period block, leaves the positive cone, or cycles, each of which
is conclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxsys import CoxeterSystem, Vector, is_nonneg, is_nonpos
from .errors import InputError, InternalCheckError
from .rootstore import RootStore, norm_floats
from .scalar import Scalar
from .weakorder import Letters, NonReducedError, _extend_columns, format_word, parse_word


@dataclass(frozen=True)
class InfWord:
    prefix: Letters
    period: Letters

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def letters(self):
        i = 0
        while True:
            yield self.letter(i)
            i += 1


def parse_infword(sys: CoxeterSystem, text: str, horizon: int = 0) -> InfWord:
    """Literal "prefix|(period)", word syntax inside; empty prefix allowed."""
    if "|" not in text:
        raise InputError(f"infinite word literal {text!r} needs a | separator")
    head, _, tail = text.partition("|")
    if not (tail.startswith("(") and tail.endswith(")")):
        raise InputError(f"period in {text!r} must be parenthesized")
    prefix = parse_word(sys, head)
    period = parse_word(sys, tail[1:-1])
    if not period:
        raise InputError("period must be nonempty")
    word = InfWord(prefix=prefix, period=period)
    validate_reduced(sys, word, horizon)
    return word


def format_infword(sys: CoxeterSystem, w: InfWord) -> str:
    return f"{format_word(sys, w.prefix)}|({format_word(sys, w.period)})"


def validate_reduced(sys: CoxeterSystem, word: InfWord, horizon: int = 0) -> int:
    """Check every truncation up to the certificate horizon is reduced."""
    depth = max(2 * len(word.period) * sys.rank, horizon, 16)
    stream = InvStream(sys, word)
    stream.extend(depth)  # raises NonReducedError on a violation
    return depth


class InvStream:
    """Lazily materialized exact inversion roots beta_i of an infinite word."""

    def __init__(self, sys: CoxeterSystem, word: InfWord):
        self.sys = sys
        self.word = word
        self.roots: list[Vector] = []
        self.root_set: set[Vector] = set()
        self._columns = tuple(sys.simple_root(i) for i in range(sys.rank))
        self._tail_map: tuple[Vector, ...] | None = None
        self._tail_inverse: tuple[Vector, ...] | None = None

    def extend(self, n: int) -> None:
        while len(self.roots) < n:
            i = len(self.roots)
            s = self.word.letter(i)
            root = self._columns[s]
            if not is_nonneg(root):
                raise NonReducedError(i)
            if root in self.root_set:
                raise NonReducedError(i)  # a repeat also certifies non-reducedness
            self.roots.append(root)
            self.root_set.add(root)
            self._columns = _extend_columns(self.sys, self._columns, s)

    def take(self, n: int) -> list[Vector]:
        self.extend(n)
        return self.roots[:n]

    # -- the conjugated period map and exact membership -----------------------

    def _maps(self):
        # the tail of the stream advances by the conjugated period u v u^-1:
        # beta_{i + |v|} = (u v u^-1)(beta_i) for every i past the prefix
        if self._tail_map is None:
            sys = self.sys
            u, v = self.word.prefix, self.word.period
            letters = u + v + tuple(reversed(u))
            cols = tuple(sys.simple_root(i) for i in range(sys.rank))
            for s in letters:
                cols = _extend_columns(sys, cols, s)
            self._tail_map = cols
            cols_inv = tuple(sys.simple_root(i) for i in range(sys.rank))
            for s in reversed(letters):
                cols_inv = _extend_columns(sys, cols_inv, s)
            self._tail_inverse = cols_inv
        return self._tail_map, self._tail_inverse

    def _apply(self, cols: tuple[Vector, ...], vec: Vector) -> Vector:
        out = [Scalar(0)] * self.sys.rank
        for j, c in enumerate(vec):
            if c.is_zero():
                continue
            col = cols[j]
            for i in range(self.sys.rank):
                out[i] = out[i] + c * col[i]
        return tuple(out)

    def contains(self, vec: Vector, max_periods: int = 400):
        """Exact membership of a root in the full infinite inversion set.

        Walks y_i = w_i^{-1}(vec), one reflection per letter: membership means
        some y_i turns negative.  Conclusive "no" comes from the periodic
        structure: past the prefix the y-values over one period evolve by
        fixed linear maps, so a repeated window proves an everlasting positive
        cycle, and window increments that stabilize to a fixed nonnegative
        vector prove everlasting arithmetic growth.  Returns None only if the
        period cap is hit (a guard, not an expected outcome).
        """
        sys = self.sys
        y = vec
        if not is_nonneg(y):
            return True if is_nonpos(y) else None
        for s in self.word.prefix:
            y = sys.reflect_simple(s, y)
            if not is_nonneg(y):
                return True
        m = len(self.word.period)
        base = len(self.word.prefix)
        seen_windows: set[tuple[Vector, ...]] = set()
        last: list[tuple[Vector, ...]] = []
        deltas: list[tuple] = []
        for k in range(max_periods):
            window = []
            for j in range(m):
                window.append(y)
                y = sys.reflect_simple(self.word.letter(base + k * m + j), y)
                if not is_nonneg(y):
                    return True
            frozen = tuple(window)
            if frozen in seen_windows:
                return False  # the walk cycles while staying positive
            seen_windows.add(frozen)
            last.append(frozen)
            if len(last) >= 2:
                deltas.append(_window_delta(last[-1], last[-2]))
            if len(deltas) >= 2 and deltas[-1] == deltas[-2] and _delta_nonneg(deltas[-1]):
                # increments are a fixed point of the period maps: the walk
                # grows arithmetically and stays positive forever
                return False
            if len(last) > 2:
                last.pop(0)
            if len(deltas) > 2:
                deltas.pop(0)
        return None


def _window_delta(w2, w1):
    return tuple(tuple(a - b for a, b in zip(v2, v1)) for v2, v1 in zip(w2, w1))


def _delta_nonneg(delta) -> bool:
    return all(c.sign() >= 0 for vec in delta for c in vec)


def truncate_inversions(store: RootStore, word: InfWord, n: int) -> frozenset[int]:
    """First n inversion roots, as store indices."""
    stream = InvStream(store.system, word)
    roots = stream.take(n)
    store.generate(n)
    return frozenset(store.ensure_contains(v) for v in roots)


@dataclass
class PrefixAnswer:
    value: bool
    exact: bool  # False only when some membership hit the iteration guard


def word_prefix_of(sys: CoxeterSystem, u: Letters, word: InfWord, horizon: int = 400) -> PrefixAnswer:
    """Whether the finite word u is a prefix of the infinite word.

    Decided through N(u) against the infinite inversion set; a positive
    answer is always exact, a negative one is exact unless a membership walk
    hit its period guard (then it is horizon-qualified).
    """
    from .weakorder import inversion_roots

    stream = InvStream(sys, word)
    results = [stream.contains(v, max_periods=horizon) for v in inversion_roots(sys, u)]
    if all(r is True for r in results):
        return PrefixAnswer(True, True)
    return PrefixAnswer(False, all(r is not None for r in results))


@dataclass
class Comparison:
    relation: str  # "equal" | "less" | "greater" | "incomparable" | "unknown"
    exact: bool
    detail: dict = field(default_factory=dict)


def _containment(sys: CoxeterSystem, a: InfWord, b: InfWord, horizon: int):
    """N(a) subseteq N(b)? (verdict, exact) with exact False on a witness."""
    sa, sb = InvStream(sys, a), InvStream(sys, b)
    horizon = max(horizon, len(a.prefix) + len(a.period))
    roots = sa.take(horizon)
    for v in roots:
        hit = sb.contains(v)
        if hit is False:
            return False, True
        if hit is None:
            return None, False
    # all checked roots are inside; try the inductive tail upgrade
    exact = _tail_inclusion_exact(sys, sa, sb)
    return True, exact


def _tail_inclusion_exact(sys: CoxeterSystem, sa: InvStream, sb: InvStream, dmax: int = 6) -> bool:
    """Sufficient exact condition for tail inclusion: some power T = c_b^d
    commutes with c_a and matches c_a on every first-block root of a."""
    ca, _ = sa._maps()
    cb, _ = sb._maps()
    blocks = sa.roots[len(sa.word.prefix) : len(sa.word.prefix) + len(sa.word.period)]
    power = cb
    for _ in range(dmax):
        if _commutes(sys, ca, power) and all(
            sa._apply(power, x) == sa._apply(ca, x) for x in blocks
        ):
            return True
        power = _compose(sys, power, cb)
    return False


def _compose(sys, left, right):
    # columns of left.right: left(right(e_j))
    return tuple(
        tuple(
            sum((right[j][k] * left[k][i] for k in range(sys.rank)), Scalar(0))
            for i in range(sys.rank)
        )
        for j in range(sys.rank)
    )


def _commutes(sys, f, g) -> bool:
    return _compose(sys, f, g) == _compose(sys, g, f)


def compare(sys: CoxeterSystem, w1: InfWord, w2: InfWord, horizon: int = 64) -> Comparison:
    """Limit weak order comparison via inversion-set containment."""
    c12, e12 = _containment(sys, w1, w2, horizon)
    c21, e21 = _containment(sys, w2, w1, horizon)
    if c12 is None or c21 is None:
        return Comparison(relation="unknown", exact=False)
    table = {
        (True, True): "equal",
        (True, False): "less",
        (False, True): "greater",
        (False, False): "incomparable",
    }
    return Comparison(
        relation=table[(c12, c21)],
        exact=e12 and e21,
        detail={"horizon": horizon},
    )


def is_connected(sys: CoxeterSystem, word: InfWord) -> bool:
    """Connectivity of the Coxeter graph induced on the period letters."""
    letters = sorted(set(word.period))
    if not letters:
        return True
    seen = {letters[0]}
    stack = [letters[0]]
    rest = set(letters[1:])
    while stack:
        i = stack.pop()
        for j in list(rest):
            if not sys.gram[i][j].is_zero():
                rest.discard(j)
                seen.add(j)
                stack.append(j)
    return not rest


def accumulation_estimate(sys: CoxeterSystem, word: InfWord, n: int, tol: float = 1e-6):
    """Cluster the float-normalized inversion roots; evidence, never proof."""
    from .imagcone import _cluster

    rank = sys.rank
    gram_f = [[sys.gram[i][j].to_float() for j in range(rank)] for i in range(rank)]
    columns = [[1.0 if i == j else 0.0 for i in range(rank)] for j in range(rank)]
    pts = []
    for k in range(n):
        s = word.letter(k)
        col = columns[s]
        total = sum(col)
        pts.append(tuple(c / total for c in col))
        col_s = list(col)
        for j in range(rank):
            g = gram_f[s][j]
            if g != 0.0:
                cj = columns[j]
                for i in range(rank):
                    cj[i] -= 2.0 * g * col_s[i]
        scale = max(abs(v) for c in columns for v in c)
        if scale > 1e120:
            for c in columns:
                for i in range(rank):
                    c[i] /= scale
    tail = max(1, n // 5)
    return _cluster(pts[-tail:], tol)
