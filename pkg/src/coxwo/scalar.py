"""Exact arithmetic in a real quadratic field Q(sqrt d).

Every coordinate and bilinear-form value in the library is a Scalar: a pair of
rationals (a, b) representing a + b*sqrt(d) for a fixed square-free d >= 1.
Rationals are canonicalized to d = 1, so each field element has exactly one
representation and equality/hashing are structural; a rational combines freely
with any single irrational field, while two distinct irrational fields do not
mix.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import InputError, MixedFieldError

_SQUAREFREE_CACHE: dict[int, bool] = {}


def is_squarefree(n: int) -> bool:
    if n in _SQUAREFREE_CACHE:
        return _SQUAREFREE_CACHE[n]
    ok = n >= 1
    m, p = n, 2
    while ok and p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                ok = False
            continue
        p += 1 if p == 2 else 2
    _SQUAREFREE_CACHE[n] = ok
    return ok


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (e, f) with n = e^2 * f and f square-free, for n >= 1."""
    e, f, p = 1, 1, 2
    while p * p <= n:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        e *= p ** (k // 2)
        if k % 2:
            f *= p
        p += 1 if p == 2 else 2
    return e, f * n


class Scalar:
    """Immutable element a + b*sqrt(d) of Q(sqrt d)."""

    __slots__ = ("a", "b", "d", "_hash")

    def __init__(self, a, b=0, d: int = 1):
        a = a if isinstance(a, Fraction) else Fraction(a)
        b = b if isinstance(b, Fraction) else Fraction(b)
        if d == 1:
            a, b = a + b, Fraction(0)  # sqrt(1) folds into the rational part
        elif b == 0:
            d = 1  # rationals live in d = 1
        elif not is_squarefree(d):
            raise InputError(f"field index {d} is not square-free")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def of(value) -> Scalar:
        if isinstance(value, Scalar):
            return value
        return Scalar(Fraction(value))

    def _joint_d(self, other: Scalar) -> int:
        if self.d == other.d:
            return self.d
        if self.d == 1:
            return other.d
        if other.d == 1:
            return self.d
        raise MixedFieldError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")

    # -- field operations -------------------------------------------------

    def __add__(self, other):
        o = Scalar.of(other)
        return Scalar(self.a + o.a, self.b + o.b, self._joint_d(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = Scalar.of(other)
        return Scalar(self.a - o.a, self.b - o.b, self._joint_d(o))

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __mul__(self, other):
        o = Scalar.of(other)
        d = self._joint_d(o)
        return Scalar(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Scalar.of(other)
        d = self._joint_d(o)
        norm = o.a * o.a - d * o.b * o.b
        if norm == 0:
            # with d square-free and > 1, a^2 = d b^2 forces a = b = 0
            raise ZeroDivisionError("scalar division by zero")
        inv_a, inv_b = o.a / norm, -o.b / norm
        return Scalar(self.a * inv_a + d * self.b * inv_b, self.a * inv_b + self.b * inv_a, d)

    def __rtruediv__(self, other):
        return Scalar.of(other) / self

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparisons ------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d): -1, 0 or +1."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 against d*b^2, the larger magnitude wins
        lhs, rhs = a * a, self.d * b * b
        if lhs == rhs:
            return 0
        return (1 if a > 0 else -1) if lhs > rhs else (1 if b > 0 else -1)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.a) if self.b == 0 else hash((self.a, self.b, self.d))
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # -- shadows and text -------------------------------------------------

    def to_float(self) -> float:
        """Double-precision shadow; for rendering and limit estimation only."""
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)

_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(rf"^({_RAT})(?:([+-])(\d+(?:/\d+)?)\*rt)?$")


def parse_scalar(text: str, d: int = 1) -> Scalar:
    """Parse "p/q", "p/q+r/s*rt" or "p/q-r/s*rt"; "rt" means sqrt(d)."""
    m = _SCALAR_RE.match(text)
    if not m:
        raise InputError(f"malformed scalar literal {text!r}")
    a = Fraction(m.group(1))
    if m.group(2) is None:
        return Scalar(a)
    if d == 1:
        raise InputError(f"literal {text!r} uses rt but the field is rational (d=1)")
    b = Fraction(m.group(3))
    if m.group(2) == "-":
        b = -b
    return Scalar(a, b, d)


def format_scalar(x: Scalar) -> str:
    """Canonical literal; round-trips through parse_scalar for the same d."""
    if x.b == 0:
        return str(x.a)
    sep = "+" if x.b > 0 else "-"
    return f"{x.a}{sep}{abs(x.b)}*rt"


def solve_quadratic(a: Fraction, b: Fraction, c: Fraction) -> list[Scalar]:
    """Exact roots of a*t^2 + b*t + c with rational coefficients.

    Roots come back as Scalars in Q(sqrt f) for the square-free part f of the
    discriminant, ascending; [] if the discriminant is negative.
    """
    if a == 0:
        return [] if b == 0 else [Scalar(-c / b)]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        return [Scalar(-b / (2 * a))]
    # disc = p/q = (p*q)/q^2, so sqrt(disc) = e*sqrt(f)/q with p*q = e^2*f
    e, f = squarefree_split(disc.numerator * disc.denominator)
    half = Fraction(1, 2) / a
    base, spread = -b * half, Fraction(e, disc.denominator) * half
    if f == 1:
        roots = [Scalar(base - spread), Scalar(base + spread)]
    else:
        roots = [Scalar(base, -spread, f), Scalar(base, spread, f)]
    return sorted(roots)
