"""Coxeter systems with a geometric representation.

A system is loaded from a JSON-style dict holding generator names, a Coxeter
matrix (entries m_st as ints or "inf") and optional exact gram overrides.  The
ambient representation is always the classical one: the simple roots are the
standard basis of a |S|-dimensional space, and low-dimensional representations
of higher-rank groups are realized as root subsystems (see rootstore).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .scalar import ONE, ZERO, Scalar, is_squarefree, parse_scalar

Vector = tuple[Scalar, ...]

# -cos(pi/m) for the finite labels we can represent in one quadratic field;
# each entry is (required field index, value builder)
_COS_TABLE = {
    2: (1, lambda: ZERO),
    3: (1, lambda: Scalar(Fraction(-1, 2))),
    4: (2, lambda: Scalar(0, Fraction(-1, 2), 2)),
    5: (5, lambda: Scalar(Fraction(-1, 4), Fraction(-1, 4), 5)),
    6: (3, lambda: Scalar(0, Fraction(-1, 2), 3)),
}


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def vscale(c: Scalar, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def vfloats(u: Vector) -> tuple[float, ...]:
    return tuple(a.to_float() for a in u)


def is_nonneg(u: Vector) -> bool:
    return all(a.sign() >= 0 for a in u)


def is_nonpos(u: Vector) -> bool:
    return all(a.sign() <= 0 for a in u)


@dataclass(frozen=True)
class CoxeterSystem:
    """Generators, exact gram matrix of the bilinear form, and the field index.

    Immutable after load; safe to share between threads.
    """

    generators: tuple[str, ...]
    gram: tuple[tuple[Scalar, ...], ...]
    field_d: int

    @property
    def rank(self) -> int:
        return len(self.generators)

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise InputError(f"unknown generator {name!r}") from None

    def simple_root(self, i: int | str) -> Vector:
        if isinstance(i, str):
            i = self.generator_index(i)
        return tuple(ONE if j == i else ZERO for j in range(self.rank))

    def zero_vector(self) -> Vector:
        return tuple(ZERO for _ in range(self.rank))

    def bilinear(self, u: Vector, v: Vector) -> Scalar:
        total = ZERO
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            row = self.gram[i]
            acc = ZERO
            for j, vj in enumerate(v):
                if not vj.is_zero():
                    acc = acc + row[j] * vj
            total = total + ui * acc
        return total

    def gram_with_simple(self, i: int, v: Vector) -> Scalar:
        """B(alpha_i, v) without building the basis vector."""
        row = self.gram[i]
        acc = ZERO
        for j, vj in enumerate(v):
            if not vj.is_zero():
                acc = acc + row[j] * vj
        return acc

    def reflect(self, alpha: Vector, v: Vector) -> Vector:
        """Image of v under the B-reflection attached to alpha."""
        norm = self.bilinear(alpha, alpha)
        if norm.is_zero():
            raise InputError("cannot reflect in an isotropic vector")
        coef = (self.bilinear(alpha, v) / norm) * Scalar(2)
        return tuple(a - coef * b for a, b in zip(v, alpha))

    def reflect_simple(self, i: int, v: Vector) -> Vector:
        """s_i(v) = v - 2 B(alpha_i, v) alpha_i, using B(alpha_i, alpha_i) = 1."""
        coef = self.gram_with_simple(i, v) * Scalar(2)
        if coef.is_zero():
            return v
        out = list(v)
        out[i] = v[i] - coef
        return tuple(out)

    def apply_word(self, letters: tuple[int, ...], v: Vector) -> Vector:
        """Apply the group element s_{l1} ... s_{lk} to v (rightmost acts first)."""
        for i in reversed(letters):
            v = self.reflect_simple(i, v)
        return v

    def word_matrix(self, letters: tuple[int, ...]) -> tuple[Vector, ...]:
        """Columns of the linear map of a word, as images of the basis."""
        return tuple(self.apply_word(letters, self.simple_root(i)) for i in range(self.rank))

    def signature(self) -> tuple[int, int, int]:
        """Exact inertia (n_plus, n_zero, n_minus) of the gram matrix."""
        return _inertia([list(row) for row in self.gram])

    def is_irreducible(self) -> bool:
        """Connectivity of the Coxeter graph (edges where B(alpha_s, alpha_t) != 0)."""
        n = self.rank
        if n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j not in seen and not self.gram[i][j].is_zero():
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n


def _inertia(m: list[list[Scalar]]) -> tuple[int, int, int]:
    """Symmetric congruence elimination over the exact field."""
    n = len(m)
    active = list(range(n))
    n_plus = n_minus = 0
    while active:
        pivot = next((i for i in active if m[i][i].sign() != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if j != i and m[i][j].sign() != 0),
                None,
            )
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # basis change e_i += e_j makes m[i][i] = 2*m[i][j] != 0
            for k in range(n):
                m[i][k] = m[i][k] + m[j][k]
            for k in range(n):
                m[k][i] = m[k][i] + m[k][j]
            pivot = i
        p = m[pivot][pivot]
        if p.sign() > 0:
            n_plus += 1
        else:
            n_minus += 1
        active.remove(pivot)
        pivot_row = {j: m[pivot][j] for j in active}
        for i in active:
            if m[i][pivot].sign() == 0:
                continue
            c = m[i][pivot] / p
            for j in active:
                m[i][j] = m[i][j] - c * pivot_row[j]
            m[i][pivot] = ZERO
            m[pivot][i] = ZERO
    return n_plus, len(m) - n_plus - n_minus, n_minus


def _entry_for_label(label, d_required: list[int]):
    if label == "inf":
        return Scalar(-1)
    if not isinstance(label, int) or label < 2:
        raise InputError(f"Coxeter matrix label {label!r} must be an int >= 2 or \"inf\"")
    if label not in _COS_TABLE:
        raise InputError(f"label m={label} is not representable in a single quadratic field")
    need, make = _COS_TABLE[label]
    if need != 1:
        d_required.append(need)
    return make()


def _validate_entry(value: Scalar, s: str, t: str) -> None:
    sign = value.sign()
    if sign > 0:
        raise InputError(f"gram[{s}][{t}] = {value} is positive off the diagonal")
    if (value + 1).sign() <= 0:
        return  # <= -1: infinite-order pair, any value allowed
    for _, make in _COS_TABLE.values():
        if value == make():
            return
    raise InputError(f"gram[{s}][{t}] = {value} in (-1, 0) is not of the form -cos(pi/m)")


def load_system(spec: dict) -> CoxeterSystem:
    """Validate a system spec dict and build the CoxeterSystem.

    Keys: "generators" (names), "coxeter_matrix" (labels, "inf" allowed),
    optional "gram_overrides" mapping "s,t" to a scalar literal, optional
    "field_d".  Overrides win over labels; label values must all live in one
    quadratic field, which also must match an explicit field_d.
    """
    try:
        generators = tuple(spec["generators"])
    except KeyError:
        raise InputError("system spec is missing \"generators\"") from None
    n = len(generators)
    if n == 0 or len(set(generators)) != n:
        raise InputError("generators must be a non-empty list of distinct names")
    matrix = spec.get("coxeter_matrix")
    if matrix is None:
        raise InputError("system spec is missing \"coxeter_matrix\"")
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise InputError("coxeter_matrix must be |S| x |S|")

    d_required: list[int] = []
    entries: list[list[Scalar | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            label = matrix[i][j]
            if i == j:
                if label != 1:
                    raise InputError("coxeter_matrix diagonal must be 1")
                entries[i][j] = ONE
            else:
                if matrix[j][i] != label:
                    raise InputError("coxeter_matrix must be symmetric")
                entries[i][j] = _entry_for_label(label, d_required)

    if len(set(d_required)) > 1:
        raise InputError(
            f"labels need sqrt of each of {sorted(set(d_required))}; "
            "only one quadratic extension per system is supported"
        )
    field_d = spec.get("field_d", d_required[0] if d_required else 1)
    if d_required and field_d != d_required[0]:
        raise InputError(f"labels require field_d={d_required[0]}, spec says {field_d}")
    if not isinstance(field_d, int) or not is_squarefree(field_d):
        raise InputError(f"field_d must be a square-free positive integer, got {field_d!r}")

    for key, literal in (spec.get("gram_overrides") or {}).items():
        names = [p.strip() for p in key.split(",")]
        if len(names) != 2:
            raise InputError(f"gram_overrides key {key!r} must be \"s,t\"")
        i = generators.index(names[0]) if names[0] in generators else -1
        j = generators.index(names[1]) if names[1] in generators else -1
        if i < 0 or j < 0 or i == j:
            raise InputError(f"gram_overrides key {key!r} does not name two generators")
        value = parse_scalar(literal, field_d)
        entries[i][j] = value
        entries[j][i] = value

    for i in range(n):
        for j in range(i + 1, n):
            _validate_entry(entries[i][j], generators[i], generators[j])

    gram = tuple(tuple(row) for row in entries)  # type: ignore[arg-type]
    return CoxeterSystem(generators=generators, gram=gram, field_d=field_d)


def gram_kernel(sys: CoxeterSystem) -> list[Vector]:
    """Exact basis of the radical of B (kernel of the gram matrix)."""
    n = sys.rank
    m = [list(row) for row in sys.gram]
    cols = list(range(n))
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in cols:
        pr = next((r for r in range(row, n) if m[r][col].sign() != 0), None)
        if pr is None:
            continue
        m[row], m[pr] = m[pr], m[row]
        pivot = m[row][col]
        m[row] = [x / pivot for x in m[row]]
        for r in range(n):
            if r != row and m[r][col].sign() != 0:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[row])]
        pivots.append((row, col))
        row += 1
        if row == n:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in cols:
        if free in pivot_cols:
            continue
        vec = [ZERO] * n
        vec[free] = ONE
        for r, c in pivots:
            vec[c] = -m[r][free]
        basis.append(tuple(vec))
    return basis
