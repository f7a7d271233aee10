"""Exact linear programming over the scalar field.

A single dense-tableau simplex with Bland's rule (guaranteed termination)
solves the handful of small LPs the library needs: nonnegative-combination
feasibility, affine-hull membership and slack maximization.  Problems here
have at most a dozen rows, so there are no performance heroics; everything is
exact, and infeasibility always comes with a Farkas certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalCheckError
from .scalar import ONE, ZERO, Scalar


@dataclass
class LPResult:
    feasible: bool
    # solution values for the structural variables when feasible
    x: list[Scalar] = field(default_factory=list)
    # certificate y with y.col_j <= 0 for all columns and y.rhs > 0 when infeasible
    farkas: list[Scalar] = field(default_factory=list)
    # optimum of the phase-2 objective, when one was requested
    objective: Scalar = ZERO


def _pivot(tab: list[list[Scalar]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    pivot_row = tab[row]
    for r, line in enumerate(tab):
        if r != row and line[col].sign() != 0:
            c = line[col]
            tab[r] = [v - c * w for v, w in zip(line, pivot_row)]
    basis[row] = col


def _simplex(tab: list[list[Scalar]], basis: list[int], entering: range) -> None:
    """Minimize the objective in the last tableau row; Bland's rule throughout."""
    obj = len(tab) - 1
    while True:
        col = next((j for j in entering if tab[obj][j].sign() < 0), None)
        if col is None:
            return
        best_row, best_ratio = None, None
        for r in range(obj):
            a = tab[r][col]
            if a.sign() > 0:
                ratio = tab[r][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[best_row])
                ):
                    best_row, best_ratio = r, ratio
        if best_row is None:
            raise InternalCheckError("unbounded LP in a context that must be bounded")
        _pivot(tab, basis, best_row, col)


def solve_combination(
    columns: list[list[Scalar]],
    rhs: list[Scalar],
    maximize: list[Scalar] | None = None,
) -> LPResult:
    """Find x >= 0 with sum_j x_j * columns[j] = rhs, optionally maximizing c.x.

    Phase 1 minimizes the sum of artificial variables; a nonzero optimum means
    infeasible, and the Farkas certificate y (y.col_j <= 0 for every column,
    y.rhs > 0) is read off the final multipliers.  With `maximize`, phase 2
    then maximizes the objective over the feasible region (structural columns
    only may enter).
    """
    m, n = len(rhs), len(columns)
    flip = [rhs[i].sign() < 0 for i in range(m)]
    tab: list[list[Scalar]] = []
    for i in range(m):
        row = [columns[j][i] for j in range(n)]
        bi = rhs[i]
        if flip[i]:
            row = [-v for v in row]
            bi = -bi
        tab.append(row + [ONE if k == i else ZERO for k in range(m)] + [bi])

    # phase-1 reduced-cost row for the all-artificial basis: cbar_j = -sum_i row_i[j]
    obj = [ZERO] * (n + m + 1)
    for i in range(m):
        obj = [o - v for o, v in zip(obj, tab[i])]
    for k in range(m):
        obj[n + k] = ZERO
    tab.append(obj)
    basis = [n + i for i in range(m)]

    _simplex(tab, basis, range(n + m))
    if tab[-1][-1].sign() != 0:  # optimum = -tab[-1][-1] > 0
        # artificial i has cost 1 and column e_i, so cbar_art_i = 1 - y_i
        y = [ONE - tab[-1][n + i] for i in range(m)]
        y = [(-v if flip[i] else v) for i, v in enumerate(y)]
        return LPResult(feasible=False, farkas=y)

    # drive lingering artificial basics out of degenerate rows where possible
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if tab[r][j].sign() != 0), None)
            if col is not None:
                _pivot(tab, basis, r, col)

    if maximize is not None:
        row = [ZERO] * (n + m + 1)
        for j in range(n):
            row[j] = -maximize[j]
        tab[-1] = row
        for r in range(m):  # restore zero reduced costs on the current basis
            j = basis[r]
            if tab[-1][j].sign() != 0:
                c = tab[-1][j]
                tab[-1] = [v - c * w for v, w in zip(tab[-1], tab[r])]
        _simplex(tab, basis, range(n))

    x = [ZERO] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tab[r][-1]
    objective = ZERO
    if maximize is not None:
        for j in range(n):
            if x[j].sign() != 0:
                objective = objective + maximize[j] * x[j]
    return LPResult(feasible=True, x=x, objective=objective)
