"""Exact Gauss-Jordan elimination over :class:`CoeffValue`.

With parameters present, a pivot is any entry that is not identically zero, so
results hold for generic parameter values.
"""

from __future__ import annotations

from typing import Sequence

from .coeffs import CoeffValue

__all__ = ["rref", "rank", "nullspace", "solve_linear"]


def rref(rows: Sequence[Sequence[CoeffValue]], ncols: int | None = None):
    """Reduced row echelon form.  Returns (matrix, pivot columns)."""
    a = [[CoeffValue.of(v) for v in row] for row in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(a):
            break
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = CoeffValue(1) / a[r][col]
        a[r] = [v * inv if v else v for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    return a[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int) -> list[list[CoeffValue]]:
    """Basis of {v : rows * v = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [CoeffValue(0)] * ncols
        v[fc] = CoeffValue(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve_linear(rows, rhs) -> list[CoeffValue] | None:
    """One solution of rows * v = rhs (free variables set to 0), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [CoeffValue.of(b)] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    v = [CoeffValue(0)] * ncols
    for row, pc in zip(reduced, pivots):
        v[pc] = row[ncols]
    return v
