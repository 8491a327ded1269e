"""Exact Gaussian elimination over a field of FieldElements."""

from __future__ import annotations

from .fields import FieldElement


def rank(matrix: list[list[FieldElement]]) -> int:
    """Rank by row reduction; deterministic pivoting on first nonzero."""
    if not matrix:
        return 0
    rows = [list(row) for row in matrix]
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if not rows[i][col].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][col]
        for i in range(r + 1, len(rows)):
            if rows[i][col].is_zero():
                continue
            factor = rows[i][col] / pivot
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve(matrix: list[list[FieldElement]], rhs: list[FieldElement]):
    """Solve M c = rhs exactly.

    Returns a solution vector (free variables set to zero) or None when
    the system is inconsistent.
    """
    m = len(matrix)
    if m == 0:
        return []
    n = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot_row = None
        for i in range(r, m):
            if not aug[i][col].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        pivot = aug[r][col]
        aug[r] = [a / pivot for a in aug[r]]
        for i in range(m):
            if i != r and not aug[i][col].is_zero():
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    zero = rhs[0].spec.zero() if rhs else None
    for i in range(r, m):
        if not aug[i][n].is_zero():
            return None
    solution = [zero] * n
    for row_index, col in enumerate(pivots):
        solution[col] = aug[row_index][n]
    return solution
