"""Exact Gaussian elimination over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularSystemError(ValueError):
    """The linear system does not determine a unique solution."""


class InconsistentSystemError(ValueError):
    """The linear system has no solution."""


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Unique solution of ``matrix @ x = rhs``; surplus equations must be consistent."""
    if not matrix:
        raise SingularSystemError("empty system")
    n = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, piv = rref(aug)
    if n in piv:
        raise InconsistentSystemError("system is inconsistent")
    if len(piv) < n:
        raise SingularSystemError(f"system has rank {len(piv)} < {n} unknowns")
    return [red[i][n] for i in range(n)]
