"""Exact rank and nullspace over the rationals.

Rows are scaled to integers and reduced with Bareiss' fraction-free
elimination, so intermediate entries stay integral. The kernel basis is
returned in reduced row echelon form, which makes it unique.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        m = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * m) for x in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (nonzero rows, pivot columns)."""
    M = _integer_rows(rows)
    pivots: list[int] = []
    r = 0
    prev = 1
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if pivot_row is None:
            continue
        M[r], M[pivot_row] = M[pivot_row], M[r]
        p = M[r][col]
        for i in range(r + 1, len(M)):
            q = M[i][col]
            row_i, row_r = M[i], M[r]
            # Bareiss update: exact division by the previous pivot
            M[i] = [(p * row_i[k] - q * row_r[k]) // prev for k in range(ncols)]
        prev = p
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(bareiss_echelon(rows, ncols)[1])


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    E, pivots = bareiss_echelon(rows, ncols)
    R = [[Fraction(x) for x in row] for row in E]
    for i in range(len(R) - 1, -1, -1):
        c = pivots[i]
        piv = R[i][c]
        R[i] = [x / piv for x in R[i]]
        for k in range(i):
            factor = R[k][c]
            if factor:
                R[k] = [a - factor * b for a, b in zip(R[k], R[i])]
    return R, pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``, as the rows of a reduced echelon matrix."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fcol]
        basis.append(v)
    if not basis:
        return []
    K, _ = rref(basis, ncols)
    return K


def matvec(rows: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in rows]
