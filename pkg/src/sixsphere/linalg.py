"""Exact linear algebra over the rationals.

Matrices are lists of rows. Entries may be ints or Fractions; every result
is returned with Fraction entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = to_fraction_matrix(rows)
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        row_r = m[r]
        for i in range(n_rows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    row_i = m[i]
                    m[i] = [a - f * b for a, b in zip(row_i, row_r)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not len(rows[0]):
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0}, one vector per free column.

    Each basis vector carries a 1 at its own free column and 0 at every other
    free column, so the basis is canonical for the given column order.
    """
    if n_cols is None:
        n_cols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    m, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One exact solution of A x = b (free variables set to 0), or None."""
    n_cols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][n_cols]
    return x


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact elimination."""
    m = to_fraction_matrix(rows)
    n = len(m)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            f = m[i][c] / p
            if f != 0:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * result


def same_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """True iff the row vectors of a and b span the same subspace."""
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(list(a) + list(b))
