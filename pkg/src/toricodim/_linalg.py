"""Small exact linear algebra over Z and Q.

These helpers work on plain lists of ints (or Fractions) and are meant for
the tiny systems that show up in hull, fan and class computations, where
sizes are bounded by the ambient dimension and the number of rays.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def rref(rows: Sequence[Sequence[int]], ncols: int | None = None):
    """Reduced row echelon form over Q.

    Returns ``(basis, pivots)`` where ``basis`` holds the nonzero rows of the
    reduced matrix as lists of Fractions and ``pivots`` their pivot columns.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    """Rank of a small integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows if any(r)]
    rk = 0
    while m:
        piv = m.pop()
        c = next(i for i, x in enumerate(piv) if x)
        p = piv[c]
        nxt = []
        for row in m:
            f = row[c]
            if f:
                row = [p * x - f * y for x, y in zip(row, piv)]
            if any(row):
                nxt.append(row)
        m = nxt
        rk += 1
    return rk


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        return tuple(vec)
    return tuple(x // g for x in vec)


def integer_kernel_vector(rows: Sequence[Sequence[int]], ncols: int):
    """Primitive integer generator of a one-dimensional kernel, else None."""
    basis, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * ncols
    v[f] = Fraction(1)
    for row, p in zip(basis, pivots):
        v[p] = -row[f]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(x * den) for x in v])


def solve_unique(rows: Sequence[Sequence[int]], rhs: Sequence[int]):
    """Unique rational solution of ``rows @ x = rhs``, or None.

    None means the system is inconsistent or underdetermined.
    """
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    basis, pivots = rref(aug, ncols + 1)
    if ncols in pivots or len(pivots) != ncols:
        return None
    return [row[ncols] for row in basis]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))
