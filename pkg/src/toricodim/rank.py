"""Exact and modular matrix rank for integer matrices."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sympy import isprime

# Above this many entries the pure-Python elimination is handed to FLINT.
BAREISS_LIMIT = 10_000


def bareiss_rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Every intermediate entry is a minor of the input, so each division by the
    previous pivot is exact and no rationals are ever formed.
    """
    rows = [list(map(int, row)) for row in M if any(row)]
    if not rows:
        return 0
    if len(rows[0]) < len(rows):
        rows = [list(col) for col in zip(*rows)]
    prev = 1
    r = 0
    while rows and rows[0]:
        piv = next((i for i, row in enumerate(rows) if row[0] != 0), None)
        if piv is None:
            rows = [row[1:] for row in rows]
            continue
        top = rows.pop(piv)
        p = top[0]
        tail = top[1:]
        nxt = []
        for row in rows:
            f = row[0]
            if f:
                new = [(p * x - f * y) // prev for x, y in zip(row[1:], tail)]
            elif p == prev:
                new = row[1:]
            else:
                new = [p * x // prev for x in row[1:]]
            if any(new):
                nxt.append(new)
        rows = nxt
        prev = p
        r += 1
    return r


def modular_rank(M, p: int) -> int:
    """Rank over GF(p) for a prime p < 2**31 (products stay inside int64)."""
    if p >= 2**31:
        raise ValueError("modulus must be below 2**31")
    A = np.asarray(M, dtype=object)
    if A.size == 0:
        return 0
    A = np.asarray(A % p, dtype=np.int64)
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    m, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(A[r + 1 :, c])
        if below.size:
            A[below, c:] = (A[below, c:] - np.outer(A[below, c], A[r, c:]) % p) % p
        r += 1
    return r


def random_primes(rng: np.random.Generator, count: int = 3, lo: int = 2**30, hi: int = 2**31):
    """Distinct random primes in (lo, hi)."""
    out: list[int] = []
    while len(out) < count:
        q = int(rng.integers(lo + 1, hi))
        if isprime(q) and q not in out:
            out.append(q)
    return out


def _flint_rank(M) -> int:
    import flint

    A = flint.fmpz_mat([[int(x) for x in row] for row in M])
    # FLINT's fraction-free LU is much faster on tall matrices
    if A.nrows() < A.ncols():
        A = A.transpose()
    return int(A.rank())


def exact_rank(M: Sequence[Sequence[int]], engine: str = "auto") -> int:
    """Rank over Q.

    ``engine`` is ``"bareiss"``, ``"flint"`` or ``"auto"`` (Bareiss for small
    matrices, FLINT's exact integer rank for large ones).
    """
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return 0
    if engine == "auto":
        engine = "bareiss" if nrows * ncols <= BAREISS_LIMIT else "flint"
    if engine == "bareiss":
        return bareiss_rank(M)
    if engine == "flint":
        return _flint_rank(M)
    raise ValueError(f"unknown rank engine {engine!r}")


def rank_check(M, primes: Sequence[int], engine: str = "auto"):
    """Exact rank plus ranks modulo each prime.

    Ranks mod p never exceed the rational rank; the check passes when their
    maximum equals it.
    """
    exact = exact_rank(M, engine)
    mods = [modular_rank(M, p) for p in primes]
    return exact, mods, (max(mods) if mods else 0) == exact
