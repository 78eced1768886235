"""Closed-form codimension results for essential families.

All quantities are computed from polytope dimensions and interior lattice
point counts of subfamily sums.  Subsets are enumerated by increasing size
and then lexicographically, which fixes the order of every reported list.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .lattice import PolytopeFamily, is_essential, subsets


class NotEssentialError(ValueError):
    """The family is not essential, so none of the formulas make a claim."""


def _require_essential(F: PolytopeFamily) -> None:
    cert = is_essential(F)
    if not cert.essential:
        raise NotEssentialError(
            f"family is not essential: J={list(cert.violating_subset)} has "
            f"dim {F.dim_of(cert.violating_subset)} < {len(cert.violating_subset)}"
        )


def _diagonal_sum(F: PolytopeFamily) -> int:
    # sum of l*(Delta_J) over 1 <= |J| = dim(Delta_J) <= n-1
    return sum(
        F.lstar_of(J) for J in subsets(F.n + 1, 1, F.n - 1) if F.dim_of(J) == len(J)
    )


def codim_bounds(F: PolytopeFamily) -> tuple[int, int]:
    """Lower and upper bounds for dim (S/I)_rho."""
    _require_essential(F)
    lower = 1 + sum(F.lstar_of((i,)) for i in range(F.n + 1) if F.dim_of((i,)) == 1)
    return lower, 1 + _diagonal_sum(F)


def abc_check(F: PolytopeFamily) -> tuple[bool, list[tuple[int, ...]]]:
    """Whether every J with 1 <= |J| <= n-2 meets condition (a), (b) or (c).

    Returns ``(applicable, violators)`` where violators fail all three.
    """
    _require_essential(F)
    n = F.n
    violators = []
    for J in subsets(n + 1, 1, n - 2):
        if F.dim_of(J) != len(J) + 1:  # (a)
            continue
        if F.lstar_of(J) == 0:  # (b)
            continue
        rest = [i for i in range(n + 1) if i not in J]
        cond_c = all(
            F.dim_of(J + I) > len(J) + len(I)
            for k in range(1, n - len(J))
            for I in combinations(rest, k)
        )
        if not cond_c:
            violators.append(J)
    return not violators, violators


def codim_formula(F: PolytopeFamily) -> int | None:
    """Exact codimension when the (a)/(b)/(c) test passes, else None."""
    applicable, _ = abc_check(F)
    if not applicable:
        return None
    return 1 + _diagonal_sum(F)


def bignef_case(F: PolytopeFamily) -> tuple[str, int] | None:
    """``("full-dim", 1)``, ``("surface", value)`` or None.

    The surface case needs n = 2 and an essential family.
    """
    n = F.n
    if all(P.dim == n for P in F.members):
        return "full-dim", 1
    if n == 2 and is_essential(F).essential:
        return "surface", 1 + sum(
            F.lstar_of((i,)) for i in range(n + 1) if F.dim_of((i,)) == 1
        )
    return None


@dataclass(frozen=True)
class E1Table:
    """Dimensions of E_1^{p,q}, 0 <= p <= n+1, 0 <= q <= n."""

    n: int
    entries: tuple[tuple[int, ...], ...]  # entries[p][q]

    def __getitem__(self, pq: tuple[int, int]) -> int:
        p, q = pq
        return self.entries[p][q]

    def rows(self) -> list[list[int]]:
        """Rows from q = n down to q = 0, each listing p = 0..n+1."""
        return [[self.entries[p][q] for p in range(self.n + 2)] for q in range(self.n, -1, -1)]

    def render(self) -> str:
        width = max(len(str(x)) for col in self.entries for x in col)
        width = max(width, 2)
        lines = []
        for q, row in zip(range(self.n, -1, -1), self.rows()):
            lines.append(f"q={q:<2}| " + " ".join(f"{x:>{width}}" for x in row))
        lines.append("    +" + "-" * ((width + 1) * (self.n + 2)))
        lines.append("      " + " ".join(f"{p:>{width}}" for p in range(self.n + 2)) + "  = p")
        return "\n".join(lines)


def e1_table(F: PolytopeFamily) -> E1Table:
    _require_essential(F)
    n = F.n
    table = [[0] * (n + 1) for _ in range(n + 2)]
    table[0][n] = 1
    for J in subsets(n + 1, 1, n + 1):
        d = F.dim_of(J)
        table[len(J)][n - d] += F.lstar_of(J)
    return E1Table(n, tuple(tuple(col) for col in table))


def restrictdelta_check(F: PolytopeFamily) -> bool | None:
    """Whether every member has dimension 1, n-1 or n; None when n < 3."""
    n = F.n
    if n < 3:
        return None
    return all(P.dim in (1, n - 1, n) for P in F.members)


def genfor_formula(F: PolytopeFamily) -> int | None:
    """Inclusion-exclusion codimension formula for n >= 3, or None.

    Sums over nonempty J with dim(Delta_J) = |J| < n, the inner sum running
    over all subsets of J (the empty subset contributes the origin).
    """
    if F.n < 3 or not is_essential(F).essential or not restrictdelta_check(F):
        return None
    total = 1
    for J in subsets(F.n + 1, 1, F.n - 1):
        k = len(J)
        if F.dim_of(J) != k:
            continue
        for sub in subsets(k):
            part = tuple(J[i] for i in sub)
            sign = -1 if (k - len(part)) % 2 else 1
            # l*_k; the empty part is the origin, of dimension 0 != k
            if F.dim_of(part) == k:
                total += sign * F.lstar_of(part)
    return total
