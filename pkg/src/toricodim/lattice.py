"""Exact lattice polytopes: hulls, Minkowski sums, lattice points, l*.

Polytopes are stored by their vertices and an integer H-description that is
valid inside the affine hull.  Lower-dimensional polytopes are handled in
"pivot coordinates": the affine hull projects bijectively onto a subset of
the coordinate axes, facets are computed there and lifted back with zeros on
the remaining axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ._linalg import dot, integer_kernel_vector, rank, rref

Point = tuple[int, ...]
Facet = tuple[Point, int]


class GeometryError(ValueError):
    """Raised for invalid polytope input or incompatible operands."""


# ---------------------------------------------------------------------------
# hull machinery


def _sub(p: Sequence[int], q: Sequence[int]) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def _affine_frame(pts: Sequence[Point]):
    """Affine hull data: base point, rational basis rows, pivot columns."""
    v0 = pts[0]
    n = len(v0)
    diffs = [_sub(p, v0) for p in pts[1:]]
    if not diffs:
        return v0, [], []
    basis, pivots = rref(diffs, n)
    return v0, basis, pivots




def _facets_brute(proj: Sequence[Point]) -> list[Facet]:
    """All facets of a full-dimensional point set by exhaustive search."""
    d = len(proj[0])
    if d == 1:
        xs = [p[0] for p in proj]
        return [((1,), -min(xs)), ((-1,), max(xs))]
    found = set()
    for combo in combinations(range(len(proj)), d):
        base = proj[combo[0]]
        w = integer_kernel_vector([_sub(proj[i], base) for i in combo[1:]], d)
        if w is None:
            continue
        c = dot(w, base)
        vals = [dot(w, p) for p in proj]
        if min(vals) == c:
            found.add((w, -c))
        elif max(vals) == c:
            found.add((tuple(-x for x in w), c))
    return sorted(found)


def _facets_qhull(proj: Sequence[Point]) -> list[Facet] | None:
    """Facets proposed by qhull, recomputed and checked in exact arithmetic."""
    d = len(proj[0])
    try:
        hull = ConvexHull(np.asarray(proj, dtype=float))
    except QhullError:
        return None
    P = np.asarray(proj, dtype=np.int64)
    groups: dict = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        groups.setdefault(tuple(np.round(eq, 6)), []).append(simplex)
    found = set()
    for simplices in groups.values():
        w = None
        for simplex in simplices:
            base = proj[simplex[0]]
            w = integer_kernel_vector([_sub(proj[i], base) for i in simplex[1:]], d)
            if w is not None:
                break
        if w is None:
            return None
        vals = P @ np.asarray(w, dtype=np.int64)
        c = dot(w, base)
        if vals.min() == c:
            found.add((w, -c))
        elif vals.max() == c:
            found.add((tuple(-x for x in w), c))
        else:
            return None
    return sorted(found)


def _incidence(facets: list[Facet], pts: Sequence[Point]) -> np.ndarray:
    """Boolean matrix: facet k is tight at point i."""
    if not facets:
        return np.zeros((0, len(pts)), dtype=bool)
    W = np.asarray([w for w, _ in facets], dtype=np.int64)
    off = np.asarray([o for _, o in facets], dtype=np.int64)
    return (W @ np.asarray(pts, dtype=np.int64).T) == -off[:, None]


def _affine_rank(pts: Sequence[Point], idx) -> int:
    idx = sorted(idx)
    if not idx:
        return -1
    base = pts[idx[0]]
    return rank([_sub(pts[i], base) for i in idx[1:]])


def _closed(pts: Sequence[Point], facets: list, d: int, memo: dict) -> bool:
    """Whether ``facets`` (point sets) are all the facets of a d-polytope.

    Ridges of each facet are its (d-2)-dimensional intersections with the
    others.  By connectivity of the facet graph the candidate set is complete
    iff each facet's ridge set is itself complete, down to segments that must
    have exactly two endpoints.
    """
    if d == 0:
        return not facets
    if d == 1:
        return len(facets) == 2 and all(len(f) == 1 for f in facets) and facets[0] != facets[1]
    for F in facets:
        ridges = set()
        for G in facets:
            if G is F:
                continue
            R = F & G
            if not R:
                continue
            if R not in memo:
                memo[R] = _affine_rank(pts, R)
            if memo[R] == d - 2:
                ridges.add(R)
        if not _closed(pts, list(ridges), d - 1, memo):
            return False
    return True


def _certified(proj: Sequence[Point], facets: list[Facet]) -> bool:
    """Exact check that ``facets`` are valid and form the complete facet set."""
    d = len(proj[0])
    inc = _incidence(facets, proj)
    tight_sets = [frozenset(np.flatnonzero(row).tolist()) for row in inc]
    memo: dict = {}
    for idx in tight_sets:
        memo[idx] = _affine_rank(proj, idx)
        if memo[idx] != d - 1:
            return False
    if len(set(tight_sets)) != len(tight_sets):
        return False
    return _closed(proj, tight_sets, d, memo)


def _hull_core(pts: Sequence[Point]):
    """Return ``(frame, facets, facet_tight_sets)`` for a deduplicated point list.

    Facets are expressed in projected (pivot) coordinates; tight sets index
    into ``pts``.
    """
    v0, basis, pivots = _affine_frame(pts)
    d = len(pivots)
    if d == 0:
        return (v0, basis, pivots), [], []
    proj = [tuple(p[c] for c in pivots) for p in pts]
    facets = _facets_qhull(proj) if d >= 2 else _facets_brute(proj)
    if facets is None or not _certified(proj, facets):
        facets = _facets_brute(proj)
    inc = _incidence(facets, proj)
    return (v0, basis, pivots), facets, [set(np.flatnonzero(row).tolist()) for row in inc]


# ---------------------------------------------------------------------------
# public type


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many points of Z^n.

    Facet inequalities read ``<normal, x> >= -offset`` and hold on the affine
    hull; normals are primitive and vanish off the pivot coordinates.
    """

    ambient_dim: int
    vertices: tuple[Point, ...]
    facets: tuple[Facet, ...]
    dim: int

    @classmethod
    def hull(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise GeometryError("a lattice polytope needs at least one point")
        n = len(pts[0])
        if n < 1 or any(len(p) != n for p in pts):
            raise GeometryError("points must share one ambient dimension >= 1")
        (v0, basis, pivots), facets, tight = _hull_core(pts)
        d = len(pivots)
        if d == 0:
            return cls(n, (pts[0],), (), 0)
        verts = []
        for i, p in enumerate(pts):
            normals = [facets[k][0] for k, t in enumerate(tight) if i in t]
            if rank(normals, d) == d:
                verts.append(p)
        lifted = []
        for w, off in facets:
            full = [0] * n
            for c, x in zip(pivots, w):
                full[c] = x
            lifted.append((tuple(full), off))
        return cls(n, tuple(verts), tuple(sorted(lifted)), d)

    @classmethod
    def point(cls, n: int) -> "LatticePolytope":
        return cls.hull([(0,) * n])

    @cached_property
    def _frame(self):
        v0, basis, pivots = _affine_frame(list(self.vertices))
        return v0, basis, pivots

    def contains(self, x: Sequence[int]) -> bool:
        return bool(_members(self, np.asarray([x], dtype=np.int64), strict=False)[0])

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, vertices={list(self.vertices)})"


def _lift_matrix(P: LatticePolytope):
    """Integer data for lifting pivot coordinates back to Z^n.

    ``den * x = den * v0 + (y - v0[pivots]) @ B`` for points in the affine hull.
    """
    v0, basis, pivots = P._frame
    den = 1
    for row in basis:
        for x in row:
            den = np.lcm(den, x.denominator)
    B = np.array([[int(x * den) for x in row] for row in basis], dtype=np.int64)
    return int(den), B


def _members(P: LatticePolytope, xs: np.ndarray, strict: bool) -> np.ndarray:
    """Membership mask for integer points ``xs`` (shape (k, n))."""
    xs = np.asarray(xs, dtype=np.int64)
    v0, basis, pivots = P._frame
    if P.dim == 0:
        hit = np.all(xs == np.asarray(v0, dtype=np.int64), axis=1)
        return hit
    ok = np.ones(len(xs), dtype=bool)
    if P.dim < P.ambient_dim:
        den, B = _lift_matrix(P)
        v = np.asarray(v0, dtype=np.int64)
        recon = den * v + (xs[:, pivots] - v[pivots]) @ B
        ok &= np.all(recon == den * xs, axis=1)
    for w, off in P.facets:
        vals = xs @ np.asarray(w, dtype=np.int64)
        ok &= (vals > -off) if strict else (vals >= -off)
    return ok


def _scan(P: LatticePolytope, strict: bool) -> list[Point]:
    v0, basis, pivots = P._frame
    if P.dim == 0:
        return [P.vertices[0]]
    V = np.asarray(P.vertices, dtype=np.int64)
    lo = V[:, pivots].min(axis=0)
    hi = V[:, pivots].max(axis=0)
    grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
    ys = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    den, B = _lift_matrix(P)
    v = np.asarray(v0, dtype=np.int64)
    num = den * v + (ys - v[pivots]) @ B
    integral = np.all(num % den == 0, axis=1)
    ys, xs = ys[integral], num[integral] // den
    keep = np.ones(len(xs), dtype=bool)
    for w, off in P.facets:
        vals = xs @ np.asarray(w, dtype=np.int64)
        keep &= (vals > -off) if strict else (vals >= -off)
    out = sorted(tuple(int(t) for t in row) for row in xs[keep])
    return out


# ---------------------------------------------------------------------------
# operations


def affine_dim(P: LatticePolytope) -> int:
    return P.dim


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise GeometryError(
            f"dimension mismatch: {P.ambient_dim} vs {Q.ambient_dim}"
        )
    return LatticePolytope.hull(
        tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices
    )


def lattice_points(P: LatticePolytope) -> list[Point]:
    """All lattice points of P, sorted lexicographically."""
    return _scan(P, strict=False)


def interior_points(P: LatticePolytope) -> list[Point]:
    """Lattice points of the relative interior (a point is its own interior)."""
    return _scan(P, strict=True)


def lstar(P: LatticePolytope) -> int:
    return len(interior_points(P))


def lstar_k(P: LatticePolytope, k: int) -> int:
    if k < 0:
        raise GeometryError("k must be nonnegative")
    return lstar(P) if P.dim == k else 0


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class PolytopeFamily:
    """Ordered family of n+1 lattice polytopes in Z^n."""

    n: int
    members: tuple[LatticePolytope, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GeometryError("n must be at least 1")
        if len(self.members) != self.n + 1:
            raise GeometryError(
                f"expected {self.n + 1} polytopes for n={self.n}, got {len(self.members)}"
            )
        if any(P.ambient_dim != self.n for P in self.members):
            raise GeometryError("every member must live in Z^n")

    @classmethod
    def from_vertex_lists(cls, vertex_lists) -> "PolytopeFamily":
        members = tuple(LatticePolytope.hull(v) for v in vertex_lists)
        return cls(len(members) - 1, members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i: int) -> LatticePolytope:
        return self.members[i]

    @cached_property
    def _sums(self) -> dict:
        return {(): LatticePolytope.point(self.n)}

    def sum(self, J: Iterable[int]) -> LatticePolytope:
        """Minkowski sum of the members indexed by J (memoized)."""
        key = tuple(sorted(set(J)))
        for j in key:
            if not 0 <= j <= self.n:
                raise IndexError(f"index {j} out of range for {self.n + 1} members")
        cache = self._sums
        if key not in cache:
            head = self.sum(key[:-1])
            cache[key] = self.members[key[0]] if len(key) == 1 else minkowski_sum(
                head, self.members[key[-1]]
            )
        return cache[key]

    @cached_property
    def _directions(self) -> list[list[Point]]:
        out = []
        for P in self.members:
            v0 = P.vertices[0]
            out.append([_sub(v, v0) for v in P.vertices[1:]])
        return out

    def dim_of(self, J: Iterable[int]) -> int:
        """Dimension of the sum over J without building its hull."""
        rows = [d for j in set(J) for d in self._directions[j]]
        return rank(rows, self.n) if rows else 0

    @cached_property
    def _lstars(self) -> dict:
        return {}

    def lstar_of(self, J: Iterable[int]) -> int:
        """l* of the sum over J (memoized)."""
        key = tuple(sorted(set(J)))
        if key not in self._lstars:
            self._lstars[key] = lstar(self.sum(key))
        return self._lstars[key]

    def total(self) -> LatticePolytope:
        return self.sum(range(self.n + 1))


def subsets(n_items: int, min_size: int = 0, max_size: int | None = None):
    """Subsets of range(n_items) by increasing size, then lexicographically."""
    if max_size is None:
        max_size = n_items
    for k in range(min_size, max_size + 1):
        yield from combinations(range(n_items), k)


def subfamily_sum(F: PolytopeFamily, J: Iterable[int]) -> LatticePolytope:
    return F.sum(J)


@dataclass(frozen=True)
class EssentialCertificate:
    essential: bool
    violating_subset: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.essential != (self.violating_subset is None):
            raise ValueError("essential iff no violating subset")

    def recheck(self, F: PolytopeFamily) -> bool:
        """True when a recorded violation really violates the definition."""
        if self.violating_subset is None:
            return True
        J = self.violating_subset
        return 0 < len(J) <= F.n and F.dim_of(J) < len(J)


def is_essential(F: PolytopeFamily) -> EssentialCertificate:
    """Check dim(sum over J) >= |J| for every nonempty J with |J| <= n."""
    violations = [
        J for J in subsets(F.n + 1, 1, F.n) if F.dim_of(J) < len(J)
    ]
    if not violations:
        return EssentialCertificate(True)
    return EssentialCertificate(False, min(violations))
