"""Toric variety of a Minkowski sum: fan, divisor classes, graded pieces.

The variety is always X_Delta, the toric variety of the normal fan of a
full-dimensional lattice polytope.  Divisor classes are kept as coefficient
vectors over the (lexicographically sorted) rays; class equality is decided
by an exact integer solve rather than by Smith normal form coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import ceil, floor
from typing import Sequence

import numpy as np

from ._linalg import dot, rank, solve_unique
from .lattice import GeometryError, LatticePolytope, PolytopeFamily, lstar


class ToricError(ValueError):
    pass


@dataclass(frozen=True)
class NormalFan:
    n: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @cached_property
    def ray_matrix(self) -> np.ndarray:
        return np.asarray(self.rays, dtype=np.int64)

    @property
    def r(self) -> int:
        return len(self.rays)

    def _decompose(self, cone: Sequence[int], u: Sequence[int]):
        for idx in combinations(cone, self.n):
            rows = [[self.rays[j][i] for j in idx] for i in range(self.n)]
            if rank(rows, self.n) < self.n:
                continue
            lam = solve_unique(rows, list(u))
            if lam is not None and all(x >= 0 for x in lam):
                return idx, lam
        return None

    def cone_containing(self, u: Sequence[int]):
        """Write u as a nonnegative combination of rays of one maximal cone.

        Returns ``(ray_indices, coefficients)`` with Fraction coefficients.
        """
        for cone in self.max_cones:
            found = self._decompose(cone, u)
            if found is not None:
                return found
        raise ToricError(f"direction {tuple(u)} lies in no maximal cone; fan is not complete")

    @cached_property
    def _box_data(self):
        data = []
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 1
            lo = self.cone_containing(e)
            e[i] = -1
            hi = self.cone_containing(e)
            data.append((lo, hi))
        return data

    def contains_direction(self, cone_index: int, u: Sequence[int]) -> bool:
        return self._decompose(self.max_cones[cone_index], u) is not None


def normal_fan(delta: LatticePolytope) -> NormalFan:
    """Normal fan of a full-dimensional polytope; rays are inner facet normals."""
    if delta.dim != delta.ambient_dim:
        raise ToricError(
            f"normal fan needs a full-dimensional polytope (dim {delta.dim} < {delta.ambient_dim})"
        )
    rays = tuple(sorted(w for w, _ in delta.facets))
    off = dict(delta.facets)
    cones = []
    for v in delta.vertices:
        cones.append(tuple(j for j, w in enumerate(rays) if dot(w, v) == -off[w]))
    return NormalFan(delta.ambient_dim, rays, tuple(cones))


def support_values(P: LatticePolytope, fan: NormalFan) -> tuple[int, ...]:
    """a_j = -min over P of <m, n_j>."""
    V = np.asarray(P.vertices, dtype=np.int64)
    mins = (V @ fan.ray_matrix.T).min(axis=0)
    return tuple(int(-x) for x in mins)


def cartier_data(P: LatticePolytope, fan: NormalFan):
    """Per-cone lattice points of P attaining the support function, or None."""
    a = support_values(P, fan)
    out = []
    for cone in fan.max_cones:
        hit = next(
            (v for v in P.vertices if all(dot(v, fan.rays[j]) == -a[j] for j in cone)),
            None,
        )
        if hit is None:
            return None
        out.append(hit)
    return out


def is_cartier_nef(P: LatticePolytope, fan: NormalFan) -> bool:
    return cartier_data(P, fan) is not None


def divisor_coeffs(P: LatticePolytope, fan: NormalFan) -> tuple[int, ...]:
    """Coefficients a with P = {m : <m, n_j> >= -a_j for all j}.

    Raises ToricError when the fan does not refine the normal fan of P, in
    which case the inequalities cut out a different polytope.
    """
    if P.ambient_dim != fan.n:
        raise GeometryError("polytope and fan live in different dimensions")
    if not is_cartier_nef(P, fan):
        raise ToricError("fan does not refine the normal fan of the polytope")
    return support_values(P, fan)


@dataclass(frozen=True)
class DivisorClass:
    """Class of sum a_j D_j in the class group, stored by a representative."""

    fan: NormalFan
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.fan.r:
            raise ToricError("one coefficient per ray is required")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same_fan(self, other)
        return DivisorClass(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _same_fan(self, other)
        return DivisorClass(self.fan, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def shifted(self, m: Sequence[int]) -> "DivisorClass":
        """Another representative of the same class (adds div(chi^m))."""
        return DivisorClass(
            self.fan, tuple(a + dot(m, n) for a, n in zip(self.coeffs, self.fan.rays))
        )

    def plus_canonical(self) -> "DivisorClass":
        # K is -sum D_j
        return DivisorClass(self.fan, tuple(a - 1 for a in self.coeffs))


def _same_fan(a: DivisorClass, b: DivisorClass) -> None:
    if a.fan != b.fan:
        raise ToricError("divisor classes live on different fans")


def divisor_class(P: LatticePolytope, fan: NormalFan) -> DivisorClass:
    return DivisorClass(fan, divisor_coeffs(P, fan))


def principal_character(a: DivisorClass, b: DivisorClass):
    """m in Z^n with a - b = (<m, n_j>)_j, or None if the classes differ."""
    _same_fan(a, b)
    diff = [x - y for x, y in zip(a.coeffs, b.coeffs)]
    sol = solve_unique([list(n) for n in a.fan.rays], diff)
    if sol is None or any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def class_equal(a: DivisorClass, b: DivisorClass) -> bool:
    return principal_character(a, b) is not None


def beta0(fan: NormalFan) -> DivisorClass:
    """Sum of the degrees of all Cox variables (the anticanonical class)."""
    return DivisorClass(fan, (1,) * fan.r)


def critical_degree(F: PolytopeFamily, fan: NormalFan) -> DivisorClass:
    total = [0] * fan.r
    for P in F.members:
        for j, a in enumerate(divisor_coeffs(P, fan)):
            total[j] += a
    return DivisorClass(fan, tuple(total)) - beta0(fan)


@dataclass(frozen=True)
class GradedBasis:
    """Monomial basis of one graded piece, indexed by lattice points."""

    cls: DivisorClass
    points: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    def exponents(self) -> list[tuple[int, ...]]:
        c = self.cls.coeffs
        return [tuple(dot(m, n) + a for n, a in zip(self.cls.fan.rays, c)) for m in self.points]

    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.points)}


def _box(c: DivisorClass):
    lo, hi = [], []
    for (idx_lo, lam_lo), (idx_hi, lam_hi) in c.fan._box_data:
        lo.append(ceil(-sum(l * c.coeffs[j] for j, l in zip(idx_lo, lam_lo))))
        hi.append(floor(sum(l * c.coeffs[j] for j, l in zip(idx_hi, lam_hi))))
    return lo, hi


def graded_basis(c: DivisorClass) -> GradedBasis:
    """Lattice points of {m : <m, n_j> >= -c_j}, sorted lexicographically."""
    lo, hi = _box(c)
    if any(a > b for a, b in zip(lo, hi)):
        return GradedBasis(c, ())
    grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    vals = pts @ c.fan.ray_matrix.T
    keep = np.all(vals >= -np.asarray(c.coeffs, dtype=np.int64), axis=1)
    points = tuple(sorted(tuple(int(t) for t in row) for row in pts[keep]))
    return GradedBasis(c, points)


def cohomology_dims(P: LatticePolytope, fan: NormalFan):
    """Dimensions of H^i(O(-D)) and H^i(O(D+K)) for the nef divisor of P.

    Returns ``(h_minus, h_plus_k)``, each a list indexed by i = 0..n.
    """
    if not is_cartier_nef(P, fan):
        raise ToricError("cohomology formula needs a nef Cartier divisor")
    n = fan.n
    count = lstar(P)
    h_minus = [0] * (n + 1)
    h_plus_k = [0] * (n + 1)
    h_minus[P.dim] = count
    h_plus_k[n - P.dim] = count
    return h_minus, h_plus_k

