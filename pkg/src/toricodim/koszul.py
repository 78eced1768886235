"""Ground-truth codimension from the last map of the Koszul complex.

For sections f_0..f_n the degree-rho part of the ideal is the image of
    (g_0, ..., g_n) -> sum_k g_k f_k,   g_k in S_{rho - alpha_k}.
Monomials of a graded piece are lattice points of its polytope, and
multiplying monomials is translation of lattice points, so the map is an
explicit integer matrix and dim (S/I)_rho = dim S_rho - rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .lattice import PolytopeFamily, lattice_points
from .rank import exact_rank, random_primes, rank_check
from .toric import (
    DivisorClass,
    GradedBasis,
    NormalFan,
    critical_degree,
    divisor_class,
    divisor_coeffs,
    graded_basis,
    normal_fan,
)

COEFF_MAX = 2**20


class SectionError(ValueError):
    pass


@dataclass(frozen=True)
class SparseSection:
    """A Laurent polynomial supported in one member of the family."""

    index: int
    coefficients: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        if not any(self.coefficients.values()):
            raise SectionError(f"section {self.index} is identically zero")

    def scaled(self, c: int) -> "SparseSection":
        return SparseSection(self.index, {m: c * v for m, v in self.coefficients.items()})


def _check_support(F: PolytopeFamily, f: SparseSection) -> None:
    if not 0 <= f.index <= F.n:
        raise SectionError(f"section index {f.index} out of range")
    P = F[f.index]
    for m in f.coefficients:
        if len(m) != F.n or not P.contains(m):
            raise SectionError(f"support point {m} of section {f.index} lies outside its polytope")


def homogenize(f: SparseSection, fan: NormalFan, F: PolytopeFamily) -> dict:
    """Exponent-vector form of f in the Cox ring: m -> (<m,n_j> + a_j)_j."""
    _check_support(F, f)
    a = divisor_coeffs(F[f.index], fan)
    out = {}
    for m, c in sorted(f.coefficients.items()):
        out[tuple(sum(x * y for x, y in zip(m, n)) + aj for n, aj in zip(fan.rays, a))] = c
    return out


def generic_sections(F: PolytopeFamily, seed: int) -> list[SparseSection]:
    """Full-support sections with coefficients drawn uniformly from [1, 2**20]."""
    rng = np.random.default_rng(seed)
    out = []
    for i, P in enumerate(F.members):
        pts = lattice_points(P)
        vals = rng.integers(1, COEFF_MAX, size=len(pts), endpoint=True)
        out.append(SparseSection(i, {m: int(v) for m, v in zip(pts, vals)}))
    return out


@dataclass
class KoszulSlice:
    """Matrix of (g_k) -> sum g_k f_k in degree rho.

    Rows are target monomials (lattice points of rho, lexicographic); columns
    run over (k, source point) for each block S_{rho - alpha_k} in turn.
    """

    fan: NormalFan
    rho: DivisorClass
    target: GradedBasis
    sources: list[GradedBasis]
    matrix: list[list[int]] = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target), sum(len(s) for s in self.sources)

    def columns(self):
        for k, src in enumerate(self.sources):
            for m in src.points:
                yield k, m


def koszul_slice(
    F: PolytopeFamily, sections: Sequence[SparseSection], fan: NormalFan | None = None
) -> KoszulSlice:
    if len(sections) != F.n + 1:
        raise SectionError(f"need {F.n + 1} sections, got {len(sections)}")
    for i, f in enumerate(sections):
        if f.index != i:
            raise SectionError(f"section {i} is tagged with polytope {f.index}")
        _check_support(F, f)
    if fan is None:
        fan = normal_fan(F.total())
    rho = critical_degree(F, fan)
    target = graded_basis(rho)
    row_of = target.index()
    sources = [graded_basis(rho - divisor_class(P, fan)) for P in F.members]
    ncols = sum(len(s) for s in sources)
    matrix = [[0] * ncols for _ in range(len(target))]
    col = 0
    for f, src in zip(sections, sources):
        for m in src.points:
            for p, c in f.coefficients.items():
                key = tuple(a + b for a, b in zip(m, p))
                row = row_of.get(key)
                if row is None:
                    raise SectionError(f"product monomial {key} escapes degree rho")
                matrix[row][col] += c
            col += 1
    return KoszulSlice(fan, rho, target, sources, matrix)


def codim_oracle(F: PolytopeFamily, sections: Sequence[SparseSection], engine: str = "auto") -> int:
    """dim (S/I)_rho for the given sections, with no theorem hypotheses assumed."""
    ks = koszul_slice(F, sections)
    return len(ks.target) - exact_rank(ks.matrix, engine)


@dataclass
class OracleRun:
    seed: int
    codim: int
    dim_s_rho: int
    shape: tuple[int, int]
    rank: int
    modular_ranks: list[int]
    primes: list[int]
    ranks_agree: bool


def oracle_run(F: PolytopeFamily, seed: int, check_primes: bool = True, engine: str = "auto") -> OracleRun:
    """Generic draw from ``seed`` and its codimension, with an optional mod-p cross-check."""
    ks = koszul_slice(F, generic_sections(F, seed))
    if check_primes:
        primes = random_primes(np.random.default_rng([seed, 0x5EED]))
        rk, mods, ok = rank_check(ks.matrix, primes, engine)
    else:
        primes, mods, ok = [], [], True
        rk = exact_rank(ks.matrix, engine)
    return OracleRun(seed, len(ks.target) - rk, len(ks.target), ks.shape, rk, mods, primes, ok)
