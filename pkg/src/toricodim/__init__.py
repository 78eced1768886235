"""Codimension of ideals in the critical degree of toric Cox rings.

Closed-form bounds and formulas computed from lattice polytopes, checked
against an exact rank computation on the Koszul complex.
"""

__version__ = "0.1.0"

from .koszul import SparseSection, codim_oracle, generic_sections, homogenize, koszul_slice  # noqa: E402
from .lattice import (  # noqa: E402
    EssentialCertificate,
    LatticePolytope,
    PolytopeFamily,
    affine_dim,
    is_essential,
    lattice_points,
    lstar,
    lstar_k,
    minkowski_sum,
    subfamily_sum,
)
from .rank import exact_rank, modular_rank  # noqa: E402
from .theorems import (  # noqa: E402
    abc_check,
    bignef_case,
    codim_bounds,
    codim_formula,
    e1_table,
    genfor_formula,
    restrictdelta_check,
)
from .toric import (  # noqa: E402
    DivisorClass,
    NormalFan,
    beta0,
    class_equal,
    cohomology_dims,
    critical_degree,
    divisor_coeffs,
    graded_basis,
    is_cartier_nef,
    normal_fan,
)
