import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from families import full_dimensional_family
from oracles import polyhedron_points
from toricodim.lattice import LatticePolytope, PolytopeFamily, lattice_points, lstar, minkowski_sum
from toricodim.toric import (
    DivisorClass,
    ToricError,
    beta0,
    class_equal,
    cohomology_dims,
    critical_degree,
    divisor_class,
    divisor_coeffs,
    graded_basis,
    is_cartier_nef,
    normal_fan,
    principal_character,
)

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
TRIANGLE = [(0, 0), (1, 0), (0, 1)]


def hull(pts):
    return LatticePolytope.hull(pts)


@pytest.fixture
def p1xp1():
    return normal_fan(hull(SQUARE))


@pytest.fixture
def p2():
    return normal_fan(hull(TRIANGLE))


def test_square_fan(p1xp1):
    assert p1xp1.rays == ((-1, 0), (0, -1), (0, 1), (1, 0))
    assert len(p1xp1.max_cones) == 4
    assert all(len(c) == 2 for c in p1xp1.max_cones)


def test_triangle_fan(p2):
    assert sorted(p2.rays) == [(-1, -1), (0, 1), (1, 0)]
    assert len(p2.max_cones) == 3


def test_segment_fan():
    fan = normal_fan(hull([(0,), (3,)]))
    assert fan.rays == ((-1,), (1,))


def test_fan_needs_full_dimension():
    with pytest.raises(ToricError):
        normal_fan(hull([(0, 0), (1, 0)]))


@pytest.mark.parametrize(
    "pts, expected",
    [
        (SQUARE, (1, 1, 0, 0)),
        ([(0, 0), (2, 0)], (2, 0, 0, 0)),
        ([(0, 0), (0, 1)], (0, 1, 0, 0)),
        ([(1, 1)], (1, 1, -1, -1)),
    ],
)
def test_square_divisor_coeffs(p1xp1, pts, expected):
    # rays in lexicographic order: (-1,0), (0,-1), (0,1), (1,0)
    assert divisor_coeffs(hull(pts), p1xp1) == expected


def test_coefficients_reconstruct_polytope(p1xp1):
    P = hull([(0, 0), (2, 0), (0, 1), (2, 1)])
    a = divisor_coeffs(P, p1xp1)
    assert polyhedron_points(p1xp1.rays, a, 5) == lattice_points(P)


def test_nef_check(p2, p1xp1):
    assert is_cartier_nef(hull(TRIANGLE), p2)
    # a segment's normal fan is not refined by the P^2 fan
    assert not is_cartier_nef(hull([(0, 0), (0, 1)]), p2)
    with pytest.raises(ToricError):
        divisor_coeffs(hull([(0, 0), (0, 1)]), p2)
    assert is_cartier_nef(hull([(0, 0), (0, 1)]), p1xp1)


def test_class_equality(p1xp1):
    D = divisor_class(hull(SQUARE), p1xp1)
    assert class_equal(D, D.shifted((3, -2)))
    assert principal_character(D.shifted((3, -2)), D) == (3, -2)
    assert not class_equal(D, beta0(p1xp1))
    other = DivisorClass(p1xp1, (0, 0, 1, 1))
    assert class_equal(D, other)


def test_beta0_and_critical_degree(p1xp1):
    assert beta0(p1xp1).coeffs == (1, 1, 1, 1)
    F = PolytopeFamily.from_vertex_lists([[(0, 0), (2, 0)], SQUARE, SQUARE])
    rho = critical_degree(F, p1xp1)
    assert rho.coeffs == (3, 1, -1, -1)
    assert len(graded_basis(rho)) == 3


def test_graded_basis_for_square_multiples(p1xp1):
    D = divisor_class(hull(SQUARE), p1xp1)
    assert len(graded_basis(D)) == 4
    assert len(graded_basis(D + D)) == 9
    assert len(graded_basis(D - D - D)) == 0


def test_dim_s_rho_is_interior_count():
    rng = np.random.default_rng(7)
    for n in (2, 3):
        for _ in range(5):
            F = full_dimensional_family(rng, n, 2)
            fan = normal_fan(F.total())
            assert len(graded_basis(critical_degree(F, fan))) == lstar(F.total())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_graded_basis_matches_scan(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    F = full_dimensional_family(rng, n, 2)
    fan = normal_fan(F.total())
    coeffs = tuple(int(x) for x in rng.integers(-2, 3, size=fan.r))
    c = DivisorClass(fan, coeffs)
    basis = graded_basis(c)
    assert list(basis.points) == polyhedron_points(fan.rays, coeffs, 12)
    # exponents are nonnegative and reconstruct the point
    for m, e in zip(basis.points, basis.exponents()):
        assert min(e, default=0) >= 0
        assert e == tuple(int(np.dot(m, r)) + a for r, a in zip(fan.rays, coeffs))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_nef_classes_are_linear(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    F = full_dimensional_family(rng, n, 2)
    fan = normal_fan(F.total())
    P, Q = F[0], F[1]
    assert divisor_class(P, fan) + divisor_class(Q, fan) == divisor_class(minkowski_sum(P, Q), fan)
    # translating the polytope keeps the class
    shift = tuple(int(x) for x in rng.integers(-3, 4, size=n))
    moved = hull([tuple(a + b for a, b in zip(v, shift)) for v in P.vertices])
    assert class_equal(divisor_class(P, fan), divisor_class(moved, fan))
    assert len(graded_basis(divisor_class(P, fan))) == len(lattice_points(P))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_graded_piece_independent_of_representative(seed, m):
    rng = np.random.default_rng(seed)
    F = full_dimensional_family(rng, 3, 2)
    fan = normal_fan(F.total())
    rho = critical_degree(F, fan)
    assert len(graded_basis(rho)) == len(graded_basis(rho.shifted(m)))


def test_cohomology_projective_line():
    fan = normal_fan(hull([(0,), (1,)]))
    P = hull([(0,), (4,)])
    h_minus, h_plus = cohomology_dims(P, fan)
    # H^1(O(-4)) = 3 on P^1; H^0(O(4 - 2)) = 3
    assert h_minus == [0, 3]
    assert h_plus == [3, 0]


def test_cohomology_p1xp1(p1xp1):
    P = hull([(0, 0), (3, 0), (0, 2), (3, 2)])
    h_minus, h_plus = cohomology_dims(P, p1xp1)
    assert h_minus == [0, 0, 2]
    assert h_plus == [2, 0, 0]
    seg = hull([(0, 0), (3, 0)])
    h_minus, h_plus = cohomology_dims(seg, p1xp1)
    assert h_minus == [0, 2, 0]
    assert h_plus == [0, 2, 0]


def test_cohomology_requires_nef(p2):
    with pytest.raises(ToricError):
        cohomology_dims(hull([(0, 0), (0, 1)]), p2)


def test_incomplete_fan_is_reported():
    from toricodim.toric import NormalFan

    fan = NormalFan(2, ((1, 0), (0, 1)), ((0, 1),))
    with pytest.raises(ToricError):
        fan.cone_containing((-1, 0))
