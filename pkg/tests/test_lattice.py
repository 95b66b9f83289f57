from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from _oracles import unimodular_matrices
from latslice import linalg as la
from latslice.lattice import (
    Lattice,
    dual_lattice,
    hermite_normal_form,
    integer_kernel,
    integer_points_of_flat,
    intersection_lattice,
    lll_reduce,
    primitive_along,
    projection_lattice,
)
from latslice.polytope import Flat

F = Fraction


def as_lists(M):
    return [list(r) for r in M]


def lat(*rows):
    return Lattice(len(rows[0]), tuple(rows))


def test_hnf_identity():
    H, U = hermite_normal_form([[1, 0], [0, 1]])
    assert H == [[1, 0], [0, 1]] and U == [[1, 0], [0, 1]]


def test_hnf_small_example():
    M = [[2, 1], [0, 1]]
    H, U = hermite_normal_form(M)
    assert H == as_lists(la.matmul(U, M))
    assert abs(la.det(U)) == 1
    assert abs(la.det(H)) == 2


@settings(max_examples=30, deadline=None)
@given(unimodular_matrices(3))
def test_hnf_of_unimodular_is_identity(T):
    H, U = hermite_normal_form(T)
    assert H == la.identity(3)
    assert as_lists(la.matmul(U, T)) == la.identity(3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_hnf_postconditions(M):
    H, U = hermite_normal_form(M)
    assert H == as_lists(la.matmul(U, M))
    assert abs(la.det(U)) == 1
    last = -1
    for row in H:
        if any(row):
            p = next(i for i, c in enumerate(row) if c)
            assert p > last and row[p] > 0
            last = p


def test_dual_examples():
    assert dual_lattice(Lattice.standard(3)).same_lattice(Lattice.standard(3))
    assert dual_lattice(lat((2, 0), (0, 1))).same_lattice(lat((F(1, 2), 0), (0, 1)))
    assert dual_lattice(lat((1, 1))).same_lattice(lat((F(1, 2), F(1, 2))))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=2, max_size=3))
def test_dual_involution_and_covolume(rows):
    assume(la.rank(rows) == len(rows))
    L = Lattice(3, tuple(rows))
    D = dual_lattice(L)
    assert L.gram_det * D.gram_det == 1
    assert dual_lattice(D).same_lattice(L)


def test_intersection_examples():
    assert intersection_lattice(Lattice.standard(2), Flat.central([(1, 1)])).same_lattice(lat((1, 1)))
    assert intersection_lattice(Lattice.standard(2), Flat.central([(2, 4)])).same_lattice(lat((1, 2)))
    plane = Flat.central([(1, 0, 0), (0, 1, 0)])
    assert intersection_lattice(Lattice.standard(3), plane).same_lattice(lat((1, 0, 0), (0, 1, 0)))


def test_projection_examples():
    assert projection_lattice(Lattice.standard(2), Flat.central([(1, 1)])).same_lattice(lat((F(1, 2), F(1, 2))))
    plane = Flat.central([(1, 0, 0), (0, 1, 0)])
    assert projection_lattice(Lattice.standard(3), plane).same_lattice(lat((1, 0, 0), (0, 1, 0)))
    assert projection_lattice(Lattice.standard(2), Flat.central([(1, 2)])).same_lattice(lat((F(1, 5), F(2, 5))))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=2))
def test_sublattice_identities(rows):
    assume(la.rank(rows) == len(rows))
    Zn = Lattice.standard(3)
    Lf = Flat.central(rows)
    perp = Flat.central(la.nullspace(rows, 3))
    meet = intersection_lattice(Zn, perp)
    proj = projection_lattice(Zn, Lf)
    # squared covolumes: det(Z^n cap L^perp) det(Z^n | L) = det(Z^n)
    assert meet.gram_det * proj.gram_det == 1
    # (Z^n cap L)* computed inside L is Z^n | L
    assert dual_lattice(intersection_lattice(Zn, Lf)).same_lattice(proj)


def test_primitive_along():
    Z2, Z3 = Lattice.standard(2), Lattice.standard(3)
    assert primitive_along((2, 4), Z2).vector == (1, 2)
    assert primitive_along((F(1, 2), F(1, 2)), Z2).vector == (1, 1)
    assert primitive_along((1, 0, 0), Z3).vector == (1, 0, 0)
    assert primitive_along((-3, 0), Z2).vector == (-1, 0)


def test_primitive_along_errors():
    with pytest.raises(ValueError):
        primitive_along((0, 1), lat((1, 0)))
    with pytest.raises(ValueError):
        primitive_along((0, 0), Lattice.standard(2))


def test_integer_points_of_flat():
    x0, L = integer_points_of_flat(Flat.hyperplane((2, 4), 6))
    assert 2 * x0[0] + 4 * x0[1] == 6
    assert L.same_lattice(lat((-2, 1)))
    assert integer_points_of_flat(Flat.hyperplane((2, 4), 3)) is None


def test_integer_kernel():
    K = integer_kernel([[1, 1, 1]], 3)
    assert len(K) == 2
    assert all(sum(v) == 0 for v in K)


def test_lll_keeps_lattice_and_shortens():
    B = [(1, 0, 0), (7, 1, 0), (13, 5, 1)]
    R = lll_reduce(B)
    assert Lattice(3, tuple(R)).same_lattice(Lattice(3, tuple(B)))
    assert max(la.dot(v, v) for v in R) <= 3


def test_lll_custom_metric():
    M = [[1, 0], [0, 100]]
    R = lll_reduce([(1, 0), (0, 1)], inner=M)
    assert Lattice(2, tuple(R)).same_lattice(Lattice.standard(2))
