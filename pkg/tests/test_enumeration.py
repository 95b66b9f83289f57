from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from _oracles import brute_minima, brute_points, brute_width, integer_clouds, unimodular_matrices
from latslice.bodies import crosspolytope, cube, simplex, skewprism
from latslice.enumeration import (
    count_lattice_points,
    lattice_width,
    lattice_width_via_minima,
    layer_decomposition,
    list_lattice_points,
    minkowski_second_sides,
    successive_minima,
)
from latslice.lattice import Lattice
from latslice.polytope import difference_body, from_points

F = Fraction


def test_counts():
    assert count_lattice_points(cube(2)) == 9
    assert count_lattice_points(crosspolytope(3)) == 7
    assert count_lattice_points(skewprism(2)) == 5


def test_count_in_sublattice():
    L = Lattice(2, ((2, 0), (0, 1)))
    assert count_lattice_points(cube(2), L) == 3


def test_listing_is_sorted_and_exact():
    pts = list_lattice_points(simplex(2, 2))
    assert pts == sorted(pts)
    assert len(pts) == 6


@settings(max_examples=40, deadline=None)
@given(integer_clouds(n=3, box=2, min_points=4, max_points=6))
def test_count_matches_box_scan(pts):
    K = from_points(pts)
    assume(K.is_full_dimensional)
    assert [tuple(int(c) for c in p) for p in list_lattice_points(K)] == brute_points(K)


@settings(max_examples=30, deadline=None)
@given(integer_clouds(n=3, box=2, min_points=4, max_points=6), unimodular_matrices(3))
def test_count_unimodular_invariance(pts, T):
    K = from_points(pts)
    assume(K.is_full_dimensional)
    assert count_lattice_points(K.linear_image(T)) == count_lattice_points(K)


def test_minima_examples():
    prof = successive_minima(crosspolytope(3))
    assert prof.values == (1, 1, 1)
    assert set(map(tuple, prof.witnesses)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}

    box = from_points([(x, y) for x in (F(-1, 2), F(1, 2)) for y in (-2, 2)])
    prof = successive_minima(box)
    assert prof.values == (F(1, 2), 2)
    assert prof.witnesses == ((0, 1), (1, 0))


def test_minima_need_symmetry():
    with pytest.raises(ValueError):
        successive_minima(simplex(2))


@settings(max_examples=25, deadline=None)
@given(integer_clouds(n=2, box=3, min_points=2, max_points=4))
def test_minima_match_scan_and_minkowski(pts):
    K = from_points(pts + [tuple(-c for c in p) for p in pts])
    assume(K.is_full_dimensional)
    prof = successive_minima(K)
    assert list(prof.values) == brute_minima(K, 7)
    lhs, rhs = minkowski_second_sides(K)
    assert lhs <= rhs == 4


def test_width_examples():
    w, y = lattice_width(cube(3).translate((1, 1, 1)).dilate(F(1, 2)))
    assert w == 1 and y.vector == (1, 0, 0)
    w, y = lattice_width(crosspolytope(3))
    assert w == 2 and y.vector == (1, 0, 0)
    w, _ = lattice_width(skewprism(2))
    assert w == 2 == lattice_width_via_minima(skewprism(2))


@settings(max_examples=30, deadline=None)
@given(integer_clouds(n=2, box=3, max_points=6))
def test_width_identity_and_scan(pts):
    K = from_points(pts)
    assume(K.is_full_dimensional)
    w, y = lattice_width(K)
    assert w == lattice_width_via_minima(K)
    assert w == brute_width(K, 6)


def test_layers_examples():
    L = layer_decomposition(cube(2), y=(1, 0))
    assert L.counts == {-1: 3, 0: 3, 1: 3} and L.best_beta == 0
    L = layer_decomposition(crosspolytope(3), y=(1, 0, 0))
    assert L.counts == {-1: 1, 0: 5, 1: 1} and L.best_count == 5
    L = layer_decomposition(skewprism(2), y=(0, 1))
    assert L.counts == {-1: 2, 0: 1, 1: 2}
    assert L.best_count == 2 and L.counts[0] == 1
    assert L.best_beta == -1


@settings(max_examples=30, deadline=None)
@given(integer_clouds(n=3, box=2, min_points=4, max_points=6))
def test_layer_sum_and_width_bounds(pts):
    K = from_points(pts)
    assume(K.is_full_dimensional)
    w, y = lattice_width(K)
    L = layer_decomposition(K, y=y)
    G = count_lattice_points(K)
    assert L.total == G
    assert L.beta_range[1] - L.beta_range[0] <= w
    assert G <= (w + 1) * L.best_count
    # all vertices are lattice points, so they span R^3
    assert G <= 2 * w * L.best_count


def test_width_of_difference_body_doubles():
    K = simplex(3, 2)
    assert lattice_width(difference_body(K))[0] == 2 * lattice_width(K)[0]
