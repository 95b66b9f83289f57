from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from _oracles import integer_clouds, unimodular_matrices
from latslice import linalg as la
from latslice.bodies import crosspolytope, cube, randomhull, recenter, simplex, skewprism
from latslice.constants import PI_HI, PI_LO, FlatnessTable
from latslice.enumeration import count_lattice_points
from latslice.polytope import Flat, from_points
from latslice.slicing import (
    OracleBudgetExceeded,
    affine_slice,
    best_affine_hyperplane,
    central_slice,
    centralize,
    count_on_flat,
    empirical_c,
    koldobsky_certificate,
    oracle_best_flat,
    rabinowitz_line,
    verify_certificate,
)

F = Fraction


def test_pi_bounds_bracket_pi():
    import math

    assert PI_LO < PI_HI
    assert PI_HI - PI_LO == F(1, 10**30)
    assert float(PI_LO) <= math.pi <= float(PI_HI)


def test_flatness_table_defaults_and_fallback():
    t = FlatnessTable()
    assert t(2) == F(11, 5)
    values = [t(d) for d in range(1, 12)]
    assert values == sorted(values)
    assert all(v >= d for d, v in zip(range(1, 12), values))
    assert FlatnessTable.from_json(t.to_json()) == t


def test_flatness_table_rejects_bad_entries():
    with pytest.raises(ValueError):
        FlatnessTable({1: F(1), 2: F(3, 2)})
    with pytest.raises(ValueError):
        FlatnessTable({1: F(3), 2: F(2)})


def test_rabinowitz_examples():
    c = rabinowitz_line(cube(2))
    assert c.count_in_plane == 3 and c.rhs == 9 >= c.lhs
    c = rabinowitz_line(crosspolytope(3))
    assert c.count_in_plane == 3 and c.holds
    point = from_points([(0, 0)])
    c = rabinowitz_line(point)
    assert c.count_in_plane == 1 and c.holds


def test_best_affine_hyperplane_examples():
    c = best_affine_hyperplane(crosspolytope(3))
    assert c.count_in_plane == 5 and c.lhs == 7 and c.rhs == 20
    c = best_affine_hyperplane(cube(2))
    assert c.count_in_plane == 3 and c.rhs == 12
    c = best_affine_hyperplane(skewprism(2))
    assert c.details["width"] == 2
    assert c.count_in_plane >= 2 and c.holds


def test_best_affine_hyperplane_needs_spanning_points():
    thin = from_points([(0, 0), (2, 0), (F(1), F(1, 2))])
    with pytest.raises(ValueError, match="lower-dimensional"):
        best_affine_hyperplane(thin)


def test_affine_slice_examples():
    c = affine_slice(crosspolytope(3), 2)
    assert c.count_in_plane == 5 and c.holds
    assert 5**3 >= 7**2
    c = affine_slice(cube(3), 1)
    assert c.count_in_plane == 3
    c = affine_slice(simplex(3, 5), 2)
    assert c.holds
    assert c.count_in_plane <= oracle_best_flat(simplex(3, 5), 2).count_in_plane


def test_affine_slice_trace_labels():
    allowed = {"thin-body", "projection", "degenerate-span", "rabinowitz-line"}
    for K in (crosspolytope(3), simplex(3, 5), cube(3, 2)):
        for k in (1, 2):
            c = affine_slice(K, k)
            assert set(c.branch_trace) <= allowed
            assert c.plane.dim == k
            assert verify_certificate(K, c)


def test_centralize_parallelogram():
    K = skewprism(2)
    A = Flat.hyperplane((0, 1), 1)
    c = centralize(K, A, "symmetric")
    assert c.lhs == 2
    assert c.details["candidates"]["parallel"] == 1
    assert c.count_in_plane == 3
    assert c.plane.is_central and c.holds


def test_centralize_square():
    c = centralize(cube(2), Flat.hyperplane((1, 0), 1), "symmetric")
    assert c.count_in_plane == 3 and c.lhs == 3


def test_centralize_centered_triangle_against_oracle():
    K = simplex(2, 3, centered=True)
    A = affine_slice(K, 1).plane
    c = centralize(K, A, "centered")
    assert c.holds and c.branch_trace
    assert c.count_in_plane <= oracle_best_flat(K, 1, central=True).count_in_plane


def test_centralize_mode_checks():
    with pytest.raises(ValueError):
        centralize(simplex(2), Flat.hyperplane((1, 0), 0), "symmetric")
    with pytest.raises(ValueError):
        centralize(cube(2), Flat.hyperplane((1, 0), F(1, 2)), "symmetric")


def test_central_slice_examples():
    assert central_slice(crosspolytope(3), 2).count_in_plane == 5
    assert central_slice(cube(3), 2).count_in_plane == 9


def test_central_slice_skew_prism_3d():
    K = recenter(skewprism(3))
    c = central_slice(K, 2)
    best = oracle_best_flat(K, 2, central=True).count_in_plane
    assert c.holds and c.count_in_plane <= best


def test_koldobsky_examples():
    c = koldobsky_certificate(crosspolytope(3))
    assert c.count_in_plane == 5 and c.holds
    assert c.details["ratio_power"] == F(7**3) / (F(5**3) * F(4, 3))
    c = koldobsky_certificate(cube(2))
    # 9 <= (3/2) * 3 * 2
    assert F(9) <= F(3, 2) * c.count_in_plane * 2
    assert c.details["ratio_power"] == F(81, 9 * 4)


def test_empirical_c_is_smallest_on_grid():
    ratio, n = F(343, 36), 3
    c = empirical_c(ratio, n)
    assert c**n * n ** (2 * n) >= ratio
    assert (c - F(1, 1000)) ** n * n ** (2 * n) < ratio


def test_oracle_examples():
    assert oracle_best_flat(crosspolytope(3), 2, central=True).count_in_plane == 5
    c = oracle_best_flat(skewprism(2), 1, central=True)
    assert c.count_in_plane == 3
    assert oracle_best_flat(cube(2), 1).count_in_plane == 3


def test_oracle_refuses_over_budget():
    with pytest.raises(OracleBudgetExceeded):
        oracle_best_flat(cube(3, 2), 2, budget=10)


def test_skew_prism_gap():
    for n in (2, 3):
        K = skewprism(n)
        A = Flat.hyperplane(tuple(int(i == n - 1) for i in range(n)), 1)
        assert count_on_flat(K, A) == 2 ** (n - 1)
        assert count_on_flat(K, A.direction()) < 2 ** (n - 1)


@settings(max_examples=20, deadline=None)
@given(integer_clouds(n=2, box=2, max_points=6))
def test_pipeline_never_beats_oracle_2d(pts):
    K = from_points(pts)
    assume(K.is_full_dimensional)
    line = rabinowitz_line(K)
    assert line.holds
    assert line.count_in_plane == oracle_best_flat(K, 1).count_in_plane
    c = best_affine_hyperplane(K)
    assert c.holds and verify_certificate(K, c)


@settings(max_examples=10, deadline=None)
@given(integer_clouds(n=3, box=1, min_points=4, max_points=6), unimodular_matrices(3))
def test_oracle_unimodular_invariance(pts, T):
    K = from_points(pts)
    assume(K.is_full_dimensional)
    TK = K.linear_image(T)
    for k in (1, 2):
        assert oracle_best_flat(K, k).count_in_plane == oracle_best_flat(TK, k).count_in_plane
    c = affine_slice(TK, 2)
    assert verify_certificate(TK, c)


def test_symmetric_random_hulls_certify():
    for seed in range(3):
        K = randomhull(3, points=3, box=2, seed=seed, symmetric=True)
        c = koldobsky_certificate(K)
        assert verify_certificate(K, c)
        assert c.count_in_plane <= oracle_best_flat(K, 2, central=True).count_in_plane
        assert c.count_in_plane >= c.details["affine_count"] or c.holds


def test_count_on_flat_matches_filter():
    K = cube(3, 2)
    F_ = Flat((0, 0, 0), ((1, 1, 0), (0, 1, 1)))
    from latslice.enumeration import list_lattice_points

    expected = sum(1 for p in list_lattice_points(K) if F_.contains(p))
    assert count_on_flat(K, F_) == expected
    assert count_lattice_points(K) == 125
