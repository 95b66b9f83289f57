"""Lattice-point machinery: listing, successive minima, lattice width, layers.

Points of a polytope are listed in lattice coordinates by recursive
coordinate intervals.  The interval for coordinate j, given the first j
coordinates, comes from the facets of the projection of the polytope onto
its first j+1 coordinates, so every bound is an exact rational and no
partial assignment is a dead end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .lattice import Lattice, PrimitiveDirection, dual_lattice, lll_reduce
from .polytope import (
    RationalPolytope,
    difference_body,
    from_points,
    polar_body,
    volume_in_basis,
)


def _integer_points_in_hull(verts: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    if not verts:
        return []
    d = len(verts[0])
    if d == 0:
        return [()]
    levels = []
    for j in range(1, d + 1):
        P = from_points([v[:j] for v in verts], j)
        cons = []
        for a, b in P.facets:
            cons.append((a[:-1], a[-1], b, False))
        for a, b in P.equations:
            cons.append((a[:-1], a[-1], b, True))
        levels.append(cons)

    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(j: int):
        lo, hi = None, None
        for rest, s, b, is_eq in levels[j]:
            r = b - la.dot(rest, prefix)
            if s == 0:
                if r < 0 or (is_eq and r != 0):
                    return
                continue
            bound = r / s
            if is_eq:
                if bound.denominator != 1:
                    return
                v = int(bound)
                lo = v if lo is None else max(lo, v)
                hi = v if hi is None else min(hi, v)
            elif s > 0:
                v = la.floor_div(bound)
                hi = v if hi is None else min(hi, v)
            else:
                v = la.ceil_div(bound)
                lo = v if lo is None else max(lo, v)
        if lo is None or hi is None:
            raise RuntimeError("coordinate is unbounded; polytope projection is degenerate")
        for v in range(lo, hi + 1):
            prefix.append(v)
            if j + 1 == d:
                out.append(tuple(prefix))
            else:
                rec(j + 1)
            prefix.pop()

    rec(0)
    return out


def list_lattice_points(K: RationalPolytope, lattice: Lattice | None = None) -> list[tuple[Fraction, ...]]:
    """All points of K in the lattice, sorted lexicographically."""
    if K.is_empty:
        return []
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    if lattice.rank == 0:
        zero = (Fraction(0),) * K.dim
        return [zero] if K.contains(zero) else []
    red = Lattice(lattice.ambient_dim, tuple(lll_reduce(lattice.basis)))
    zverts = []
    for v in K.vertices:
        try:
            zverts.append(red.coordinates(v))
        except ValueError:
            raise ValueError("body is not contained in the span of the lattice") from None
    pts = [red.point(z) for z in _integer_points_in_hull(zverts)]
    return sorted(pts)


def count_lattice_points(K: RationalPolytope, lattice: Lattice | None = None) -> int:
    return len(list_lattice_points(K, lattice))


def lattice_point_dimension(points: Sequence[Sequence]) -> int:
    """Affine dimension of a finite point set (-1 if empty)."""
    if not points:
        return -1
    base = points[0]
    return la.rank([la.sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


# ------------------------------------------------------------ minima


@dataclass(frozen=True)
class MinimaProfile:
    values: tuple[Fraction, ...]
    witnesses: tuple[tuple[Fraction, ...], ...]
    radius: Fraction = field(default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "values": [la.fmt(v) for v in self.values],
            "witnesses": [[la.fmt(c) for c in w] for w in self.witnesses],
        }


def _order_key(gauge_value, x):
    # ties: shorter vectors first, then reverse-lexicographic (e_1 before -e_1)
    return (gauge_value, sum(c * c for c in x), tuple(-c for c in x))


def successive_minima(K: RationalPolytope, lattice: Lattice | None = None) -> MinimaProfile:
    """Exact successive minima of an origin-symmetric body w.r.t. a lattice."""
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    if not K.is_symmetric:
        raise ValueError("successive minima need an origin-symmetric body")
    if not K.origin_in_relative_interior:
        raise ValueError("origin is not in the relative interior of the body")
    d = lattice.rank
    if K.affine_dim != d or not all(lattice.in_span(v) for v in K.vertices):
        raise ValueError("body must be full-dimensional in the span of the lattice")
    basis = lll_reduce(lattice.basis)
    # the d basis vectors are independent lattice vectors, so lambda_d <= radius
    radius = max(K.gauge(b) for b in basis)
    big = K.dilate(radius)
    candidates = []
    for x in list_lattice_points(big, Lattice(lattice.ambient_dim, tuple(basis))):
        if any(x):
            candidates.append((_order_key(K.gauge(x), x), x))
    candidates.sort()
    values, witnesses = [], []
    for (g, _, _), x in candidates:
        trial = witnesses + [x]
        if la.rank(trial) == len(trial):
            values.append(g)
            witnesses.append(x)
            if len(witnesses) == d:
                break
    return MinimaProfile(tuple(values), tuple(witnesses), radius)


# ------------------------------------------------------------ width


def width_along(K: RationalPolytope, y: Sequence) -> Fraction:
    vals = [la.dot(v, y) for v in K.vertices]
    return Fraction(max(vals) - min(vals))


def lattice_width(K: RationalPolytope, lattice: Lattice | None = None) -> tuple[Fraction, PrimitiveDirection]:
    """Minimum of the width of K over nonzero dual lattice vectors.

    Any dual vector gives an upper bound W; every dual vector of width at
    most W lies in W (K-K)^*, which is enumerated exactly.
    """
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    if K.affine_dim != lattice.rank:
        raise ValueError("body must be full-dimensional in the span of the lattice")
    dual = Lattice(lattice.ambient_dim, tuple(lll_reduce(dual_lattice(lattice).basis)))
    bound = min(width_along(K, y) for y in dual.basis)
    D = difference_body(K)
    region = polar_body(D).dilate(bound)
    best = None
    for y in list_lattice_points(region, dual):
        if not any(y):
            continue
        key = _order_key(width_along(K, y), y)
        if best is None or key < best[0]:
            best = (key, y)
    (w, _, _), y = best
    return w, PrimitiveDirection(y, dual)


def lattice_width_via_minima(K: RationalPolytope, lattice: Lattice | None = None) -> Fraction:
    """Width as the first successive minimum of (K-K)^* w.r.t. the dual lattice."""
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    dual = dual_lattice(lattice)
    return successive_minima(polar_body(difference_body(K)), dual).values[0]


# ------------------------------------------------------------ layers


@dataclass(frozen=True)
class LayerDecomposition:
    direction: PrimitiveDirection
    beta_range: tuple[int, int]
    counts: dict[int, int]
    best_beta: int

    @property
    def best_count(self) -> int:
        return self.counts[self.best_beta]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {
            "direction": self.direction.to_json(),
            "beta_range": list(self.beta_range),
            "counts": {str(b): c for b, c in sorted(self.counts.items())},
            "best_beta": self.best_beta,
            "best_count": self.best_count,
        }


def layer_decomposition(
    K: RationalPolytope,
    lattice: Lattice | None = None,
    y: PrimitiveDirection | Sequence | None = None,
    points: Sequence | None = None,
) -> LayerDecomposition:
    """Lattice points of K split by the level ``y.x`` of a primitive dual vector."""
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    if y is None:
        y = lattice_width(K, lattice)[1]
    elif not isinstance(y, PrimitiveDirection):
        y = PrimitiveDirection(la.fvec(y), dual_lattice(lattice))
    vec = y.vector
    if points is None:
        points = list_lattice_points(K, lattice)
    levels = [la.dot(v, vec) for v in K.vertices]
    lo, hi = la.ceil_div(min(levels)), la.floor_div(max(levels))
    counts = {b: 0 for b in range(lo, hi + 1)}
    for x in points:
        beta = la.dot(x, vec)
        if Fraction(beta).denominator != 1:
            raise ValueError("direction is not in the dual lattice")
        counts[int(beta)] += 1
    best = min(counts, key=lambda b: (-counts[b], abs(b), b)) if counts else 0
    return LayerDecomposition(y, (lo, hi), counts, best)


def minkowski_second_sides(K: RationalPolytope, lattice: Lattice | None = None) -> tuple[Fraction, Fraction]:
    """Sides of lambda_1...lambda_d vol_d(K)/det(lattice) <= 2^d."""
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    prof = successive_minima(K, lattice)
    prod = Fraction(1)
    for v in prof.values:
        prod *= v
    # volume measured in lattice coordinates is vol_d(K) / det(lattice)
    rel = volume_in_basis(K, lattice.basis)
    return prod * rel, Fraction(2) ** lattice.rank
