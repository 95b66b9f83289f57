"""Certified two-sided bounds on the covering radius.

Work happens in lattice coordinates, where the lattice is Z^d, with the
body translated so an interior point sits at the origin.  Then

    mu(K) = max over p in [0,1]^d of rho(p),   rho(p) = min_z ||p - z||_K,

and ``||.||_K`` is the gauge.  A box B is covered at level U(B) by the best
single translate (convexity: checking the 2^d corners suffices), and
rho(center of B) is a certified lower bound.  Boxes are refined
largest-U first until the gap closes.  All arithmetic is on integers:
corners live on the grid 2^-depth Z^d.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm

from . import linalg as la
from .lattice import Lattice, lll_reduce
from .polytope import RationalPolytope, from_points

DEFAULT_TOL = Fraction(1, 128)
DEFAULT_MAX_DEPTH = 20
DEFAULT_MAX_BOXES = 6000


@dataclass(frozen=True)
class CoveringInterval:
    lower: Fraction
    upper: Fraction
    tolerance: Fraction
    boxes: int = 0
    # point of the fundamental cell (ambient coordinates, before the internal
    # translation) whose distance to the lattice certifies ``lower``
    witness: tuple | None = None

    @property
    def converged(self) -> bool:
        return self.upper - self.lower <= self.tolerance

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def to_json(self) -> dict:
        return {
            "lower": la.fmt(self.lower),
            "upper": la.fmt(self.upper),
            "tolerance": la.fmt(self.tolerance),
            "converged": self.converged,
            "boxes": self.boxes,
        }


class _Gauge:
    """Integer gauge on the grid: ||X/T - z|| = max_f (W_f.X - T W_f.z) / (den T)."""

    def __init__(self, P: RationalPolytope, scale: int):
        rows = []
        for a, b in P.facets:
            # a.x / b with b > 0
            rows.append(tuple(Fraction(c) / b for c in a))
        den = reduce(lcm, (c.denominator for r in rows for c in r), 1)
        self.W = [tuple(int(c * den) for c in r) for r in rows]
        self.den = den
        self.T = scale
        self._xcache: dict[tuple, tuple] = {}
        self._zcache: dict[tuple, tuple] = {}
        lo, hi = P.bounding_box()
        self.lo = lo
        self.hi = hi

    def wx(self, X):
        v = self._xcache.get(X)
        if v is None:
            v = tuple(sum(w * x for w, x in zip(row, X)) for row in self.W)
            self._xcache[X] = v
        return v

    def wz(self, z):
        v = self._zcache.get(z)
        if v is None:
            T = self.T
            v = tuple(T * sum(w * c for w, c in zip(row, z)) for row in self.W)
            self._zcache[z] = v
        return v

    def value(self, X, z) -> int:
        return max(a - b for a, b in zip(self.wx(X), self.wz(z)))

    def z_range_fitting(self, lo_X, hi_X, level: Fraction):
        """Integer z that can satisfy B subset of level*P + z (bounding-box test)."""
        T = self.T
        ranges = []
        for i in range(len(lo_X)):
            zmin = la.ceil_div(Fraction(hi_X[i], T) - level * self.hi[i])
            zmax = la.floor_div(Fraction(lo_X[i], T) - level * self.lo[i])
            if zmin > zmax:
                return None
            ranges.append(range(zmin, zmax + 1))
        return ranges

    def z_range_point(self, X, level: Fraction):
        T = self.T
        ranges = []
        for i in range(len(X)):
            zmin = la.ceil_div(Fraction(X[i], T) - level * self.hi[i])
            zmax = la.floor_div(Fraction(X[i], T) - level * self.lo[i])
            ranges.append(range(zmin, zmax + 1))
        return ranges


def _box_upper(g: _Gauge, lo_X, hi_X, level: Fraction, hint=None):
    """min over translates z of max over corners of the gauge; returns (value, z)."""
    d = len(lo_X)
    corners = [tuple(c) for c in product(*[(lo_X[i], hi_X[i]) for i in range(d)])]
    best, best_z = None, None
    candidates = []
    if hint is not None:
        candidates.append(hint)
    ranges = g.z_range_fitting(lo_X, hi_X, level)
    if ranges is not None:
        candidates.extend(product(*ranges))
    for z in candidates:
        worst = None
        for X in corners:
            v = g.value(X, z)
            if best is not None and v >= best:
                worst = None
                break
            if worst is None or v > worst:
                worst = v
        if worst is not None and (best is None or worst < best):
            best, best_z = worst, z
    return best, best_z


def _point_rho(g: _Gauge, X, level: Fraction) -> int:
    best = None
    for z in product(*g.z_range_point(X, level)):
        v = g.value(X, z)
        if best is None or v < best:
            best = v
    return best


def covering_radius_interval(
    K: RationalPolytope,
    lattice: Lattice | None = None,
    tol=DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_boxes: int = DEFAULT_MAX_BOXES,
) -> CoveringInterval:
    """Certified interval [lower, upper] containing the covering radius of K.

    If the refinement budget (boxes or depth) runs out before the gap is at
    most ``tol`` the wider, still certified, interval is returned;
    ``converged`` tells the two cases apart.
    """
    tol = la.to_fraction(tol)
    if lattice is None:
        lattice = Lattice.standard(K.dim)
    d = lattice.rank
    if d == 0:
        raise ValueError("covering radius of a trivial lattice")
    if K.affine_dim != d:
        raise ValueError("body must be full-dimensional in the span of the lattice")
    red = Lattice(lattice.ambient_dim, tuple(lll_reduce(lattice.basis)))
    zverts = [red.coordinates(v) for v in K.vertices]
    if d > 1:
        # re-reduce in the metric of the inverse vertex covariance so the body
        # looks round in lattice coordinates; this keeps translate searches small
        avg = tuple(sum(v[i] for v in zverts) / len(zverts) for i in range(d))
        cov = [[sum((v[i] - avg[i]) * (v[j] - avg[j]) for v in zverts) for j in range(d)] for i in range(d)]
        unit = la.identity(d)
        coeffs = lll_reduce(unit, inner=la.inverse(cov))
        red = Lattice(lattice.ambient_dim, tuple(red.point(c) for c in coeffs))
        zverts = [red.coordinates(v) for v in K.vertices]
    if d == 1:
        length = max(v[0] for v in zverts) - min(v[0] for v in zverts)
        mu = 1 / length
        return CoveringInterval(mu, mu, tol, 0, None)
    center = tuple(sum(v[i] for v in zverts) / len(zverts) for i in range(d))
    P = from_points([la.sub(v, center) for v in zverts], d)
    T = 2**max_depth
    g = _Gauge(P, T)
    unit = g.den * T

    root_lo = (0,) * d
    root_hi = (T,) * d
    corners = list(product(*[(0, T)] * d))
    zero = (0,) * d
    level0 = Fraction(max(g.value(X, zero) for X in corners), unit)
    U0, z0 = _box_upper(g, root_lo, root_hi, level0, hint=zero)

    lower_num = 0
    witness_X = zero
    tol_units = tol * unit

    def center_of(lo_X, hi_X):
        return tuple((a + b) // 2 for a, b in zip(lo_X, hi_X))

    heap = [(-U0, root_lo, root_hi, z0)]
    evaluated = 0
    while heap:
        negU, lo_X, hi_X, zb = heap[0]
        U = -negU
        if U - lower_num <= tol_units:
            break
        if evaluated >= max_boxes:
            break
        edges = [b - a for a, b in zip(lo_X, hi_X)]
        longest = max(edges)
        if longest <= 1:
            break
        heapq.heappop(heap)
        axis = edges.index(longest)
        mid = lo_X[axis] + longest // 2
        level = Fraction(U, unit)
        for clo, chi in (
            (lo_X, hi_X[:axis] + (mid,) + hi_X[axis + 1 :]),
            (lo_X[:axis] + (mid,) + lo_X[axis + 1 :], hi_X),
        ):
            cu, cz = _box_upper(g, clo, chi, level, hint=zb)
            evaluated += 1
            c = center_of(clo, chi)
            r = _point_rho(g, c, Fraction(cu, unit))
            if r > lower_num:
                lower_num, witness_X = r, c
            heapq.heappush(heap, (-cu, clo, chi, cz))
    upper_num = -heap[0][0] if heap else lower_num
    lower = Fraction(lower_num, unit)
    upper = Fraction(upper_num, unit)
    wz = tuple(Fraction(x, T) + c for x, c in zip(witness_X, center))
    witness = red.point(wz)
    return CoveringInterval(lower, upper, tol, evaluated, witness)


def khinchine_sides(width: Fraction, interval: CoveringInterval) -> tuple[Fraction, Fraction]:
    """Certified range [w*lower, w*upper] of the flatness product w*mu."""
    return width * interval.lower, width * interval.upper
