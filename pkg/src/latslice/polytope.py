"""Rational polytopes with exact V- and H-representations.

A polytope keeps its vertices, its facet inequalities ``a.x <= b`` and the
equations ``a.x = b`` of its affine hull.  Lower-dimensional bodies carry an
intrinsic frame: a base point and the RREF basis of the affine hull's
direction space, so local coordinates are read off pivot columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from . import linalg as la
from .hull import UnboundedError, facets_of_points, vertices_of_inequalities

Point = tuple[Fraction, ...]
Inequality = tuple[tuple[Fraction, ...], Fraction]


class EmptyPolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Flat:
    """Affine subspace ``base + span(basis)``."""

    base: Point
    basis: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", la.fvec(self.base))
        object.__setattr__(self, "basis", tuple(la.fvec(b) for b in self.basis))
        if self.basis and la.rank(self.basis) != len(self.basis):
            raise ValueError("flat direction basis is not linearly independent")

    @classmethod
    def central(cls, basis: Sequence[Sequence], n: int | None = None) -> "Flat":
        if n is None:
            n = len(basis[0])
        return cls((Fraction(0),) * n, tuple(basis))

    @classmethod
    def hyperplane(cls, normal: Sequence, level) -> "Flat":
        """The hyperplane ``normal . x = level``."""
        normal = la.fvec(normal)
        k = next(i for i, c in enumerate(normal) if c != 0)
        base = [Fraction(0)] * len(normal)
        base[k] = Fraction(level) / normal[k]
        return cls(tuple(base), tuple(la.nullspace([normal], len(normal))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    @cached_property
    def kind(self) -> str:
        if all(c == 0 for c in self.base):
            return "central"
        if self.basis and la.rank(list(self.basis) + [self.base]) == len(self.basis):
            return "central"
        return "affine"

    @property
    def is_central(self) -> bool:
        return self.kind == "central"

    def point(self, t: Sequence) -> Point:
        x = list(self.base)
        for c, b in zip(t, self.basis):
            if c:
                x = [xi + c * bi for xi, bi in zip(x, b)]
        return tuple(x)

    def direction(self) -> "Flat":
        """The parallel central flat A - A."""
        return Flat((Fraction(0),) * self.ambient_dim, self.basis)

    def contains(self, x: Sequence) -> bool:
        diff = la.sub(la.fvec(x), self.base)
        if not self.basis:
            return all(c == 0 for c in diff)
        return la.rank(list(self.basis) + [diff]) == len(self.basis)

    @cached_property
    def normals(self) -> tuple[Point, ...]:
        """Basis of the orthogonal complement of the direction space."""
        if not self.basis:
            return tuple(
                tuple(Fraction(int(i == j)) for j in range(self.ambient_dim))
                for i in range(self.ambient_dim)
            )
        return tuple(la.nullspace(self.basis, self.ambient_dim))

    def key(self) -> tuple:
        """Canonical description, equal for equal flats."""
        red, _ = la.rref(self.basis) if self.basis else ([], [])
        eqs = []
        for nrm in la.rref(self.normals)[0] if self.normals else []:
            eqs.append((tuple(nrm), la.dot(nrm, self.base)))
        return (tuple(tuple(r) for r in red), tuple(eqs))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "base_point": [la.fmt(c) for c in self.base],
            "direction_basis": [[la.fmt(c) for c in b] for b in self.basis],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Flat":
        return cls(la.fvec(data["base_point"]), tuple(la.fvec(b) for b in data["direction_basis"]))


@dataclass(frozen=True, eq=False)
class RationalPolytope:
    dim: int
    vertices: tuple[Point, ...]
    facets: tuple[Inequality, ...]
    equations: tuple[Inequality, ...]
    affine_dim: int
    origin: Point = field(repr=False, default=())
    frame: tuple[Point, ...] = field(repr=False, default=())
    pivots: tuple[int, ...] = field(repr=False, default=())
    # facets in local frame coordinates, and vertex indices on each facet
    local_facets: tuple[Inequality, ...] = field(repr=False, default=())
    incidence: tuple[int, ...] = field(repr=False, default=())

    @property
    def is_empty(self) -> bool:
        return self.affine_dim < 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def __eq__(self, other):
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.dim == other.dim and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash((self.dim, frozenset(self.vertices)))

    def __repr__(self):
        return f"RationalPolytope(dim={self.dim}, affine_dim={self.affine_dim}, nverts={len(self.vertices)})"

    def local(self, x: Sequence) -> Point:
        """Frame coordinates of a point of the affine hull."""
        return tuple(Fraction(x[p]) - self.origin[p] for p in self.pivots)

    def contains(self, x: Sequence) -> bool:
        if self.is_empty:
            return False
        for a, b in self.equations:
            if la.dot(a, x) != b:
                return False
        return all(la.dot(a, x) <= b for a, b in self.facets)

    def gauge(self, x: Sequence) -> Fraction:
        """Minkowski functional; requires the origin in the relative interior."""
        return max((Fraction(la.dot(a, x)) / b for a, b in self.facets), default=Fraction(0))

    @cached_property
    def is_symmetric(self) -> bool:
        verts = set(self.vertices)
        return all(la.neg(v) in verts for v in verts)

    @cached_property
    def origin_in_relative_interior(self) -> bool:
        if self.is_empty:
            return False
        zero = (Fraction(0),) * self.dim
        if any(b != 0 for _, b in self.equations):
            return False
        return all(b > 0 for _, b in self.facets) and self.contains(zero)

    def bounding_box(self) -> tuple[Point, Point]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    def translate(self, t: Sequence) -> "RationalPolytope":
        t = la.fvec(t)
        return from_points([la.add(v, t) for v in self.vertices], self.dim)

    def dilate(self, c) -> "RationalPolytope":
        c = Fraction(c)
        return from_points([la.scale(c, v) for v in self.vertices], self.dim)

    def linear_image(self, matrix: Sequence[Sequence]) -> "RationalPolytope":
        return from_points([la.matvec(matrix, v) for v in self.vertices], len(matrix))

    def hrep(self) -> tuple[list[Point], list[Fraction]]:
        """All constraints as inequalities (equations doubled)."""
        normals, offsets = [], []
        for a, b in self.facets:
            normals.append(a)
            offsets.append(b)
        for a, b in self.equations:
            normals.extend([a, la.neg(a)])
            offsets.extend([b, -b])
        return normals, offsets


def empty_polytope(n: int) -> RationalPolytope:
    return RationalPolytope(n, (), (), (), -1)


def from_points(points: Iterable[Sequence], n: int | None = None) -> RationalPolytope:
    """Convex hull of a finite point set."""
    pts = sorted({la.fvec(p) for p in points})
    if not pts:
        if n is None:
            raise EmptyPolytopeError("empty point set")
        return empty_polytope(n)
    n = len(pts[0])
    origin = pts[0]
    diffs = [la.sub(p, origin) for p in pts[1:]]
    frame, pivots = la.rref(diffs) if diffs else ([], [])
    m = len(frame)
    frame = tuple(tuple(r) for r in frame)
    if m == 0:
        eqs = tuple(
            (tuple(Fraction(int(i == j)) for j in range(n)), origin[i]) for i in range(n)
        )
        return RationalPolytope(n, (origin,), (), eqs, 0, origin, (), (), (), ())
    local = [tuple(p[c] - origin[c] for c in pivots) for p in pts]
    if m == 1:
        vals = [t[0] for t in local]
        lo, hi = min(vals), max(vals)
        local_facets = [((Fraction(-1),), -lo), ((Fraction(1),), hi)]
    else:
        local_facets = [(la.fvec(a), b) for a, b in facets_of_points(local)]
    # vertices: points whose tight facets have full rank m
    vert_idx = []
    for i, t in enumerate(local):
        tight = [a for a, b in local_facets if la.dot(a, t) == b]
        if len(tight) >= m and la.rank(tight) == m:
            vert_idx.append(i)
    vertices = tuple(pts[i] for i in vert_idx)
    lverts = [local[i] for i in vert_idx]
    incidence = []
    for a, b in local_facets:
        mask = 0
        for j, t in enumerate(lverts):
            if la.dot(a, t) == b:
                mask |= 1 << j
        incidence.append(mask)
    facets = []
    for a, b in local_facets:
        normal = [Fraction(0)] * n
        for coef, c in zip(a, pivots):
            normal[c] = coef
        offset = b + sum((coef * origin[c] for coef, c in zip(a, pivots)), Fraction(0))
        prim = la.primitive_integer(normal)
        k = next(i for i, c in enumerate(normal) if c != 0)
        factor = Fraction(prim[k]) / normal[k]
        facets.append((tuple(Fraction(x) for x in prim), offset * factor))
    equations = []
    if m < n:
        for nrm in la.nullspace(frame, n):
            prim = tuple(Fraction(x) for x in la.primitive_integer(nrm))
            equations.append((prim, la.dot(prim, origin)))
    return RationalPolytope(
        n,
        vertices,
        tuple(facets),
        tuple(equations),
        m,
        origin,
        frame,
        tuple(pivots),
        tuple(local_facets),
        tuple(incidence),
    )


def from_inequalities(
    normals: Sequence[Sequence],
    offsets: Sequence,
    equations: Sequence[tuple[Sequence, object]] = (),
    *,
    allow_empty: bool = False,
) -> RationalPolytope:
    """Polytope ``{x : a_i.x <= b_i, e_j.x = c_j}``."""
    normals = [la.fvec(a) for a in normals]
    offsets = [la.to_fraction(b) for b in offsets]
    n = len(normals[0]) if normals else len(equations[0][0])
    for e, c in equations:
        e = la.fvec(e)
        c = la.to_fraction(c)
        normals.extend([e, la.neg(e)])
        offsets.extend([c, -c])
    verts = vertices_of_inequalities(normals, offsets)
    if not verts:
        if allow_empty:
            return empty_polytope(n)
        raise EmptyPolytopeError("inequality system is infeasible")
    return from_points(verts, n)


# ---------------------------------------------------------------- volumes


def _affine_rank(points: Sequence[Point]) -> int:
    if len(points) <= 1:
        return len(points) - 1
    base = points[0]
    return la.rank([la.sub(p, base) for p in points[1:]])


def triangulation(K: RationalPolytope) -> list[tuple[int, ...]]:
    """Pulling triangulation; simplices as tuples of vertex indices."""
    if K.is_empty:
        return []
    m = K.affine_dim
    if m == 0:
        return [(0,)]
    lverts = [K.local(v) for v in K.vertices]
    dim_cache: dict[int, int] = {}

    def mask_dim(mask: int) -> int:
        if mask not in dim_cache:
            dim_cache[mask] = _affine_rank([lverts[j] for j in _bits(mask)])
        return dim_cache[mask]

    tri_cache: dict[int, list[tuple[int, ...]]] = {}

    def tri(mask: int, f: int) -> list[tuple[int, ...]]:
        if mask in tri_cache:
            return tri_cache[mask]
        idx = list(_bits(mask))
        if f == 0:
            out = [(idx[0],)]
        elif len(idx) == f + 1:
            out = [tuple(idx)]
        else:
            apex = idx[0]
            subfaces = set()
            for fmask in K.incidence:
                sub = mask & fmask
                if sub != mask and not (sub >> apex) & 1 and sub.bit_count() >= f and mask_dim(sub) == f - 1:
                    subfaces.add(sub)
            # keep maximal ones only (a facet of the face, not a lower face)
            out = []
            for sub in sorted(subfaces):
                for s in tri(sub, f - 1):
                    out.append(s + (apex,))
        tri_cache[mask] = out
        return out

    full = (1 << len(lverts)) - 1
    if m == 1:
        return [tuple(range(len(lverts)))]
    return tri(full, m)


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _simplex_volumes(K: RationalPolytope) -> list[tuple[tuple[int, ...], Fraction]]:
    m = K.affine_dim
    lverts = [K.local(v) for v in K.vertices]
    den = la.common_denominator(c for v in lverts for c in v)
    ints = [tuple(int(c * den) for c in v) for v in lverts]
    scale = Fraction(1, factorial(m) * den**m)
    out = []
    for simplex in triangulation(K):
        apex = ints[simplex[0]]
        rows = [tuple(a - b for a, b in zip(ints[j], apex)) for j in simplex[1:]]
        out.append((simplex, abs(la.det(rows)) * scale))
    return out


def local_volume(K: RationalPolytope) -> Fraction:
    """m-volume of K measured in its own frame coordinates (m = affine_dim)."""
    if K.is_empty:
        return Fraction(0)
    if K.affine_dim == 0:
        return Fraction(1)
    return sum((v for _, v in _simplex_volumes(K)), Fraction(0))


def volume(K: RationalPolytope) -> Fraction:
    """n-dimensional Lebesgue measure; 0 unless full-dimensional."""
    if not K.is_full_dimensional:
        return Fraction(0)
    return local_volume(K)


def squared_relative_volume(K: RationalPolytope) -> Fraction:
    """Square of the intrinsic affine_dim-volume (Gram determinant correction)."""
    if K.is_empty:
        return Fraction(0)
    return local_volume(K) ** 2 * la.gram_det(K.frame)


def volume_in_basis(K: RationalPolytope, basis: Sequence[Sequence]) -> Fraction:
    """Volume of K in the coordinates of ``basis`` (K must span the same space)."""
    if K.is_empty or K.affine_dim < len(basis):
        return Fraction(0)
    # frame rows expressed in basis coordinates
    gram = la.matmul(basis, la.transpose(basis))
    g_inv = la.inverse(gram)
    coords = [la.matvec(g_inv, la.matvec(basis, f)) for f in K.frame]
    return local_volume(K) * abs(Fraction(la.det(coords)))


def centroid(K: RationalPolytope) -> Point:
    if K.is_empty:
        raise EmptyPolytopeError("centroid of empty body")
    if K.affine_dim == 0:
        return K.vertices[0]
    total = Fraction(0)
    acc = [Fraction(0)] * K.dim
    for simplex, vol in _simplex_volumes(K):
        total += vol
        k = len(simplex)
        for j in simplex:
            v = K.vertices[j]
            for i in range(K.dim):
                acc[i] += vol * v[i] / k
    return tuple(a / total for a in acc)


# -------------------------------------------------------------- operations


@dataclass(frozen=True, eq=False)
class Section:
    """K intersected with a flat, in the flat's own coordinates."""

    body: RationalPolytope
    flat: Flat

    @property
    def is_empty(self) -> bool:
        return self.body.is_empty

    def ambient(self) -> RationalPolytope:
        if self.is_empty:
            return empty_polytope(self.flat.ambient_dim)
        return from_points([self.flat.point(t) for t in self.body.vertices], self.flat.ambient_dim)

    def volume(self) -> Fraction:
        """k-volume in flat coordinates (0 if the section is lower-dimensional)."""
        return volume(self.body)


def section_with_flat(K: RationalPolytope, F: Flat) -> Section:
    k = F.dim
    if K.is_empty:
        return Section(empty_polytope(k), F)
    if k == 0:
        body = from_points([()], 0) if K.contains(F.base) else empty_polytope(0)
        return Section(body, F)
    normals, offsets = K.hrep()
    loc_n, loc_b = [], []
    for a, b in zip(normals, offsets):
        loc_n.append(tuple(la.dot(a, v) for v in F.basis))
        loc_b.append(b - la.dot(a, F.base))
    body = from_inequalities(loc_n, loc_b, allow_empty=True)
    return Section(body, F)


def difference_body(K: RationalPolytope) -> RationalPolytope:
    if K.is_empty:
        raise EmptyPolytopeError("difference body of empty body")
    V = K.vertices
    return from_points([la.sub(v, w) for v in V for w in V], K.dim)


def polar_body(K: RationalPolytope) -> RationalPolytope:
    """Polar within the linear span of K; requires 0 in the relative interior."""
    if not K.origin_in_relative_interior:
        raise ValueError("origin is not in the (relative) interior; polar is unbounded")
    if K.is_full_dimensional:
        return from_points([la.scale(1 / b, a) for a, b in K.facets], K.dim)
    proj = la.orthogonal_projector(K.frame)
    return from_points([la.scale(1 / b, la.matvec(proj, a)) for a, b in K.facets], K.dim)


def is_simplex(K: RationalPolytope) -> bool:
    return not K.is_empty and len(K.vertices) == K.affine_dim + 1


def contains_polytope(outer: RationalPolytope, inner: RationalPolytope) -> bool:
    return all(outer.contains(v) for v in inner.vertices)


__all__ = [
    "EmptyPolytopeError",
    "Flat",
    "RationalPolytope",
    "Section",
    "UnboundedError",
    "centroid",
    "contains_polytope",
    "difference_body",
    "empty_polytope",
    "from_inequalities",
    "from_points",
    "is_simplex",
    "local_volume",
    "polar_body",
    "section_with_flat",
    "squared_relative_volume",
    "triangulation",
    "volume",
    "volume_in_basis",
]
