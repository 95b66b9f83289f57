"""Double-description conversion between V- and H-representations.

All work is done on integer data; rays are kept primitive so the numbers
stay small.  Adjacency uses the combinatorial test on zero sets, stored as
int bitmasks.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .linalg import common_denominator, independent_subset, inverse


class UnboundedError(ValueError):
    """The inequality system does not describe a bounded set."""


def _primitive(v):
    g = reduce(gcd, v, 0)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def extreme_rays(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : r.y >= 0 for r in rows}``.

    Raises UnboundedError if the rows do not have full column rank (the
    cone then contains a line).
    """
    rows = [tuple(r) for r in rows]
    d = len(rows[0])
    basis_idx = independent_subset(rows)
    if len(basis_idx) < d:
        raise UnboundedError("constraint matrix is rank deficient")
    inv = inverse([rows[i] for i in basis_idx])
    # columns of the inverse are the rays of the initial simplicial cone
    rays = []
    zeros = []
    full = 0
    for i in basis_idx:
        full |= 1 << i
    for j, i in enumerate(basis_idx):
        col = [inv[r][j] for r in range(d)]
        den = common_denominator(col)
        rays.append(_primitive(tuple(int(c * den) for c in col)))
        zeros.append(full & ~(1 << i))

    in_basis = set(basis_idx)
    for idx, row in enumerate(rows):
        if idx in in_basis:
            continue
        vals = [_dot(row, r) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        negs = [k for k, s in enumerate(vals) if s < 0]
        zer = [k for k, s in enumerate(vals) if s == 0]
        bit = 1 << idx
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_zeros = [zeros[k] for k in pos] + [zeros[k] | bit for k in zer]
        if negs and pos:
            for p in pos:
                zp = zeros[p]
                for q in negs:
                    common = zp & zeros[q]
                    if common.bit_count() < d - 2:
                        continue
                    adjacent = True
                    for w in range(len(rays)):
                        if w != p and w != q and (zeros[w] & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    sp, sq = vals[p], vals[q]
                    ray = tuple(sp * b - sq * a for a, b in zip(rays[p], rays[q]))
                    new_rays.append(_primitive(ray))
                    new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
        if not rays:
            break
    return rays


def _integer_row(values) -> tuple[int, ...]:
    den = common_denominator(values)
    return tuple(int(Fraction(v) * den) for v in values)


def facets_of_points(points: Sequence[Sequence[Fraction]]) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facet inequalities ``a.x <= b`` of conv(points); points must be full-dimensional.

    Normals come back as primitive integer vectors.
    """
    rows = [_integer_row((Fraction(1),) + tuple(-Fraction(c) for c in p)) for p in points]
    facets = []
    for ray in extreme_rays(rows):
        b, a = ray[0], ray[1:]
        g = reduce(gcd, a, 0)
        facets.append((tuple(x // g for x in a), Fraction(b, g)))
    return sorted(set(facets))


def vertices_of_inequalities(
    normals: Sequence[Sequence], offsets: Sequence
) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded polyhedron ``{x : a_i.x <= b_i}``; empty list if infeasible."""
    if not normals:
        raise UnboundedError("no inequalities")
    d = len(normals[0])
    rows = [(1,) + (0,) * d]
    for a, b in zip(normals, offsets):
        rows.append(_integer_row((Fraction(b),) + tuple(-Fraction(c) for c in a)))
    try:
        rays = extreme_rays(rows)
    except UnboundedError:
        raise UnboundedError("inequality system is unbounded (lineality space)") from None
    verts = set()
    for ray in rays:
        t = ray[0]
        if t == 0:
            raise UnboundedError("inequality system has a recession direction")
        verts.add(tuple(Fraction(x, t) for x in ray[1:]))
    return sorted(verts)
