"""Lattices given by rational bases, and the sublattice constructions on them.

Covolumes are carried squared (Gram determinants) so all identities are
rational equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .polytope import Flat


@dataclass(frozen=True)
class Lattice:
    """Lattice spanned by the rows of ``basis`` inside R^n."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        basis = tuple(la.fvec(b) for b in self.basis)
        object.__setattr__(self, "basis", basis)
        if basis and la.rank(basis) != len(basis):
            raise ValueError("lattice basis is not linearly independent")

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence], n: int | None = None) -> "Lattice":
        gens = [la.fvec(g) for g in gens]
        if n is None:
            n = len(gens[0])
        gens = [g for g in gens if any(gens_c != 0 for gens_c in g)]
        if not gens:
            return cls(n, ())
        den = la.common_denominator(c for g in gens for c in g)
        H, _ = hermite_normal_form([[int(c * den) for c in g] for g in gens])
        rows = [tuple(Fraction(x, den) for x in row) for row in H if any(row)]
        return cls(n, tuple(rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram_det(self) -> Fraction:
        return la.gram_det(self.basis)

    @cached_property
    def _coord_map(self):
        return la.matmul(la.inverse(la.matmul(self.basis, la.transpose(self.basis))), self.basis)

    def coordinates(self, x: Sequence) -> tuple[Fraction, ...]:
        """Coefficients z with x = sum z_i b_i; ValueError if x is outside span."""
        x = la.fvec(x)
        if not self.basis:
            if any(x):
                raise ValueError("point outside the span of the lattice")
            return ()
        z = la.matvec(self._coord_map, x)
        if self.point(z) != x:
            raise ValueError("point outside the span of the lattice")
        return z

    def point(self, z: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.ambient_dim
        for c, b in zip(z, self.basis):
            if c:
                for i in range(self.ambient_dim):
                    out[i] += c * b[i]
        return tuple(out)

    def contains(self, x: Sequence) -> bool:
        try:
            z = self.coordinates(x)
        except ValueError:
            return False
        return all(c.denominator == 1 for c in z)

    def in_span(self, x: Sequence) -> bool:
        try:
            self.coordinates(x)
        except ValueError:
            return False
        return True

    def same_lattice(self, other: "Lattice") -> bool:
        if self.rank != other.rank or self.ambient_dim != other.ambient_dim:
            return False
        return all(other.contains(b) for b in self.basis) and all(self.contains(b) for b in other.basis)

    def reduced(self) -> "Lattice":
        return Lattice(self.ambient_dim, tuple(lll_reduce(self.basis)))

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[la.fmt(c) for c in b] for b in self.basis],
            "gram_det": la.fmt(self.gram_det),
        }


@dataclass(frozen=True)
class PrimitiveDirection:
    vector: tuple[Fraction, ...]
    lattice: Lattice

    def to_json(self) -> dict:
        return {"vector": [la.fmt(c) for c in self.vector]}


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form: returns (H, U) with H = U M, U unimodular.

    H is upper echelon with positive pivots, entries above each pivot reduced
    into [0, pivot), zero rows last.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [list(map(int, row)) for row in M]
    U = la.identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a = H[r][c]
            g, x, y = la.xgcd(a, b)
            ag, bg = a // g, b // g
            hr, hi = H[r], H[i]
            H[r] = [x * p + y * q for p, q in zip(hr, hi)]
            H[i] = [-bg * p + ag * q for p, q in zip(hr, hi)]
            ur, ui = U[r], U[i]
            U[r] = [x * p + y * q for p, q in zip(ur, ui)]
            U[i] = [-bg * p + ag * q for p, q in zip(ur, ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [p - q * s for p, s in zip(H[i], H[r])]
                U[i] = [p - q * s for p, s in zip(U[i], U[r])]
        r += 1
    return H, U


def integer_kernel(M: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Lattice basis of ``{x in Z^n : M x = 0}``."""
    if not M:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    H, U = hermite_normal_form(la.transpose(M))
    return [tuple(U[i]) for i in range(n) if not any(H[i])]


def integer_solution(M: Sequence[Sequence[int]], c: Sequence[int], n: int) -> tuple[int, ...] | None:
    """One integer solution of ``M x = c``, or None."""
    if not M:
        return (0,) * n
    H, U = hermite_normal_form(la.transpose(M))
    m = len(M)
    y = [0] * n
    residual = list(c)
    for i in range(n):
        row = H[i]
        p = next((j for j, v in enumerate(row) if v != 0), None)
        if p is None:
            break
        if residual[p] % row[p]:
            return None
        y[i] = residual[p] // row[p]
        residual = [r - y[i] * v for r, v in zip(residual, row)]
    if any(residual[j] for j in range(m)):
        return None
    x = [sum(U[i][j] * y[i] for i in range(n)) for j in range(n)]
    return tuple(x)


def lll_reduce(
    basis: Sequence[Sequence], delta: Fraction = Fraction(3, 4), inner: Sequence[Sequence] | None = None
) -> list[tuple[Fraction, ...]]:
    """Exact LLL reduction of the rows of ``basis``.

    ``inner`` is an optional positive definite matrix M; reduction is then
    with respect to the inner product x^T M y instead of the standard one.
    """
    b = [list(la.fvec(v)) for v in basis]
    k = len(b)
    if k <= 1:
        return [tuple(v) for v in b]
    if inner is None:
        dot = la.dot
    else:
        M = [la.fvec(r) for r in inner]

        def dot(x, y):
            return la.dot(x, la.matvec(M, y))

    def gso(vecs):
        bstar, mu = [], [[Fraction(0)] * k for _ in range(k)]
        norms = []
        for i, v in enumerate(vecs):
            w = list(v)
            for j in range(i):
                mu[i][j] = dot(v, bstar[j]) / norms[j]
                w = [a - mu[i][j] * c for a, c in zip(w, bstar[j])]
            bstar.append(w)
            norms.append(dot(w, w))
        return bstar, mu, norms

    bstar, mu, norms = gso(b)
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [a - q * c for a, c in zip(b[i], b[j])]
                bstar, mu, norms = gso(b)
        if norms[i] >= (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            bstar, mu, norms = gso(b)
            i = max(i - 1, 1)
    return [tuple(v) for v in b]


def size_reduce(basis: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    return lll_reduce(basis, delta=Fraction(1, 4))


def dual_lattice(L: Lattice) -> Lattice:
    if not L.basis:
        return L
    g_inv = la.inverse(la.matmul(L.basis, la.transpose(L.basis)))
    return Lattice(L.ambient_dim, tuple(la.matmul(g_inv, L.basis)))


def _complement_normals(F: Flat) -> list[tuple[Fraction, ...]]:
    if not F.is_central:
        raise ValueError("flat must be central")
    return list(F.normals) if F.basis else [
        tuple(Fraction(int(i == j)) for j in range(F.ambient_dim)) for i in range(F.ambient_dim)
    ]


def intersection_lattice(L: Lattice, F: Flat) -> Lattice:
    """Basis of L intersected with the linear span of the central flat F."""
    normals = _complement_normals(F)
    if F.dim == F.ambient_dim:
        return L
    # z in Z^d with N B^T z = 0
    rows = [tuple(la.dot(nrm, b) for b in L.basis) for nrm in normals]
    den = la.common_denominator(c for r in rows for c in r)
    M = [[int(c * den) for c in r] for r in rows]
    kernel = integer_kernel(M, L.rank)
    if not kernel:
        return Lattice(L.ambient_dim, ())
    gens = [L.point(z) for z in kernel]
    return Lattice.from_generators(gens, L.ambient_dim)


def projection_lattice(L: Lattice, F: Flat) -> Lattice:
    """Orthogonal projection of L onto the span of the central flat F."""
    if not F.is_central:
        raise ValueError("flat must be central")
    if F.dim == 0:
        return Lattice(L.ambient_dim, ())
    proj = la.orthogonal_projector(F.basis)
    gens = [la.matvec(proj, b) for b in L.basis]
    return Lattice.from_generators(gens, L.ambient_dim)


def primitive_along(v: Sequence, L: Lattice) -> PrimitiveDirection:
    """Generator of span{v} intersected with L, pointing along v."""
    v = la.fvec(v)
    if not any(v):
        raise ValueError("zero vector has no primitive direction")
    if not L.in_span(v):
        raise ValueError("vector is not in the span of the lattice")
    line = intersection_lattice(L, Flat.central([v]))
    if line.rank == 0:
        raise ValueError("span{v} meets the lattice only in 0")
    g = line.basis[0]
    if la.dot(g, v) < 0:
        g = la.neg(g)
    return PrimitiveDirection(g, L)


def integer_points_of_flat(F: Flat) -> tuple[tuple[int, ...], Lattice] | None:
    """Affine lattice ``Z^n intersected with F`` as (point, lattice), or None if empty."""
    n = F.ambient_dim
    normals = list(F.normals) if F.dim < n else []
    if not normals:
        return (0,) * n, Lattice.standard(n)
    rows, rhs = [], []
    for nrm in normals:
        den = la.common_denominator(list(nrm) + [la.dot(nrm, F.base)])
        rows.append([int(c * den) for c in nrm])
        rhs.append(int(la.dot(nrm, F.base) * den))
    x0 = integer_solution(rows, rhs, n)
    if x0 is None:
        return None
    kernel = integer_kernel(rows, n)
    return x0, Lattice(n, tuple(tuple(Fraction(c) for c in z) for z in kernel))


def lattice_flat(F: Flat) -> Flat | None:
    """Rewrite F with an integer base point and a basis of its integer lattice.

    Returns None if F contains no integer point or if its integer points do
    not span it (F is not a lattice plane).
    """
    res = integer_points_of_flat(F)
    if res is None:
        return None
    x0, lat = res
    if lat.rank != F.dim:
        return None
    red = lll_reduce(lat.basis)
    return Flat(tuple(Fraction(c) for c in x0), tuple(red))
