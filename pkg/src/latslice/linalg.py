"""Exact linear algebra over the rationals and the integers.

Vectors are tuples, matrices are sequences of row tuples.  Nothing here
ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def to_fraction(value) -> Fraction:
    """Parse an int, a Fraction or a ``"p/q"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fvec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def neg(v: Sequence) -> tuple:
    return tuple(-a for a in v)


def transpose(m: Matrix) -> list[tuple]:
    return [tuple(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list[tuple]:
    bt = transpose(b)
    return [tuple(dot(row, col) for col in bt) for row in a]


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def common_denominator(values: Iterable) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of ``v`` to a primitive integer vector."""
    d = common_denominator(v)
    ints = [int(Fraction(a) * d) for a in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; zero rows are dropped."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Matrix, ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of ``a x = b``; None when inconsistent or underdetermined."""
    n = len(a[0])
    aug = [list(row) + [bb] for row, bb in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots or len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(x)


def inverse(a: Matrix) -> list[tuple[Fraction, ...]]:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [tuple(row[n:]) for row in red]


def det(a: Matrix):
    """Determinant; exact integer (Bareiss) for integer input, Fraction otherwise."""
    n = len(a)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in a for x in row):
        return _bareiss(a)
    m = [[Fraction(x) for x in row] for row in a]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def _bareiss(a: Matrix) -> int:
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def gram_det(basis: Matrix) -> Fraction:
    """det(B B^T) for basis rows B: the squared d-volume of their parallelepiped."""
    if not basis:
        return Fraction(1)
    return Fraction(det(matmul(basis, transpose(basis))))


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Greedy indices of a maximal linearly independent subsequence."""
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, v in enumerate(vectors):
        w = [Fraction(x) for x in v]
        for row, p in zip(echelon, pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        p = next((i for i, x in enumerate(w) if x != 0), None)
        if p is None:
            continue
        inv = 1 / w[p]
        echelon.append([x * inv for x in w])
        pivots.append(p)
        chosen.append(idx)
    return chosen


def orthogonal_projector(basis: Matrix) -> list[tuple[Fraction, ...]]:
    """Matrix of the orthogonal projection onto span(basis rows)."""
    g_inv = inverse(matmul(basis, transpose(basis)))
    return matmul(transpose(basis), matmul(g_inv, basis))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def floor_div(q) -> int:
    q = Fraction(q)
    return q.numerator // q.denominator


def ceil_div(q) -> int:
    q = Fraction(q)
    return -((-q.numerator) // q.denominator)
