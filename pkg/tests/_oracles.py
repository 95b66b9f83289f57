"""Independent reference computations used by the tests."""

from fractions import Fraction
from itertools import product
from math import atan2, ceil, floor

from hypothesis import strategies as st


def brute_points(K):
    """Integer points of K by scanning its bounding box."""
    lo, hi = K.bounding_box()
    ranges = [range(ceil(a), floor(b) + 1) for a, b in zip(lo, hi)]
    return sorted(p for p in product(*ranges) if K.contains(p))


def shoelace_area(vertices):
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    ring = sorted(vertices, key=lambda v: atan2(float(v[1] - cy), float(v[0] - cx)))
    twice = sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(ring, ring[1:] + ring[:1]))
    return abs(Fraction(twice)) / 2


def brute_width(K, radius):
    n = K.dim
    best = None
    for y in product(range(-radius, radius + 1), repeat=n):
        if not any(y):
            continue
        vals = [sum(a * b for a, b in zip(v, y)) for v in K.vertices]
        w = max(vals) - min(vals)
        if best is None or w < best:
            best = w
    return best


def brute_minima(K, radius):
    """Successive minima by scanning integer vectors in a cube."""
    from latslice.linalg import rank

    cands = []
    for x in product(range(-radius, radius + 1), repeat=K.dim):
        if any(x):
            cands.append((K.gauge(x), x))
    cands.sort()
    vals, chosen = [], []
    for g, x in cands:
        if rank(chosen + [x]) > len(chosen):
            chosen.append(x)
            vals.append(g)
    return vals


def brute_covering_lower_2d(K, steps=24, reach=4):
    """Lower bound on the covering radius: max over a grid of the unit cell
    of the gauge distance to Z^2, with the body moved to its vertex average."""
    c = tuple(sum(v[i] for v in K.vertices) / len(K.vertices) for i in range(2))
    rows = [(a, b - a[0] * c[0] - a[1] * c[1]) for a, b in K.facets]

    def gauge(x):
        return max((a[0] * x[0] + a[1] * x[1]) / off for a, off in rows)

    best = Fraction(0)
    for i in range(steps):
        for j in range(steps):
            p = (Fraction(i, steps), Fraction(j, steps))
            d = min(gauge((p[0] - u, p[1] - v)) for u in range(-reach, reach + 2) for v in range(-reach, reach + 2))
            best = max(best, d)
    return best


@st.composite
def integer_clouds(draw, n=2, box=3, min_points=None, max_points=7):
    """Integer point clouds whose hull is full-dimensional."""
    k = draw(st.integers(min_value=min_points or n + 1, max_value=max_points))
    coord = st.integers(min_value=-box, max_value=box)
    pts = draw(st.lists(st.tuples(*[coord] * n), min_size=k, max_size=k, unique=True))
    return pts


def unimodular_matrices(n):
    """Products of a few shears; determinant 1."""

    @st.composite
    def build(draw):
        T = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(draw(st.integers(min_value=1, max_value=2 * n))):
            i = draw(st.integers(min_value=0, max_value=n - 1))
            j = draw(st.integers(min_value=0, max_value=n - 2))
            if j >= i:
                j += 1
            c = draw(st.sampled_from([-1, 1]))
            T[i] = [a + c * b for a, b in zip(T[i], T[j])]
        return T

    return build()
