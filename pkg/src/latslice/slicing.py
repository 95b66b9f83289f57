"""Constructive slicing: lattice planes of a body holding many lattice points.

Everything is relative to Z^n.  Recursion into a lattice hyperplane H
rewrites K intersect H in the coordinates of an integer basis of H, where
the lattice becomes Z^(n-1), runs there, and maps the answer back.

Every certificate stores both sides of the inequality it witnesses as exact
rationals; ``holds`` is a direct comparison, never a float.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg as la
from .constants import PI_HI, FlatnessTable
from .covering import CoveringInterval, covering_radius_interval
from .enumeration import (
    lattice_point_dimension,
    lattice_width,
    layer_decomposition,
    list_lattice_points,
    successive_minima,
)
from .lattice import Lattice, integer_points_of_flat, lattice_flat, projection_lattice
from .polytope import (
    Flat,
    RationalPolytope,
    centroid,
    difference_body,
    from_points,
    polar_body,
    section_with_flat,
    volume,
)

CENTRAL_MU_TOL = Fraction(1, 64)
CENTRAL_MU_BOXES = 1500


@dataclass(frozen=True)
class SliceCertificate:
    plane: Flat
    count_in_plane: int
    total_count: int
    volume: Fraction
    inequality_id: str
    branch_trace: tuple[str, ...]
    lhs: Fraction
    rhs: Fraction
    constant: Fraction | None = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def dim(self) -> int:
        return self.plane.dim

    def to_json(self) -> dict:
        out = {
            "inequality_id": self.inequality_id,
            "plane": self.plane.to_json(),
            "plane_dim": self.plane.dim,
            "count_in_plane": self.count_in_plane,
            "total_count": self.total_count,
            "volume": la.fmt(self.volume),
            "branch_trace": list(self.branch_trace),
            "lhs": la.fmt(self.lhs),
            "rhs": la.fmt(self.rhs),
            "holds": self.holds,
        }
        if self.constant is not None:
            out["constant"] = la.fmt(self.constant)
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return la.fmt(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


class OracleBudgetExceeded(RuntimeError):
    pass


# ------------------------------------------------------------ flat helpers


def lattice_points_on_flat(K: RationalPolytope, F: Flat) -> list[tuple[Fraction, ...]]:
    """Integer points of K that lie on F."""
    found = integer_points_of_flat(F)
    if found is None:
        return []
    x0, lat = found
    sub = Flat(tuple(Fraction(c) for c in x0), lat.basis)
    if sub.dim == 0:
        return [sub.base] if K.contains(sub.base) else []
    sec = section_with_flat(K, sub)
    return sorted(sub.point(t) for t in list_lattice_points(sec.body))


def count_on_flat(K: RationalPolytope, F: Flat) -> int:
    return len(lattice_points_on_flat(K, F))


def _hull_flat(points: Sequence[Sequence]) -> Flat:
    """Affine hull of integer points, as a flat with an integer lattice basis."""
    base = la.fvec(points[0])
    diffs = [la.sub(la.fvec(p), base) for p in points[1:]]
    idx = la.independent_subset(diffs)
    F = Flat(base, tuple(diffs[i] for i in idx))
    lf = lattice_flat(F)
    return lf if lf is not None else F


def _linear_hull(points: Sequence[Sequence], n: int) -> Flat:
    vecs = [la.fvec(p) for p in points if any(p)]
    idx = la.independent_subset(vecs)
    return Flat.central(tuple(vecs[i] for i in idx), n)


def _extend_flat(F: Flat, k: int) -> Flat:
    """Pad the basis with the first standard vectors that keep it independent."""
    basis = list(F.basis)
    n = F.ambient_dim
    for i in range(n):
        if len(basis) >= k:
            break
        e = tuple(Fraction(int(i == j)) for j in range(n))
        if la.rank(basis + [e]) == len(basis) + 1:
            basis.append(e)
    return Flat(F.base, tuple(basis))


def _pull_back(outer: Flat, inner: Flat) -> Flat:
    """Map a flat given in outer's coordinates into the ambient space."""
    zero = (Fraction(0),) * outer.ambient_dim

    def direction(c):
        out = zero
        for coef, b in zip(c, outer.basis):
            if coef:
                out = la.add(out, la.scale(coef, b))
        return out

    return Flat(outer.point(inner.base), tuple(direction(c) for c in inner.basis))


def _hyperplane_flat(y: Sequence, beta) -> Flat:
    F = Flat.hyperplane(y, beta)
    lf = lattice_flat(F)
    return lf if lf is not None else F


def _sign_normal(d: tuple[int, ...]) -> tuple[int, ...]:
    k = next(i for i, c in enumerate(d) if c != 0)
    return d if d[k] > 0 else tuple(-c for c in d)


# ------------------------------------------------------------ lines


def _best_line(points: Sequence[Sequence], n: int) -> tuple[Flat, int]:
    ipts = [tuple(int(c) for c in p) for p in points]
    if len(ipts) == 1:
        e1 = tuple(Fraction(int(j == 0)) for j in range(n))
        return Flat(la.fvec(ipts[0]), (e1,)), 1
    lines: dict[tuple, set] = defaultdict(set)
    for i in range(len(ipts)):
        p = ipts[i]
        for j in range(i + 1, len(ipts)):
            d = _sign_normal(la.primitive_integer(la.sub(ipts[j], p)))
            k = next(t for t, c in enumerate(d) if c != 0)
            shift = p[k] // d[k]
            rep = tuple(a - shift * b for a, b in zip(p, d))
            members = lines[(d, rep)]
            members.add(i)
            members.add(j)
    (d, rep), members = min(
        lines.items(),
        key=lambda kv: (-len(kv[1]), sum(c * c for c in kv[0][0]), tuple(-c for c in kv[0][0]), kv[0][1]),
    )
    base = ipts[min(members)]
    return Flat(la.fvec(base), (la.fvec(d),)), len(members)


def rabinowitz_line(K: RationalPolytope) -> SliceCertificate:
    """A lattice line with G(K cap line)^n >= G(K)."""
    pts = list_lattice_points(K)
    if not pts:
        raise ValueError("body contains no lattice points")
    n = K.dim
    line, count = _best_line(pts, n)
    G = len(pts)
    return SliceCertificate(
        plane=line,
        count_in_plane=count,
        total_count=G,
        volume=volume(K),
        inequality_id="rabinowitz",
        branch_trace=("rabinowitz-line",),
        lhs=Fraction(G),
        rhs=Fraction(count) ** n,
        constant=Fraction(1),
    )


# ------------------------------------------------------------ hyperplanes


def best_affine_hyperplane(K: RationalPolytope) -> SliceCertificate:
    """Richest layer along the lattice-width direction."""
    n = K.dim
    pts = list_lattice_points(K)
    if lattice_point_dimension(pts) < n:
        raise ValueError(
            "lattice points of the body do not span R^n; ask for a lower-dimensional plane"
        )
    w, y = lattice_width(K)
    layers = layer_decomposition(K, y=y, points=pts)
    H = _hyperplane_flat(y.vector, layers.best_beta)
    count = layers.best_count
    G = len(pts)
    return SliceCertificate(
        plane=H,
        count_in_plane=count,
        total_count=G,
        volume=volume(K),
        inequality_id="gw",
        branch_trace=("width-slice",),
        lhs=Fraction(G),
        rhs=2 * w * count,
        constant=2 * w,
        details={
            "width": w,
            "direction": y.vector,
            "beta": layers.best_beta,
            "layer_counts": layers.counts,
            "eq26_rhs": (w + 1) * count,
        },
    )


# ------------------------------------------------------------ affine k-slices


def affine_constant(n: int, table: FlatnessTable) -> Fraction:
    """Per-codimension factor c in G^(k/n) <= c^(n-k) G(K cap A).

    Thin bodies lose at most 2 w <= 2 (omega + n) per layer step; the
    projection branch loses (8/pi)(omega + n).  Both are below 3 (omega + n).
    """
    return 3 * (table(n) + n)


@dataclass
class _AffineResult:
    plane: Flat
    count: int
    trace: tuple[str, ...]
    info: list


def _projection_candidate(K: RationalPolytope, k: int, pts) -> tuple[Flat, int, dict]:
    n = K.dim
    prof = successive_minima(polar_body(difference_body(K)))
    ys = prof.witnesses[: n - k]
    groups: dict[tuple, list] = defaultdict(list)
    for x in pts:
        groups[tuple(la.dot(y, x) for y in ys)].append(x)
    key = min(groups, key=lambda g: (-len(groups[g]), g))
    members = groups[key]
    normal_space = la.nullspace(ys, n)
    A = Flat(members[0], tuple(normal_space))
    lf = lattice_flat(A)
    A = lf if lf is not None else A
    info = {
        "minima": prof.values[: n - k],
        "directions": ys,
        "fibers": len(groups),
        "fiber_levels": key,
    }
    return A, len(members), info


def _affine(K: RationalPolytope, k: int, table: FlatnessTable, pts=None) -> _AffineResult:
    n = K.dim
    if pts is None:
        pts = list_lattice_points(K)
    G = len(pts)
    if G == 0:
        raise ValueError("body contains no lattice points")
    m = lattice_point_dimension(pts)
    if m < n:
        V = _hull_flat(pts)
        if k >= m:
            return _AffineResult(_extend_flat(V, k), G, ("degenerate-span",), [{"level_dim": n, "span_dim": m}])
        sub = section_with_flat(K, V).body
        res = _affine(sub, k, table)
        return _AffineResult(
            _pull_back(V, res.plane), res.count, ("degenerate-span",) + res.trace, [{"level_dim": n, "span_dim": m}] + res.info
        )
    if k >= n:
        zero = (Fraction(0),) * n
        return _AffineResult(_extend_flat(Flat(zero, ()), n), G, (), [])
    if k == 1:
        line, count = _best_line(pts, n)
        return _AffineResult(line, count, ("rabinowitz-line",), [{"level_dim": n, "count": count}])

    w, y = lattice_width(K)
    threshold = table(n) + n
    preferred = "thin-body" if w <= threshold else "projection"

    layers = layer_decomposition(K, y=y, points=pts)
    H = _hyperplane_flat(y.vector, layers.best_beta)
    if k == n - 1:
        thin = _AffineResult(H, layers.best_count, ("thin-body",), [])
    else:
        sub = section_with_flat(K, H).body
        res = _affine(sub, k, table)
        thin = _AffineResult(_pull_back(H, res.plane), res.count, ("thin-body",) + res.trace, res.info)

    A, count, pinfo = _projection_candidate(K, k, pts)
    proj = _AffineResult(A, count, ("projection",), [])

    order = [thin, proj] if preferred == "thin-body" else [proj, thin]
    best = max(order, key=lambda r: r.count)  # first maximum wins ties
    level = {
        "level_dim": n,
        "width": w,
        "threshold": threshold,
        "selected_by_threshold": preferred,
        "thin_count": thin.count,
        "projection_count": proj.count,
        "projection": pinfo,
    }
    return _AffineResult(best.plane, best.count, best.trace, [level] + best.info)


def affine_slice(K: RationalPolytope, k: int, table: FlatnessTable | None = None) -> SliceCertificate:
    """k-dimensional affine lattice plane A with G(K)^(k/n) <= c^(n-k) G(K cap A)."""
    table = table or FlatnessTable()
    n = K.dim
    if not 1 <= k <= n - 1:
        raise ValueError("k must lie in 1..n-1")
    pts = list_lattice_points(K)
    if lattice_point_dimension(pts) < n:
        raise ValueError("lattice points of the body must span R^n")
    res = _affine(K, k, table, pts)
    G = len(pts)
    c = affine_constant(n, table)
    return SliceCertificate(
        plane=res.plane,
        count_in_plane=res.count,
        total_count=G,
        volume=volume(K),
        inequality_id="thm31",
        branch_trace=res.trace,
        lhs=Fraction(G) ** k,
        rhs=(c ** (n - k) * res.count) ** n,
        constant=c,
        details={"levels": res.info, "empirical_power_ratio": Fraction(G) ** k / Fraction(res.count) ** n},
    )


# ------------------------------------------------------------ centralization


def _mode_constants(mode: str, n: int, k: int, table: FlatnessTable) -> tuple[Fraction, Fraction, Fraction]:
    """(threshold, small-mu constant, width-branch constant) for the given mode."""
    om = table(k)
    if mode == "centered":
        threshold = Fraction(1, (k + 1) * (n + 2))
        small = Fraction(n + 1, k + 1) ** k * Fraction((k + 1) * (n + 2) + 1, k * (n + 2) + 1) ** k
        wide = 2 * om * (k + 1) * (n + 2)
    elif mode == "symmetric":
        threshold = Fraction(1, 3 * (k + 1))
        small = Fraction(3 * k + 4, 3 * k + 1) ** k
        wide = 2 * om * 3 * (k + 1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return threshold, small, wide


def _check_mode(K: RationalPolytope, mode: str):
    if not K.is_full_dimensional:
        raise ValueError("body must be full-dimensional")
    if mode == "symmetric":
        if not K.is_symmetric:
            raise ValueError("symmetric mode needs an origin-symmetric body")
    elif mode == "centered":
        if any(centroid(K)):
            raise ValueError("centered mode needs a body with centroid at the origin")
    else:
        raise ValueError(f"unknown mode {mode!r}")


def centralize(
    K: RationalPolytope,
    A: Flat,
    mode: str = "symmetric",
    table: FlatnessTable | None = None,
    mu_tol=CENTRAL_MU_TOL,
) -> SliceCertificate:
    """Central k-plane L with G(K cap A) <= C G(K cap L).

    Evaluates the parallel plane A - A, the linear hull of the lattice
    points of K cap A when they do not span A, and the span of the richest
    (k-1)-dimensional layer of K cap A; returns the best.
    """
    table = table or FlatnessTable()
    _check_mode(K, mode)
    n, k = K.dim, A.dim
    if not 1 <= k <= n - 1:
        raise ValueError("plane dimension must lie in 1..n-1")
    pts_A = lattice_points_on_flat(K, A)
    if not pts_A:
        raise ValueError("K cap A contains no lattice points")
    count_A = len(pts_A)
    threshold, c_small, c_wide = _mode_constants(mode, n, k, table)

    candidates: list[tuple[str, Flat, int]] = []
    L_a = A.direction()
    candidates.append(("parallel", L_a, count_on_flat(K, L_a)))

    span_dim = lattice_point_dimension(pts_A)
    trace: list[str] = []
    details: dict = {"count_A": count_A, "threshold": threshold, "span_dim": span_dim}
    if span_dim < k:
        L_b = _extend_flat(_linear_hull(pts_A, n), k)
        candidates.append(("linear-hull", L_b, count_on_flat(K, L_b)))
        trace.append("degenerate-span")
        constant = Fraction(1)
    else:
        A_lat = lattice_flat(A)
        if A_lat is None:
            A_lat = _hull_flat(pts_A)
        S = section_with_flat(K, A_lat).body
        interval = covering_radius_interval(S, tol=mu_tol, max_boxes=CENTRAL_MU_BOXES)
        details["mu_A"] = interval
        if interval.upper <= threshold:
            trace.append("threshold-small-mu")
        elif interval.lower > threshold:
            trace.append("width-slice")
        else:
            trace.extend(["threshold-small-mu", "width-slice"])
        constant = max(c_small, c_wide)
        w_A, y_A = lattice_width(S)
        layers = layer_decomposition(S, y=y_A)
        details["width_A"] = w_A
        top = max(layers.counts.values())
        tied = sorted((b for b, c in layers.counts.items() if c == top), key=lambda b: (abs(b), b))
        best_layer = None
        for beta in tied:
            if k == 1:
                t = Fraction(beta) / y_A.vector[0]
                layer = Flat((t,), ())
            else:
                layer = _hyperplane_flat(y_A.vector, beta)
            amb = _pull_back(A_lat, layer)
            if amb.contains((Fraction(0),) * n):
                continue  # A is linear; the parallel candidate already is A
            L_c = Flat.central(tuple(amb.basis) + (amb.base,), n)
            c = count_on_flat(K, L_c)
            if best_layer is None or c > best_layer[2]:
                best_layer = ("layer-span", L_c, c)
        if best_layer is not None:
            candidates.append(best_layer)

    name, L, count_L = max(candidates, key=lambda c: c[2])
    details["candidates"] = {c[0]: c[2] for c in candidates}
    details["chosen"] = name
    details["constant_small_mu"] = c_small
    details["constant_width"] = c_wide
    G = count_on_flat(K, Flat((Fraction(0),) * n, tuple(
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    )))
    return SliceCertificate(
        plane=L,
        count_in_plane=count_L,
        total_count=G,
        volume=volume(K),
        inequality_id="prop41",
        branch_trace=tuple(trace),
        lhs=Fraction(count_A),
        rhs=constant * count_L,
        constant=constant,
        details=details,
    )


def _auto_mode(K: RationalPolytope) -> str:
    if K.is_symmetric:
        return "symmetric"
    if K.is_full_dimensional and not any(centroid(K)):
        return "centered"
    raise ValueError("body must be origin-symmetric or centered")


def central_slice(K: RationalPolytope, k: int, table: FlatnessTable | None = None, mode: str | None = None) -> SliceCertificate:
    """Central k-plane L with G(K)^(k/n) <= c^(n-k) C G(K cap L)."""
    table = table or FlatnessTable()
    mode = mode or _auto_mode(K)
    n = K.dim
    aff = affine_slice(K, k, table)
    cen = centralize(K, aff.plane, mode, table)
    c = aff.constant
    total = c ** (n - k) * cen.constant
    return SliceCertificate(
        plane=cen.plane,
        count_in_plane=cen.count_in_plane,
        total_count=aff.total_count,
        volume=aff.volume,
        inequality_id="thm11",
        branch_trace=aff.branch_trace + ("centralize",) + cen.branch_trace,
        lhs=Fraction(aff.total_count) ** k,
        rhs=(total * cen.count_in_plane) ** n,
        constant=total,
        details={"mode": mode, "affine": aff.to_json(), "centralize": cen.to_json()},
    )


def koldobsky_constant_bound(n: int, c_prop: Fraction) -> Fraction:
    """d_n^n implied by the chain G <= 2 w G(K cap A) <= 2 w C G(K cap H)
    and w^n <= n! (8/pi)^n vol(K), with pi replaced by its upper bound."""
    return (2 * c_prop) ** n * factorial(n) * (8 / PI_HI) ** n


def empirical_c(ratio_power: Fraction, n: int, step: Fraction = Fraction(1, 1000)) -> Fraction:
    """Smallest multiple of ``step`` with c^n n^(2n) >= ratio_power."""
    target = ratio_power / Fraction(n) ** (2 * n)
    guess = Fraction(float(target) ** (1.0 / n)).limit_denominator(10**6)
    c = (guess // step) * step
    while c > 0 and (c - step) ** n >= target:
        c -= step
    while c**n < target:
        c += step
    return c


def koldobsky_certificate(K: RationalPolytope, table: FlatnessTable | None = None) -> SliceCertificate:
    """Central hyperplane H with an exact certificate of G(K)^n <= d^n G(K cap H)^n vol(K)."""
    table = table or FlatnessTable()
    if not K.is_symmetric:
        raise ValueError("body must be origin-symmetric")
    n = K.dim
    aff = best_affine_hyperplane(K)
    cen = centralize(K, aff.plane, "symmetric", table)
    G, count, vol = aff.total_count, cen.count_in_plane, aff.volume
    ratio_power = Fraction(G) ** n / (Fraction(count) ** n * vol)
    bound = koldobsky_constant_bound(n, cen.constant)
    c = empirical_c(ratio_power, n)
    return SliceCertificate(
        plane=cen.plane,
        count_in_plane=count,
        total_count=G,
        volume=vol,
        inequality_id="cor12",
        branch_trace=aff.branch_trace + ("centralize",) + cen.branch_trace,
        lhs=Fraction(G) ** n,
        rhs=bound * Fraction(count) ** n * vol,
        constant=bound,
        details={
            "ratio_power": ratio_power,
            "ratio_float": float(ratio_power) ** (1.0 / n),
            "empirical_c": c,
            "empirical_c_check": (c**n * Fraction(n) ** (2 * n) * Fraction(count) ** n * vol, Fraction(G) ** n),
            "affine_count": aff.count_in_plane,
            "affine_plane": aff.plane,
            "width": aff.details["width"],
        },
    )


# ------------------------------------------------------------ oracle


def _plucker_key(vectors: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Canonical key of span(vectors): primitive, sign-normalised k x k minors."""
    from itertools import combinations

    k = len(vectors)
    n = len(vectors[0])
    if k == 1:
        minors = tuple(vectors[0])
    elif k == 2:
        u, v = vectors
        minors = tuple(u[i] * v[j] - u[j] * v[i] for i in range(n) for j in range(i + 1, n))
    else:
        minors = tuple(
            la.det([[row[c] for c in cols] for row in vectors]) for cols in combinations(range(n), k)
        )
    if not any(minors):
        return None
    return _sign_normal(la.primitive_integer(minors))


def oracle_best_flat(
    K: RationalPolytope, k: int, central: bool = False, budget: int = 2_000_000
) -> SliceCertificate:
    """Exhaustive maximum of G(K cap F) over k-flats (central ones if asked).

    A maximizing flat can be taken to be spanned by lattice points it
    contains, so its direction space is spanned by k primitive differences
    of lattice points of K (by k lattice points when central).  Every such
    direction space is visited once and all its parallel translates are
    counted together by grouping points by their normal coordinates.
    """
    from itertools import combinations
    from math import comb

    n = K.dim
    if not 1 <= k <= n:
        raise ValueError("k must lie in 1..n")
    pts = [tuple(int(c) for c in p) for p in list_lattice_points(K)]
    G = len(pts)
    if G == 0:
        raise ValueError("body contains no lattice points")
    zero = (0,) * n
    nonzero = [p for p in pts if p != zero]
    if central:
        if not nonzero or la.rank(nonzero) <= k:
            F = _extend_flat(_linear_hull(nonzero, n), k) if nonzero else _extend_flat(Flat(la.fvec(zero), ()), k)
            return _oracle_cert(K, F, sum(1 for p in pts if F.contains(p)), G, central)
        gens = sorted({_sign_normal(la.primitive_integer(p)) for p in nonzero})
    else:
        if lattice_point_dimension(pts) <= k:
            F = _extend_flat(_hull_flat(pts), k)
            return _oracle_cert(K, F, G, G, central)
        gens = sorted({_sign_normal(la.primitive_integer(la.sub(q, p))) for p, q in combinations(pts, 2)})
    if comb(len(gens), k) > budget:
        raise OracleBudgetExceeded(f"{comb(len(gens), k)} candidate direction sets exceed the budget of {budget}")

    spaces: dict[tuple, tuple] = {}
    for combo in combinations(gens, k):
        key = _plucker_key(combo)
        if key is not None and key not in spaces:
            spaces[key] = combo

    best = None
    for key in sorted(spaces):
        combo = spaces[key]
        normals = [la.primitive_integer(v) for v in la.nullspace(combo, n)] if k < n else []
        groups: dict[tuple, list] = defaultdict(list)
        for p in pts:
            groups[tuple(la.dot(v, p) for v in normals)].append(p)
        if central:
            level = (0,) * len(normals)
            count = len(groups.get(level, []))
        else:
            level = min(groups, key=lambda g: (-len(groups[g]), g))
            count = len(groups[level])
        if best is None or count > best[0]:
            base = zero if central else groups[level][0]
            best = (count, base, combo)
    count, base, combo = best
    F = Flat(la.fvec(base), tuple(la.fvec(v) for v in combo))
    return _oracle_cert(K, F, count, G, central)


def _oracle_cert(K, F, count, G, central) -> SliceCertificate:
    return SliceCertificate(
        plane=F,
        count_in_plane=count,
        total_count=G,
        volume=volume(K),
        inequality_id="oracle",
        branch_trace=("oracle-central" if central else "oracle-affine",),
        lhs=Fraction(count),
        rhs=Fraction(G),
        details={"central": central},
    )


def verify_certificate(K: RationalPolytope, cert: SliceCertificate) -> bool:
    """Recount the plane independently and recheck the stored inequality."""
    recount = count_on_flat(K, cert.plane)
    return recount == cert.count_in_plane and cert.holds
