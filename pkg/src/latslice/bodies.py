"""Body generators, a seeded PRNG, and body JSON I/O.

Random bodies come from SplitMix64 so a (generator, params, seed) triple
names the same body in any implementation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any

from . import linalg as la
from .polytope import RationalPolytope, centroid, from_inequalities, from_points

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014); 64-bit state, 64-bit output."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] by rejection sampling."""
        span = hi - lo + 1
        if span <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + r % span


class BodyFormatError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"body field '{field_name}': {message}")
        self.field = field_name


# ------------------------------------------------------------ generators


def cube(n: int, half_width=1) -> RationalPolytope:
    h = la.to_fraction(half_width)
    return from_points(list(product(*[(-h, h)] * n)), n)


def crosspolytope(n: int, scale=1) -> RationalPolytope:
    s = la.to_fraction(scale)
    pts = []
    for i in range(n):
        for sign in (1, -1):
            pts.append(tuple(sign * s if j == i else Fraction(0) for j in range(n)))
    return from_points(pts, n)


def simplex(n: int, scale=1, centered: bool = False) -> RationalPolytope:
    """scale * conv{0, e_1, ..., e_n}, optionally translated to centroid 0."""
    s = la.to_fraction(scale)
    pts = [tuple(Fraction(0) for _ in range(n))]
    pts += [tuple(s if j == i else Fraction(0) for j in range(n)) for i in range(n)]
    K = from_points(pts, n)
    return recenter(K) if centered else K


def skewprism(n: int) -> RationalPolytope:
    """conv(+-([0,1]^(n-1) x {1}))."""
    top = [tuple(Fraction(c) for c in p) + (Fraction(1),) for p in product((0, 1), repeat=n - 1)]
    return from_points(top + [la.neg(p) for p in top], n)


def randomhull(n: int, points: int = 8, box: int = 3, seed: int = 0, symmetric: bool = False) -> RationalPolytope:
    """Hull of seeded integer points in [-box, box]^n; redraws until full-dimensional."""
    rng = SplitMix64(seed)
    pts: list[tuple[int, ...]] = []
    while True:
        while len(pts) < points:
            pts.append(tuple(rng.randint(-box, box) for _ in range(n)))
        cloud = pts + [tuple(-c for c in p) for p in pts] if symmetric else pts
        K = from_points(cloud, n)
        if K.is_full_dimensional:
            return K
        points += 1


def random_unimodular(n: int, seed: int, steps: int | None = None) -> list[list[int]]:
    """Product of seeded elementary shears and sign flips; det = +-1."""
    rng = SplitMix64(seed)
    T = la.identity(n)
    for _ in range(steps if steps is not None else 2 * n):
        i = rng.randint(0, n - 1)
        j = rng.randint(0, n - 2)
        if j >= i:
            j += 1
        c = rng.randint(-1, 1) or 1
        T[i] = [a + c * b for a, b in zip(T[i], T[j])]
        if rng.randint(0, 3) == 0:
            T[i] = [-a for a in T[i]]
    return T


def unimodular_twist(K: RationalPolytope, seed: int) -> RationalPolytope:
    return K.linear_image(random_unimodular(K.dim, seed))


def recenter(K: RationalPolytope) -> RationalPolytope:
    """Translate K so its centroid is the origin."""
    return K.translate(la.neg(centroid(K)))


GENERATORS = {
    "cube": cube,
    "crosspolytope": crosspolytope,
    "simplex": simplex,
    "skewprism": skewprism,
    "randomhull": randomhull,
}


# ------------------------------------------------------------ specs and I/O


@dataclass(frozen=True)
class BodySpec:
    name: str
    generator: str
    params: dict = field(default_factory=dict)
    # applied in order: ("twist", seed) and/or ("recenter", None)
    transforms: tuple = ()

    def build(self) -> RationalPolytope:
        if self.generator not in GENERATORS:
            raise BodyFormatError("generator", f"unknown generator {self.generator!r}")
        try:
            K = GENERATORS[self.generator](**_coerce_params(self.params))
        except TypeError as exc:
            raise BodyFormatError("params", str(exc)) from None
        for kind, arg in self.transforms:
            if kind == "twist":
                K = unimodular_twist(K, arg)
            elif kind == "recenter":
                K = recenter(K)
            else:
                raise BodyFormatError("transforms", f"unknown transform {kind!r}")
        return K

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "generator": self.generator, "params": self.params}
        if self.transforms:
            out["transforms"] = [[k, a] for k, a in self.transforms]
        return out


def _coerce_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if k in ("n", "points", "box", "seed"):
            out[k] = int(v)
        elif k in ("half_width", "scale"):
            out[k] = la.to_fraction(v)
        elif k in ("centered", "symmetric"):
            out[k] = bool(v)
        else:
            out[k] = v
    return out


def body_to_json(K: RationalPolytope, name: str = "body", source: dict | None = None) -> dict:
    out: dict[str, Any] = {
        "name": name,
        "dim": K.dim,
        "vrep": [[la.fmt(c) for c in v] for v in K.vertices],
    }
    if source is not None:
        out["source"] = source
    return out


def _rational_vector(value, field_name: str, n: int | None) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise BodyFormatError(field_name, "expected a list of rationals")
    try:
        vec = tuple(la.to_fraction(c) for c in value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise BodyFormatError(field_name, f"cannot parse {value!r} as rationals") from None
    if n is not None and len(vec) != n:
        raise BodyFormatError(field_name, f"expected {n} coordinates, got {len(vec)}")
    return vec


def body_from_json(data: dict) -> tuple[str, RationalPolytope]:
    """Parse a body description; errors name the offending field."""
    if not isinstance(data, dict):
        raise BodyFormatError("<root>", "expected a JSON object")
    name = data.get("name", "body")
    if not isinstance(name, str):
        raise BodyFormatError("name", "expected a string")
    n = data.get("dim")
    if n is not None and (not isinstance(n, int) or n < 1):
        raise BodyFormatError("dim", "expected a positive integer")
    if "vrep" in data:
        rows = data["vrep"]
        if not isinstance(rows, list) or not rows:
            raise BodyFormatError("vrep", "expected a non-empty list of points")
        pts = [_rational_vector(r, f"vrep[{i}]", n or len(rows[0])) for i, r in enumerate(rows)]
        return name, from_points(pts, n or len(pts[0]))
    if "hrep" in data:
        h = data["hrep"]
        if not isinstance(h, dict):
            raise BodyFormatError("hrep", "expected an object with normals and offsets")
        if "normals" not in h:
            raise BodyFormatError("hrep.normals", "missing")
        if "offsets" not in h:
            raise BodyFormatError("hrep.offsets", "missing")
        normals = h["normals"]
        if not isinstance(normals, list) or not normals:
            raise BodyFormatError("hrep.normals", "expected a non-empty list")
        dim = n or len(normals[0])
        A = [_rational_vector(r, f"hrep.normals[{i}]", dim) for i, r in enumerate(normals)]
        b = _rational_vector(h["offsets"], "hrep.offsets", len(A))
        try:
            return name, from_inequalities(A, b)
        except ValueError as exc:
            raise BodyFormatError("hrep", str(exc)) from None
    if "generator" in data:
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise BodyFormatError("params", "expected an object")
        transforms = tuple((t[0], t[1]) for t in data.get("transforms", []))
        return name, BodySpec(name, data["generator"], params, transforms).build()
    raise BodyFormatError("<root>", "expected one of 'vrep', 'hrep' or 'generator'")


def load_body(path) -> tuple[str, RationalPolytope]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BodyFormatError("<file>", f"invalid JSON: {exc}") from None
    return body_from_json(data)


# ------------------------------------------------------------ builtin corpus


def builtin_corpus(seed: int = 0, dims=(2, 3, 4)) -> list[BodySpec]:
    """Named, reproducible bodies: families plus seeded random hulls and twists."""
    specs: list[BodySpec] = []

    def add(name, gen, params, transforms=()):
        specs.append(BodySpec(name, gen, params, tuple(transforms)))

    for n in dims:
        if n == 4:
            add("cube4-h1", "cube", {"n": 4, "half_width": "1"})
            add("cross4-s1", "crosspolytope", {"n": 4, "scale": "1"})
            add("cross4-s2", "crosspolytope", {"n": 4, "scale": "2"})
            add("simplex4-s1", "simplex", {"n": 4, "scale": "1"})
            add("simplex4-s5c", "simplex", {"n": 4, "scale": "5", "centered": True})
            add("skewprism4", "skewprism", {"n": 4})
            for i in range(3):
                s = seed * 1000 + 400 + i
                add(f"rand4-{i}", "randomhull", {"n": 4, "points": 7, "box": 1, "seed": s})
            for i in range(2):
                s = seed * 1000 + 450 + i
                add(f"symrand4-{i}", "randomhull", {"n": 4, "points": 4, "box": 1, "seed": s, "symmetric": True})
            add("cross4-twist", "crosspolytope", {"n": 4, "scale": "1"}, [("twist", seed * 1000 + 490)])
            continue
        for h in ("1", "3/2", "2"):
            add(f"cube{n}-h{h.replace('/', '_')}", "cube", {"n": n, "half_width": h})
        for s in ("1", "2", "3"):
            add(f"cross{n}-s{s}", "crosspolytope", {"n": n, "scale": s})
        for s in ("1", "2", "3"):
            add(f"simplex{n}-s{s}", "simplex", {"n": n, "scale": s})
        for s in ("2", "3", "4"):
            add(f"simplex{n}-s{s}c", "simplex", {"n": n, "scale": s, "centered": True})
        add(f"skewprism{n}", "skewprism", {"n": n})
        add(f"skewprism{n}-c", "skewprism", {"n": n}, [("recenter", None)])
        count = 10 if n == 2 else 8
        box = 3 if n == 2 else 2
        for i in range(count):
            s = seed * 1000 + 100 * n + i
            add(f"rand{n}-{i}", "randomhull", {"n": n, "points": 6, "box": box, "seed": s})
        for i in range(4):
            s = seed * 1000 + 100 * n + 50 + i
            add(f"symrand{n}-{i}", "randomhull", {"n": n, "points": 3, "box": box, "seed": s, "symmetric": True})
        for i in range(3):
            s = seed * 1000 + 100 * n + 70 + i
            add(f"centrand{n}-{i}", "randomhull", {"n": n, "points": 5, "box": box, "seed": s}, [("recenter", None)])
        for i, base in enumerate(("crosspolytope", "cube", "simplex")):
            params = {"n": n, "scale": "1"} if base != "cube" else {"n": n, "half_width": "1"}
            add(f"{base}{n}-twist", base, params, [("twist", seed * 1000 + 100 * n + 90 + i)])
    return specs
