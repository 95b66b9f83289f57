"""Exact inequality checks over bodies and corpora.

Each check returns a report with one or more terms.  A term compares two
exact rationals.  Terms that depend on an irrational constant or on the
covering radius are three-valued: they pass when the stated inequality is
implied by the certified bounds, fail when its negation is, and are
undecided otherwise.  The bound used is recorded on the term.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Callable, Iterable, Sequence

from . import linalg as la
from .bodies import BodySpec
from .constants import PI_HI, PI_LO, FlatnessTable
from .covering import DEFAULT_TOL, CoveringInterval, covering_radius_interval
from .enumeration import (
    lattice_point_dimension,
    lattice_width,
    lattice_width_via_minima,
    layer_decomposition,
    list_lattice_points,
    successive_minima,
)
from .polytope import (
    Flat,
    RationalPolytope,
    centroid,
    difference_body,
    is_simplex,
    polar_body,
    section_with_flat,
    volume,
)
from .slicing import (
    OracleBudgetExceeded,
    affine_slice,
    best_affine_hyperplane,
    central_slice,
    centralize,
    count_on_flat,
    koldobsky_certificate,
    oracle_best_flat,
    rabinowitz_line,
)

PASS, FAIL, UNDECIDED, INAPPLICABLE = "pass", "fail", "undecided", "inapplicable"

CHECKS = (
    "minkowski2",
    "kuperberg",
    "rogersshephard",
    "sandwich",
    "gw",
    "width",
    "khinchine",
    "lemma32",
    "rabinowitz",
    "brunn",
    "grunbaum",
    "inclusion",
    "thm31",
    "prop41",
    "thm11",
    "cor12",
)


@dataclass
class Term:
    label: str
    lhs: Fraction
    rhs: Fraction
    verdict: str
    relation: str = "<="
    bound: str | None = None

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "lhs": la.fmt(self.lhs),
            "rhs": la.fmt(self.rhs),
            "relation": self.relation,
            "verdict": self.verdict,
        }
        if self.bound:
            out["bound"] = self.bound
        return out


def exact_term(label: str, lhs, rhs, relation: str = "<=") -> Term:
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    ok = {"<=": lhs <= rhs, "<": lhs < rhs, "==": lhs == rhs}[relation]
    return Term(label, lhs, rhs, PASS if ok else FAIL, relation)


def bracket_term(label: str, lhs, rhs_pass, rhs_fail, bound: str, relation: str = "<=") -> Term:
    """lhs <= true rhs, knowing only rhs_pass <= true rhs <= rhs_fail (or the
    analogous bracket on lhs folded into the two numbers)."""
    lhs = Fraction(lhs)
    if relation == "<":
        ok, bad = lhs < rhs_pass, lhs >= rhs_fail
    else:
        ok, bad = lhs <= rhs_pass, lhs > rhs_fail
    verdict = PASS if ok else FAIL if bad else UNDECIDED
    return Term(label, lhs, Fraction(rhs_pass), verdict, relation, bound)


@dataclass
class VerificationReport:
    body: str
    n: int
    check: str
    verdict: str
    terms: list[Term] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    timing: float = 0.0  # seconds; kept out of JSONL so reports are reproducible

    @property
    def deciding_term(self) -> Term | None:
        for wanted in (FAIL, UNDECIDED):
            for t in self.terms:
                if t.verdict == wanted:
                    return t
        decided = [t for t in self.terms if t.verdict == PASS]
        if not decided:
            return None
        # tightest passing term: largest lhs/rhs
        return max(decided, key=lambda t: (t.lhs / t.rhs) if t.rhs > 0 else Fraction(0))

    def to_json(self) -> dict:
        t = self.deciding_term
        return {
            "body": self.body,
            "n": self.n,
            "check": self.check,
            "verdict": self.verdict,
            "lhs": la.fmt(t.lhs) if t else None,
            "rhs": la.fmt(t.rhs) if t else None,
            "terms": [x.to_json() for x in self.terms],
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return la.fmt(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    return str(obj)


def combine(terms: Sequence[Term]) -> str:
    verdicts = {t.verdict for t in terms}
    if FAIL in verdicts:
        return FAIL
    if UNDECIDED in verdicts:
        return UNDECIDED
    if PASS in verdicts:
        return PASS
    return INAPPLICABLE


class Inapplicable(Exception):
    pass


# ------------------------------------------------------------ per-body cache


class BodyContext:
    def __init__(self, K: RationalPolytope, table: FlatnessTable, mu_tol: Fraction, oracle: bool | None = None):
        self.K = K
        self.n = K.dim
        self.table = table
        self.mu_tol = mu_tol
        self.use_oracle = self.n <= 3 if oracle is None else oracle

    @cached_property
    def points(self):
        return list_lattice_points(self.K)

    @cached_property
    def G(self) -> int:
        return len(self.points)

    @cached_property
    def volume(self) -> Fraction:
        return volume(self.K)

    @cached_property
    def full(self) -> bool:
        return self.K.is_full_dimensional

    @cached_property
    def symmetric(self) -> bool:
        return self.full and self.K.is_symmetric

    @cached_property
    def centered(self) -> bool:
        return self.full and not any(centroid(self.K))

    @cached_property
    def lattice_full(self) -> bool:
        return lattice_point_dimension(self.points) == self.n

    @cached_property
    def width(self):
        return lattice_width(self.K)

    @cached_property
    def mu(self) -> CoveringInterval:
        return covering_radius_interval(self.K, tol=self.mu_tol)

    @cached_property
    def dual_minima(self):
        return successive_minima(polar_body(difference_body(self.K)))

    def oracle(self, k: int, central: bool):
        key = ("oracle", k, central)
        cache = self.__dict__.setdefault("_oracle", {})
        if key not in cache:
            try:
                cache[key] = oracle_best_flat(self.K, k, central=central).count_in_plane
            except OracleBudgetExceeded:
                cache[key] = None
        return cache[key]

    def require(self, cond: bool, why: str):
        if not cond:
            raise Inapplicable(why)


def probe_flats(K: RationalPolytope) -> list[Flat]:
    """Deterministic k-flats (1 <= k < n) through points between the centroid
    and the first two vertices, in two direction families."""
    n = K.dim
    c = centroid(K)
    skew = [tuple(Fraction(int(j == i) + int(j == i + 1 and i % 2 == 0) - int(j == i + 1 and i % 2 == 1)) for j in range(n)) for i in range(n)]
    std = [tuple(Fraction(int(j == i)) for j in range(n)) for i in range(n)]
    flats = []
    for k in range(1, n):
        for dirs in (std[n - k:], skew[:k]):
            if la.rank(dirs) < k:
                continue
            for v in K.vertices[:2]:
                base = tuple((a + b) / 2 for a, b in zip(c, v))
                flats.append(Flat(base, tuple(dirs)))
    return flats


# ------------------------------------------------------------ checks


def _minkowski2(ctx: BodyContext):
    ctx.require(ctx.symmetric, "needs an origin-symmetric full-dimensional body")
    prof = successive_minima(ctx.K)
    prod = Fraction(1)
    for v in prof.values:
        prod *= v
    lhs = prod * ctx.volume
    n = ctx.n
    terms = [
        exact_term("prod(lambda_i) vol <= 2^n", lhs, 2**n),
        exact_term("2^n/n! <= prod(lambda_i) vol", Fraction(2**n, factorial(n)), lhs),
    ]
    return terms, {"minima": prof.values}


def _kuperberg(ctx: BodyContext):
    ctx.require(ctx.symmetric, "needs an origin-symmetric full-dimensional body")
    n = ctx.n
    polar_vol = volume(polar_body(ctx.K))
    prod = ctx.volume * polar_vol
    # pi^n/n! < prod: certain if it holds with pi_hi, refuted if it fails with pi_lo
    lo_side = PI_LO**n / factorial(n)
    hi_side = PI_HI**n / factorial(n)
    verdict = PASS if hi_side < prod else FAIL if lo_side >= prod else UNDECIDED
    term = Term("pi^n/n! < vol(K) vol(K*)", hi_side, prod, verdict, "<", "pi_hi")
    return [term], {"volume": ctx.volume, "polar_volume": polar_vol, "mahler_ratio": prod / (Fraction(4**n, factorial(n)))}


def _rogersshephard(ctx: BodyContext):
    ctx.require(ctx.full, "needs a full-dimensional body")
    n = ctx.n
    dvol = volume(difference_body(ctx.K))
    rhs = comb(2 * n, n) * ctx.volume
    simplex = is_simplex(ctx.K)
    equality = dvol == rhs
    terms = [
        exact_term("vol(K-K) <= C(2n,n) vol(K)", dvol, rhs),
        Term("equality iff simplex", Fraction(int(equality)), Fraction(int(simplex)), PASS if equality == simplex else FAIL, "=="),
    ]
    return terms, {"equality": equality, "simplex": simplex}


def _sandwich_terms(ctx: BodyContext, mu: CoveringInterval) -> list[Term]:
    n, vol, G = ctx.n, ctx.volume, Fraction(ctx.G)
    terms = [
        bracket_term("G <= (1+mu)^n vol", G, (1 + mu.lower) ** n * vol, (1 + mu.upper) ** n * vol, "pass: mu_lower, fail: mu_upper"),
    ]
    if mu.upper < 1:
        # (1-mu)^n vol <= G  <=>  -G <= -(1-mu)^n vol
        lo_pass = (1 - mu.lower) ** n * vol
        lo_fail = (1 - mu.upper) ** n * vol
        verdict = PASS if lo_pass <= G else FAIL if lo_fail > G else UNDECIDED
        terms.append(Term("(1-mu)^n vol <= G", lo_pass, G, verdict, "<=", "pass: mu_lower, fail: mu_upper"))
    else:
        terms.append(Term("(1-mu)^n vol <= G", Fraction(0), G, INAPPLICABLE, "<=", "needs mu_upper < 1"))
    return terms


def _sandwich(ctx: BodyContext):
    ctx.require(ctx.full, "needs a full-dimensional body")
    mu = ctx.mu
    terms = _sandwich_terms(ctx, mu)
    refined = False
    if combine(terms) == UNDECIDED:
        mu = covering_radius_interval(ctx.K, tol=ctx.mu_tol / 4)
        terms = _sandwich_terms(ctx, mu)
        refined = True
    return terms, {"mu": mu, "refined": refined, "lower_side_applicable": mu.upper < 1}


def _gw(ctx: BodyContext):
    ctx.require(ctx.full, "needs a full-dimensional body")
    w, y = ctx.width
    layers = layer_decomposition(ctx.K, y=y, points=ctx.points)
    best = layers.best_count
    terms = [exact_term("G <= (w+1) max layer", ctx.G, (w + 1) * best)]
    if ctx.lattice_full:
        terms.append(exact_term("G <= 2 w max layer", ctx.G, 2 * w * best))
    return terms, {"width": w, "direction": y.vector, "layers": layers.counts}


def _width(ctx: BodyContext):
    ctx.require(ctx.full, "needs a full-dimensional body")
    w, y = ctx.width
    via = lattice_width_via_minima(ctx.K)
    return [exact_term("width == lambda_1((K-K)*, Z^n)", w, via, "==")], {"direction": y.vector}


def _khinchine(ctx: BodyContext):
    ctx.require(ctx.full, "needs a full-dimensional body")
    w, _ = ctx.width
    mu = ctx.mu
    om = ctx.table(ctx.n)
    if w * mu.upper <= om:
        term = Term("w mu <= omega_ub(n)", w * mu.upper, om, PASS, "<=", "w mu_upper")
    else:
        verdict = FAIL if w * mu.lower > om else UNDECIDED
        term = Term("w mu <= omega_ub(n)", w * mu.lower, om, verdict, "<=", "w mu_lower")
    return [term], {"width": w, "mu": mu, "omega_ub": om}


def _lemma32(ctx: BodyContext):
    ctx.require(ctx.full, "needs a full-dimensional body")
    ctx.require(ctx.n >= 2, "needs n >= 2")
    n = ctx.n
    vals = ctx.dual_minima.values
    terms = []
    prod = Fraction(1)
    for m in range(1, n):
        prod *= vals[m - 1]
        lhs = prod**n
        rhs_pass = (factorial(n) * (8 / PI_HI) ** n * ctx.volume) ** m
        rhs_fail = (factorial(n) * (8 / PI_LO) ** n * ctx.volume) ** m
        terms.append(bracket_term(f"m={m}", lhs, rhs_pass, rhs_fail, "pass: pi_hi, fail: pi_lo"))
    return terms, {"dual_minima": vals}


def _rabinowitz(ctx: BodyContext):
    ctx.require(ctx.G >= 1, "needs a lattice point")
    cert = rabinowitz_line(ctx.K)
    return [exact_term("G <= G(line)^n", cert.lhs, cert.rhs)], {"line": cert.plane, "count": cert.count_in_plane}


def _section_ratio_terms(ctx: BodyContext, factor: Callable[[int], Fraction], label: str):
    terms = []
    for F in probe_flats(ctx.K):
        k = F.dim
        va = section_with_flat(ctx.K, F).volume()
        vc = section_with_flat(ctx.K, F.direction()).volume()
        # both sections use the same coordinates, so the ratio is the true one
        terms.append(exact_term(f"{label} k={k}", va, factor(k) * vc))
    return terms


def _brunn(ctx: BodyContext):
    ctx.require(ctx.symmetric, "needs an origin-symmetric full-dimensional body")
    return _section_ratio_terms(ctx, lambda k: Fraction(1), "vol(K cap A) <= vol(K cap (A-A))"), {}


def _grunbaum(ctx: BodyContext):
    ctx.require(ctx.centered, "needs a centered full-dimensional body")
    n = ctx.n
    return _section_ratio_terms(
        ctx, lambda k: Fraction(n + 1, k + 1) ** k, "vol(K cap A) <= ((n+1)/(k+1))^k vol(K cap (A-A))"
    ), {}


def _inclusion(ctx: BodyContext):
    ctx.require(ctx.centered, "needs a centered full-dimensional body")
    D = difference_body(ctx.K)
    worst = max(ctx.K.gauge(v) for v in D.vertices)
    return [exact_term("(K-K) subset (n+1) K", worst, ctx.n + 1)], {"max_gauge": worst}


def _oracle_term(ctx: BodyContext, label: str, count: int, k: int, central: bool) -> Term:
    best = ctx.oracle(k, central)
    if best is None:
        return Term(label, Fraction(count), Fraction(0), INAPPLICABLE, "<=", "oracle budget exceeded")
    return exact_term(label, count, best)


def _thm31(ctx: BodyContext):
    ctx.require(ctx.full and ctx.lattice_full, "lattice points must span R^n")
    ctx.require(ctx.n >= 2, "needs n >= 2")
    terms, details = [], {}
    for k in range(1, ctx.n):
        cert = affine_slice(ctx.K, k, ctx.table)
        recount = count_on_flat(ctx.K, cert.plane)
        terms.append(exact_term(f"k={k}: G^k <= (c^(n-k) G(K cap A))^n", cert.lhs, cert.rhs))
        terms.append(exact_term(f"k={k}: recount", recount, cert.count_in_plane, "=="))
        if ctx.use_oracle:
            terms.append(_oracle_term(ctx, f"k={k}: count <= oracle", cert.count_in_plane, k, False))
        details[f"k{k}"] = {"count": cert.count_in_plane, "trace": cert.branch_trace, "oracle": ctx.oracle(k, False) if ctx.use_oracle else None}
    return terms, details


def _mode(ctx: BodyContext) -> str:
    if ctx.symmetric:
        return "symmetric"
    if ctx.centered:
        return "centered"
    raise Inapplicable("needs an origin-symmetric or centered body")


def _prop41(ctx: BodyContext):
    ctx.require(ctx.full and ctx.lattice_full, "lattice points must span R^n")
    ctx.require(ctx.n >= 2, "needs n >= 2")
    mode = _mode(ctx)
    terms, details = [], {"mode": mode}
    for k in range(1, ctx.n):
        A = affine_slice(ctx.K, k, ctx.table).plane
        cert = centralize(ctx.K, A, mode, ctx.table)
        terms.append(exact_term(f"k={k}: G(K cap A) <= C G(K cap L)", cert.lhs, cert.rhs))
        terms.append(exact_term(f"k={k}: recount", count_on_flat(ctx.K, cert.plane), cert.count_in_plane, "=="))
        if ctx.symmetric:
            parallel = cert.details["candidates"]["parallel"]
            terms.append(exact_term(f"k={k}: G(K cap (A-A)) <= returned", parallel, cert.count_in_plane))
        details[f"k{k}"] = {"count_A": cert.lhs, "count": cert.count_in_plane, "trace": cert.branch_trace, "constant": cert.constant}
    return terms, details


def _thm11(ctx: BodyContext):
    ctx.require(ctx.full and ctx.lattice_full, "lattice points must span R^n")
    ctx.require(ctx.n >= 2, "needs n >= 2")
    mode = _mode(ctx)
    terms, details = [], {"mode": mode}
    for k in range(1, ctx.n):
        cert = central_slice(ctx.K, k, ctx.table, mode)
        terms.append(exact_term(f"k={k}: G^k <= (C' G(K cap L))^n", cert.lhs, cert.rhs))
        terms.append(exact_term(f"k={k}: recount", count_on_flat(ctx.K, cert.plane), cert.count_in_plane, "=="))
        if ctx.use_oracle:
            terms.append(_oracle_term(ctx, f"k={k}: count <= oracle", cert.count_in_plane, k, True))
        details[f"k{k}"] = {"count": cert.count_in_plane, "trace": cert.branch_trace, "oracle": ctx.oracle(k, True) if ctx.use_oracle else None}
    return terms, details


def _cor12(ctx: BodyContext):
    ctx.require(ctx.symmetric, "needs an origin-symmetric full-dimensional body")
    ctx.require(ctx.lattice_full, "lattice points must span R^n")
    ctx.require(ctx.n >= 2, "needs n >= 2")
    cert = koldobsky_certificate(ctx.K, ctx.table)
    terms = [
        exact_term("G^n <= d^n G(K cap H)^n vol", cert.lhs, cert.rhs),
        exact_term("recount", count_on_flat(ctx.K, cert.plane), cert.count_in_plane, "=="),
    ]
    c = cert.details["empirical_c"]
    lhs_c, rhs_c = cert.details["empirical_c_check"]
    terms.append(exact_term("G^n <= c^n n^(2n) G(K cap H)^n vol", rhs_c, lhs_c))
    if ctx.use_oracle:
        terms.append(_oracle_term(ctx, "count <= oracle", cert.count_in_plane, ctx.n - 1, True))
    details = {
        "count": cert.count_in_plane,
        "ratio_power": cert.details["ratio_power"],
        "ratio": cert.details["ratio_float"],
        "empirical_c": c,
        "trace": cert.branch_trace,
    }
    return terms, details


CHECK_FUNCS: dict[str, Callable] = {
    "minkowski2": _minkowski2,
    "kuperberg": _kuperberg,
    "rogersshephard": _rogersshephard,
    "sandwich": _sandwich,
    "gw": _gw,
    "width": _width,
    "khinchine": _khinchine,
    "lemma32": _lemma32,
    "rabinowitz": _rabinowitz,
    "brunn": _brunn,
    "grunbaum": _grunbaum,
    "inclusion": _inclusion,
    "thm31": _thm31,
    "prop41": _prop41,
    "thm11": _thm11,
    "cor12": _cor12,
}


def run_check(
    check_id: str,
    K: RationalPolytope,
    name: str = "body",
    table: FlatnessTable | None = None,
    mu_tol=DEFAULT_TOL,
    ctx: BodyContext | None = None,
) -> VerificationReport:
    if check_id not in CHECK_FUNCS:
        raise ValueError(f"unknown check {check_id!r}")
    if ctx is None:
        ctx = BodyContext(K, table or FlatnessTable(), la.to_fraction(mu_tol))
    start = time.perf_counter()
    try:
        terms, details = CHECK_FUNCS[check_id](ctx)
        verdict = combine(terms)
    except Inapplicable as exc:
        terms, details, verdict = [], {"reason": str(exc)}, INAPPLICABLE
    elapsed = time.perf_counter() - start
    return VerificationReport(name, K.dim, check_id, verdict, list(terms), details, elapsed)


# ------------------------------------------------------------ corpora


@dataclass(frozen=True)
class CorpusSpec:
    bodies: tuple[BodySpec, ...]
    seed: int = 0


def _run_body(args) -> list[dict]:
    spec, checks, table_json, mu_tol = args
    table = FlatnessTable.from_json(table_json)
    try:
        K = spec.build()
    except Exception as exc:  # quarantine: the body itself is broken
        return [_error_report(spec.name, 0, c, exc) for c in checks]
    ctx = BodyContext(K, table, mu_tol)
    out = []
    for c in checks:
        try:
            out.append(run_check(c, K, spec.name, ctx=ctx).to_json())
        except Exception as exc:
            out.append(_error_report(spec.name, K.dim, c, exc))
    return out


def _error_report(name: str, n: int, check: str, exc: Exception) -> dict:
    return {
        "body": name,
        "n": n,
        "check": check,
        "verdict": "error",
        "lhs": None,
        "rhs": None,
        "terms": [],
        "details": {"error": f"{type(exc).__name__}: {exc}"},
    }


def run_corpus(
    bodies: Iterable[BodySpec],
    checks: Sequence[str] = CHECKS,
    table: FlatnessTable | None = None,
    mu_tol=DEFAULT_TOL,
    jobs: int = 1,
) -> list[dict]:
    """Reports (as JSON dicts) for every body and check, sorted by (body, check)."""
    table = table or FlatnessTable()
    for c in checks:
        if c not in CHECK_FUNCS:
            raise ValueError(f"unknown check {c!r}")
    tasks = [(spec, tuple(checks), table.to_json(), la.to_fraction(mu_tol)) for spec in bodies]
    if jobs <= 1:
        chunks = [_run_body(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_body, tasks))
    reports = [r for chunk in chunks for r in chunk]
    reports.sort(key=lambda r: (r["body"], r["check"]))
    return reports


def to_jsonl(reports: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in reports)


def summarize(reports: Iterable[dict]) -> dict:
    """Verdict counts per check and the largest empirical d_n witness per n."""
    counts: dict[str, dict[str, int]] = {}
    dn: dict[int, dict] = {}
    for r in reports:
        counts.setdefault(r["check"], {}).setdefault(r["verdict"], 0)
        counts[r["check"]][r["verdict"]] += 1
        if r["check"] == "cor12" and r["verdict"] == PASS:
            c = la.to_fraction(r["details"]["empirical_c"])
            cur = dn.get(r["n"])
            if cur is None or c > la.to_fraction(cur["empirical_c"]):
                dn[r["n"]] = {"body": r["body"], "empirical_c": la.fmt(c), "ratio_power": r["details"]["ratio_power"]}
    return {"verdicts": counts, "max_empirical_d": {str(k): v for k, v in sorted(dn.items())}}
