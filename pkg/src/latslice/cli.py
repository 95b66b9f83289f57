"""Command-line entry point.

Exit codes: 0 success, 1 a check or certificate failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

from . import linalg as la
from .bodies import GENERATORS, BodyFormatError, BodySpec, body_to_json, builtin_corpus, load_body
from .constants import FlatnessTable
from .covering import DEFAULT_TOL, covering_radius_interval
from .enumeration import lattice_width, lattice_width_via_minima, list_lattice_points, successive_minima
from .polytope import Flat
from .slicing import (
    OracleBudgetExceeded,
    affine_slice,
    best_affine_hyperplane,
    central_slice,
    centralize,
    koldobsky_certificate,
    oracle_best_flat,
    rabinowitz_line,
)
from .verify import CHECKS, run_corpus, summarize, to_jsonl


class UsageError(Exception):
    pass


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    _write(text, out)


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _body(args):
    if not args.body:
        raise UsageError("--body is required")
    return load_body(args.body)


def _table(args) -> FlatnessTable:
    return FlatnessTable.load(args.omega_table) if getattr(args, "omega_table", None) else FlatnessTable()


def _dims(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


# ------------------------------------------------------------ subcommands


def cmd_gen(args):
    params = {"n": args.n}
    g = args.generator
    if g == "cube":
        params["half_width"] = args.half_width or "1"
    elif g == "crosspolytope":
        params["scale"] = args.scale or "1"
    elif g == "simplex":
        params["scale"] = args.scale or "1"
        params["centered"] = args.centered
    elif g == "randomhull":
        params.update(points=args.points, box=args.box, seed=args.seed, symmetric=args.symmetric)
    transforms = []
    if args.twist_seed is not None:
        transforms.append(("twist", args.twist_seed))
    if args.recenter:
        transforms.append(("recenter", None))
    name = args.name or f"{g}{args.n}"
    spec = BodySpec(name, g, params, tuple(transforms))
    K = spec.build()
    _emit(body_to_json(K, name, spec.to_json()), args.out)
    return 0


def cmd_count(args):
    name, K = _body(args)
    pts = list_lattice_points(K)
    out = {"body": name, "count": len(pts)}
    if args.list:
        out["points"] = [[la.fmt(c) for c in p] for p in pts]
    _emit(out, args.out)
    return 0


def cmd_width(args):
    name, K = _body(args)
    w, y = lattice_width(K)
    via = lattice_width_via_minima(K)
    _emit({"body": name, "width": la.fmt(w), "direction": y.to_json()["vector"], "via_minima": la.fmt(via)}, args.out)
    return 0 if w == via else 1


def cmd_minima(args):
    name, K = _body(args)
    _emit({"body": name, **successive_minima(K).to_json()}, args.out)
    return 0


def cmd_mu(args):
    name, K = _body(args)
    iv = covering_radius_interval(K, tol=la.to_fraction(args.mu_tol))
    out = {"body": name, **iv.to_json()}
    if iv.witness is not None:
        out["witness"] = [la.fmt(c) for c in iv.witness]
    _emit(out, args.out)
    return 0


def cmd_slice(args):
    name, K = _body(args)
    table = _table(args)
    mode = args.mode
    if mode == "koldobsky":
        cert = koldobsky_certificate(K, table)
    elif mode == "hyperplane":
        cert = best_affine_hyperplane(K)
    elif mode == "line":
        cert = rabinowitz_line(K)
    else:
        if args.k is None:
            raise UsageError("--k is required for affine and central slices")
        cert = affine_slice(K, args.k, table) if mode == "affine" else central_slice(K, args.k, table)
    out = {"body": name, "mode": mode, "count": cert.count_in_plane, "certificate": cert.to_json()}
    if args.oracle:
        try:
            best = oracle_best_flat(K, cert.plane.dim, central=mode in ("central", "koldobsky"))
            out["oracle_count"] = best.count_in_plane
        except OracleBudgetExceeded as exc:
            out["oracle_count"] = None
            out["oracle_error"] = str(exc)
    _emit(out, args.out)
    return 0 if cert.holds else 1


def cmd_centralize(args):
    name, K = _body(args)
    if not args.plane:
        raise UsageError("--plane is required")
    try:
        plane = Flat.from_json(json.loads(Path(args.plane).read_text()))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed plane file: {exc}") from None
    cert = centralize(K, plane, args.mode or "symmetric", _table(args), la.to_fraction(args.mu_tol))
    _emit({"body": name, "count": cert.count_in_plane, "certificate": cert.to_json()}, args.out)
    return 0 if cert.holds else 1


def cmd_verify(args):
    checks = tuple(c for c in args.checks.split(",") if c) if args.checks else CHECKS
    for c in checks:
        if c not in CHECKS:
            raise UsageError(f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
    if args.body:
        name, K = load_body(args.body)
        from .verify import BodyContext, run_check

        ctx = BodyContext(K, _table(args), la.to_fraction(args.mu_tol))
        reports = [run_check(c, K, name, ctx=ctx).to_json() for c in checks]
    else:
        specs = builtin_corpus(args.seed, _dims(args.dims))
        reports = run_corpus(specs, checks, _table(args), la.to_fraction(args.mu_tol), args.jobs)
    _write(to_jsonl(reports), args.out)
    summary = summarize(reports)
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    bad = any(r["verdict"] in ("fail", "error") for r in reports)
    return 1 if bad else 0


REPORT_HEADER = [
    "n",
    "check",
    "reports",
    "pass",
    "fail",
    "undecided",
    "inapplicable",
    "error",
    "max_ratio",
    "mean_ratio",
]


def _ratio(r: dict) -> Fraction | None:
    if r["verdict"] not in ("pass", "fail", "undecided"):
        return None
    if r["check"] == "cor12":
        # G / (G(K cap H) vol^(1/n)), stored as its exact n-th power
        return la.to_fraction(r["details"]["ratio_power"])
    if r.get("lhs") is None or r.get("rhs") is None:
        return None
    lhs, rhs = la.to_fraction(r["lhs"]), la.to_fraction(r["rhs"])
    return lhs / rhs if rhs else None


def report_csv(lines) -> str:
    groups: dict[tuple[int, str], list[dict]] = defaultdict(list)
    for i, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            r = json.loads(line)
            key = (int(r["n"]), str(r["check"]))
            r["verdict"]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"line {i + 1}: not a verification report ({exc})") from None
        groups[key].append(r)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for (n, check), rows in sorted(groups.items()):
        verdicts = defaultdict(int)
        for r in rows:
            verdicts[r["verdict"]] += 1
        ratios = [x for x in (_ratio(r) for r in rows) if x is not None]
        if check == "cor12":
            # n-th roots are taken only here, for display
            ratios = [Fraction(float(x) ** (1.0 / n)) for x in ratios]
        mx = f"{float(max(ratios)):.6f}" if ratios else ""
        mean = f"{float(sum(ratios) / len(ratios)):.6f}" if ratios else ""
        w.writerow([n, check, len(rows)] + [verdicts[v] for v in ("pass", "fail", "undecided", "inapplicable", "error")] + [mx, mean])
    return buf.getvalue()


def cmd_report(args):
    src = args.input or args.body
    if not src:
        raise UsageError("give the JSONL file to summarise")
    text = sys.stdin.read() if src == "-" else Path(src).read_text()
    _write(report_csv(text.splitlines()), args.out)
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "count": cmd_count,
    "width": cmd_width,
    "minima": cmd_minima,
    "mu": cmd_mu,
    "slice": cmd_slice,
    "centralize": cmd_centralize,
    "verify": cmd_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latslice", description="Exact lattice-point slicing of rational polytopes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, body=True):
        if body:
            sp.add_argument("--body", help="body JSON file")
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    g = common(sub.add_parser("gen", help="generate a body"), body=False)
    g.add_argument("--generator", required=True, choices=sorted(GENERATORS))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--scale")
    g.add_argument("--half-width")
    g.add_argument("--centered", action="store_true")
    g.add_argument("--points", type=int, default=8)
    g.add_argument("--box", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--symmetric", action="store_true")
    g.add_argument("--twist-seed", type=int)
    g.add_argument("--recenter", action="store_true")
    g.add_argument("--name")

    c = common(sub.add_parser("count", help="count lattice points"))
    c.add_argument("--list", action="store_true", help="also list the points")
    common(sub.add_parser("width", help="lattice width and direction"))
    common(sub.add_parser("minima", help="successive minima of a symmetric body"))
    m = common(sub.add_parser("mu", help="covering radius interval"))
    m.add_argument("--mu-tol", default=la.fmt(DEFAULT_TOL))

    s = common(sub.add_parser("slice", help="find a lattice plane with many points"))
    s.add_argument("--k", type=int)
    s.add_argument("--mode", default="affine", choices=["affine", "central", "koldobsky", "hyperplane", "line"])
    s.add_argument("--omega-table")
    s.add_argument("--oracle", action="store_true", help="also report the exhaustive optimum")

    ce = common(sub.add_parser("centralize", help="central plane from an affine plane"))
    ce.add_argument("--plane", help="flat JSON with base_point and direction_basis")
    ce.add_argument("--mode", choices=["centered", "symmetric"])
    ce.add_argument("--omega-table")
    ce.add_argument("--mu-tol", default="1/64")

    v = common(sub.add_parser("verify", help="run inequality checks"))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--dims", default="2-4")
    v.add_argument("--checks", help="comma-separated check ids")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--omega-table")
    v.add_argument("--mu-tol", default=la.fmt(DEFAULT_TOL))

    r = common(sub.add_parser("report", help="CSV summary of verify output"))
    r.add_argument("input", nargs="?", help="JSONL file, or - for stdin")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, BodyFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
