"""Command-line interface: build, verify, search, project.

Every run writes exactly one ``manifest.json`` (command echo, versions,
seed, wall time, outcome) into the output directory.  Report files
contain no timing or machine-dependent data, so identical inputs and
seeds produce byte-identical reports regardless of ``--threads``.

Exit codes: 0 success / all checks pass; 1 at least one FAIL;
2 validation or parse error; 3 search guard tripped without --force.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import blocking, structure
from .census import line_census
from .constructions import full_line, subgeometry, trace_linear_set
from .fileio import (ParseError, point_set_to_text, read_point_set,
                     read_reduced_subspace, read_vectors, write_point_set)
from .gf import FieldError, make_field
from .pg import GeometryError, PointSet, build_geometry
from .reduction import ReductionError, SpreadContext
from .search import GuardExceeded, SearchConfig, enumerate_minimal, verify_catalog

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_GUARD = 3


def _versions():
    from importlib.metadata import PackageNotFoundError, version
    try:
        own = version("lingeo")
    except PackageNotFoundError:
        own = "unknown"
    return {"lingeo": own, "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3])}


def _write_manifest(out, args, started, outcome):
    man = {
        "command": " ".join(sys.argv[1:]),
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k != "func" and v is not None},
        "versions": _versions(),
        "seed": getattr(args, "seed", 0),
        "wall_time_s": round(time.monotonic() - started, 3),
        "outcome": outcome,
    }
    (out / "manifest.json").write_text(json.dumps(man, indent=2,
                                                  default=str) + "\n")


def _outdir(args):
    from pathlib import Path
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _field(args):
    modulus = "auto"
    if getattr(args, "modulus", None):
        modulus = tuple(int(c) for c in args.modulus.split(","))
    return make_field(args.p, args.t, modulus)


def _map(threads, fn, items):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# build


def cmd_build(args):
    started = time.monotonic()
    out = _outdir(args)
    fs = _field(args)
    g = build_geometry(args.n, fs)
    if args.what == "line":
        b = full_line(g)
        label = "line"
    elif args.what == "baer-subplane":
        if fs.t % 2 != 0:
            raise FieldError("a Baer subgeometry needs an even field degree")
        b = subgeometry(g, fs.t // 2, carrier_dim=args.carrier_dim)
        label = "baer-subplane"
    else:  # linear-set
        e = args.e
        if e is None or fs.t % e != 0:
            raise FieldError("--e must divide --t for a linear set")
        ctx = SpreadContext(g, e)
        if args.source == "from-vectors":
            vecs = read_vectors(args.vectors, fs, g.n + 1)
            b = ctx.linear_set_from_vectors(vecs)
        else:
            pi = read_reduced_subspace(args.subspace, ctx.reduced)
            b = ctx.linear_set_from_subspace(pi)
        label = f"linear-set-{args.source}"
    report = blocking.analyze(b, seed=args.seed)
    write_point_set(out / "points.txt", b, comments=[label])
    (out / "report.json").write_text(report.to_json() + "\n")
    (out / "field.json").write_text(fs.to_json() + "\n")
    print(f"{label}: {b.card} points in PG({g.n}, {fs.q}); "
          f"blocking={report.is_blocking} minimal={report.is_minimal} "
          f"small={report.is_small}")
    _write_manifest(out, args, started, {"size": b.card,
                                         "is_blocking": report.is_blocking})
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


_ALL_CHECKS = ("1modp", "sublines", "lemmas", "certify")


def cmd_verify(args):
    started = time.monotonic()
    out = _outdir(args)
    checks = [c.strip() for c in args.checks.split(",")] if args.checks \
        else list(_ALL_CHECKS)
    for c in checks:
        if c not in _ALL_CHECKS:
            raise ParseError(f"unknown check '{c}'")
    b = read_point_set(args.input)
    fs = b.geometry.fs
    census = line_census(b)
    report = blocking.analyze(b, seed=args.seed,
                              with_point_exponents=(b.geometry.n == 2),
                              census=census)
    entries = []

    def add(check, status, detail):
        entries.append({"check": check, "status": status, "detail": detail})
        print(f"{check}: {status} ({detail})")

    add("blocking", "PASS" if report.is_blocking else "FAIL",
        f"size {report.size}")
    add("minimal", "PASS" if report.is_minimal else "FAIL",
        "every point lies on a tangent hyperplane" if report.is_minimal
        else str(report.witnesses))
    e = args.e if args.e else report.exponent_e
    if "1modp" in checks:
        bad = [s for s in census.hist if (s - 1) % fs.p != 0]
        add("1modp", "PASS" if not bad else "FAIL",
            f"line sizes {sorted(census.hist)}")
    if "sublines" in checks:
        if not e or fs.t % e != 0:
            add("sublines", "INFORMATIONAL", "no usable subfield exponent")
        else:
            res = structure.check_sublines(b, e, census=census)
            add("sublines",
                "PASS" if not res["violations"] else "FAIL",
                f"{res['checked']} short secants checked, "
                f"{len(res['violations'])} violations")
    if "lemmas" in checks:
        lemma_entries = structure.run_lemma_suite(
            b, report, census=census, plane_secant_cap=args.plane_secant_cap)
        for le in lemma_entries:
            add(f"lemma:{le['check']}", le["status"],
                f"bound {le['bound']} measured {le['measured']}"
                + (f"; {le['note']}" if le.get("note") else ""))
        entries_lemmas = lemma_entries
    else:
        entries_lemmas = []
    cert_dict = None
    if "certify" in checks:
        try:
            cert = structure.certify_linearity(b, report, census=census)
            cert_dict = cert.to_json_dict()
            add("certify", "PASS" if cert.verified else "FAIL",
                f"xi_dim {cert.xi_dim}, h {report.h}")
        except structure.StructureError as exc:
            add("certify", "INFORMATIONAL", str(exc))
    doc = {"report": json.loads(report.to_json()), "checks": entries,
           "lemmas": entries_lemmas, "certificate": cert_dict}
    (out / "verify_report.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n")
    failed = any(x["status"] == "FAIL" for x in entries)
    _write_manifest(out, args, started,
                    {"failed_checks": sum(x["status"] == "FAIL"
                                          for x in entries)})
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# search


def cmd_search(args):
    started = time.monotonic()
    out = _outdir(args)
    fs = _field(args)
    g = build_geometry(args.n, fs)
    cfg = SearchConfig(g, max_size=args.max_size, seed=args.seed,
                       parallel_width=args.threads,
                       guard=10 ** 9 if args.force else 100)
    res = enumerate_minimal(cfg)
    ver = verify_catalog(res)
    blocks = []
    for k, b in enumerate(res.catalog):
        blocks.append(point_set_to_text(b, comments=[f"entry {k}"]))
    (out / "catalog.txt").write_text("\n".join(blocks))
    index = {
        "geometry": {"n": g.n, "p": fs.p, "t": fs.t,
                     "modulus": list(fs.modulus)},
        "max_size": cfg.max_size,
        "total": len(res.catalog),
        "nodes": res.nodes,
        "pruned": res.pruned,
        "entries": ver["entries"],
        "one_mod_p_alarms": ver["one_mod_p_alarms"],
    }
    (out / "catalog_index.json").write_text(
        json.dumps(index, indent=2, sort_keys=True) + "\n")
    print(f"search PG({g.n}, {fs.q}) max_size {cfg.max_size}: "
          f"{len(res.catalog)} minimal blocking sets "
          f"({res.nodes} nodes, {res.pruned} pruned)")
    _write_manifest(out, args, started, {"catalog_size": len(res.catalog)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# project


def cmd_project(args):
    started = time.monotonic()
    out = _outdir(args)
    b = read_point_set(args.input)
    g = b.geometry
    if args.center:
        qc = g.normalize(tuple(int(c) for c in args.center.split(",")))
    else:
        q_idx = blocking.find_tangent_only_point(b)
        if q_idx is None:
            raise GeometryError("no point off the set lies on tangents only; "
                                "give --center explicitly")
        qc = g.coords_of(q_idx)
    if args.hyperplane:
        dual = tuple(int(c) for c in args.hyperplane.split(","))
        h = g.hyperplane_subspace(dual)
    else:
        h = g.hyperplane_subspace((0,) * g.n + (1,))
        if h.contains_coords(qc):
            h = g.hyperplane_subspace((1,) + (0,) * g.n)
    before = blocking.analyze(b, seed=args.seed)
    img, small = blocking.project(b, qc, h)
    after = blocking.analyze(img, seed=args.seed)
    write_point_set(out / "image.txt", img,
                    comments=[f"projection from {list(qc)}"])
    (out / "report_before.json").write_text(before.to_json() + "\n")
    (out / "report_after.json").write_text(after.to_json() + "\n")
    print(f"projected {b.card} points of PG({g.n}, {g.fs.q}) from {list(qc)} "
          f"onto PG({small.n}, {g.fs.q}): image size {img.card}, "
          f"blocking={after.is_blocking} minimal={after.is_minimal} "
          f"small={after.is_small}")
    _write_manifest(out, args, started, {"image_size": img.card})
    return EXIT_OK


# ---------------------------------------------------------------------------


def _common(sub, need_geometry=True):
    if need_geometry:
        sub.add_argument("--p", type=int, required=True, help="characteristic")
        sub.add_argument("--t", type=int, required=True, help="field degree")
        sub.add_argument("--n", type=int, default=2,
                         help="projective dimension (default 2)")
        sub.add_argument("--modulus",
                         help="comma-separated modulus coefficients c0,..,ct")
    sub.add_argument("--e", type=int, help="subfield degree (divides t)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--out", required=True, help="output directory")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lingeo",
        description="blocking sets and linear sets in PG(n, q)")
    subs = ap.add_subparsers(dest="cmd", required=True)

    bp = subs.add_parser("build", help="construct a point set and report")
    bsub = bp.add_subparsers(dest="what", required=True)
    for what in ("line", "baer-subplane"):
        w = bsub.add_parser(what)
        _common(w)
        w.add_argument("--carrier-dim", type=int, default=None,
                       help="embed the subgeometry in a smaller subspace")
        w.set_defaults(func=cmd_build, what=what, source=None)
    lp = bsub.add_parser("linear-set")
    lp.add_argument("source", choices=["from-vectors", "from-subspace"])
    _common(lp)
    lp.add_argument("--vectors", help="vector file (one big vector per line)")
    lp.add_argument("--subspace", help="RED subspace file over GF(q0)")
    lp.set_defaults(func=cmd_build, what="linear-set", carrier_dim=None)

    vp = subs.add_parser("verify", help="run checks against a point-set file")
    vp.add_argument("input", help="point-set interchange file")
    _common(vp, need_geometry=False)
    vp.add_argument("--checks", help="comma list of "
                    "1modp,sublines,lemmas,certify (default all)")
    vp.add_argument("--plane-secant-cap", type=int, default=None)
    vp.set_defaults(func=cmd_verify)

    sp = subs.add_parser("search", help="enumerate small minimal blocking sets")
    _common(sp)
    sp.add_argument("--max-size", type=int, default=None)
    sp.add_argument("--force", action="store_true",
                    help="override the geometry-size guard")
    sp.set_defaults(func=cmd_search)

    pp = subs.add_parser("project", help="project a set from a point")
    pp.add_argument("input", help="point-set interchange file")
    _common(pp, need_geometry=False)
    pp.add_argument("--center", help="projection point codes c0,..,cn "
                    "(default: first tangent-only point)")
    pp.add_argument("--hyperplane", help="target hyperplane dual codes")
    pp.set_defaults(func=cmd_project)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, FieldError, GeometryError, ReductionError,
            blocking.BlockingError, structure.StructureError,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
