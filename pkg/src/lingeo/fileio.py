"""File formats: point-set interchange and reduced-subspace records.

Point-set file::

    # optional comments
    PG n p t c0,c1,...,ct
    a0 a1 ... an          <- one point per line, integer element codes

Reduced-subspace file::

    RED m q0
    b0 b1 ... bm          <- one basis row per line, codes over GF(q0)

Both formats are plain text, deterministic, and independent of the
producing machine.
"""

from __future__ import annotations

import numpy as np

from .gf import make_field
from .pg import Geometry, PointSet, Subspace, build_geometry


class ParseError(Exception):
    pass


def _modulus_str(fs) -> str:
    return ",".join(str(c) for c in fs.modulus)


def write_point_set(path, b: PointSet, comments=()):
    g = b.geometry
    lines = [f"# {c}" for c in comments]
    lines.append(f"PG {g.n} {g.fs.p} {g.fs.t} {_modulus_str(g.fs)}")
    for c in b.coords():
        lines.append(" ".join(str(int(x)) for x in c))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def point_set_to_text(b: PointSet, comments=()) -> str:
    g = b.geometry
    lines = [f"# {c}" for c in comments]
    lines.append(f"PG {g.n} {g.fs.p} {g.fs.t} {_modulus_str(g.fs)}")
    for c in b.coords():
        lines.append(" ".join(str(int(x)) for x in c))
    return "\n".join(lines) + "\n"


def read_point_set(path) -> PointSet:
    with open(path) as f:
        text = f.read()
    return parse_point_set(text)


def parse_point_set(text: str) -> PointSet:
    header = None
    rows = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 5 or parts[0] != "PG":
                raise ParseError(f"line {ln}: expected 'PG n p t modulus'")
            try:
                n, p, t = int(parts[1]), int(parts[2]), int(parts[3])
                modulus = tuple(int(c) for c in parts[4].split(","))
            except ValueError as exc:
                raise ParseError(f"line {ln}: bad header: {exc}") from exc
            try:
                fs = make_field(p, t, modulus)
            except Exception as exc:
                raise ParseError(f"line {ln}: bad field: {exc}") from exc
            header = build_geometry(n, fs)
            continue
        try:
            codes = [int(x) for x in line.split()]
        except ValueError as exc:
            raise ParseError(f"line {ln}: bad point: {exc}") from exc
        if len(codes) != header.n + 1:
            raise ParseError(
                f"line {ln}: expected {header.n + 1} codes, got {len(codes)}")
        if not any(codes):
            raise ParseError(f"line {ln}: zero vector is not a point")
        if any(c < 0 or c >= header.fs.q for c in codes):
            raise ParseError(f"line {ln}: code out of range for the field")
        rows.append(codes)
    if header is None:
        raise ParseError("missing 'PG n p t modulus' header")
    if not rows:
        raise ParseError("empty point set")
    return PointSet.from_coords(header, rows)


def write_reduced_subspace(path, s: Subspace):
    g = s.geometry
    lines = [f"RED {g.n} {g.fs.q}"]
    for row in s.basis:
        lines.append(" ".join(str(int(x)) for x in row))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_reduced_subspace(path, reduced: Geometry) -> Subspace:
    """Parse a RED file and validate it against the given reduced geometry."""
    with open(path) as f:
        text = f.read()
    header = None
    rows = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "RED":
                raise ParseError(f"line {ln}: expected 'RED m q0'")
            m, q0 = int(parts[1]), int(parts[2])
            if m != reduced.n or q0 != reduced.fs.q:
                raise ParseError(
                    f"line {ln}: header RED {m} {q0} does not match the "
                    f"reduced geometry PG({reduced.n}, {reduced.fs.q})")
            header = (m, q0)
            continue
        try:
            codes = [int(x) for x in line.split()]
        except ValueError as exc:
            raise ParseError(f"line {ln}: bad row: {exc}") from exc
        if len(codes) != reduced.n + 1:
            raise ParseError(
                f"line {ln}: expected {reduced.n + 1} codes, got {len(codes)}")
        if any(c < 0 or c >= reduced.fs.q for c in codes):
            raise ParseError(f"line {ln}: code out of range for GF(q0)")
        rows.append(codes)
    if header is None:
        raise ParseError("missing 'RED m q0' header")
    if not rows:
        raise ParseError("empty subspace")
    return Subspace(reduced, np.array(rows, dtype=np.int64))


def read_vectors(path, fs, width: int):
    """Big-space vectors, one per line of integer codes; '#' comments."""
    with open(path) as f:
        text = f.read()
    rows = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            codes = [int(x) for x in line.split()]
        except ValueError as exc:
            raise ParseError(f"line {ln}: bad vector: {exc}") from exc
        if len(codes) != width:
            raise ParseError(
                f"line {ln}: expected {width} codes, got {len(codes)}")
        if any(c < 0 or c >= fs.q for c in codes):
            raise ParseError(f"line {ln}: code out of range for the field")
        rows.append(tuple(codes))
    if not rows:
        raise ParseError("no vectors in file")
    return rows
