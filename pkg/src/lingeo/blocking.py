"""Blocking-set predicates: blocking, minimal, small, exponents, projection.

The hyperplane-facing operations pick a strategy by geometry size:

* ``cover``  - enumerate the hyperplanes through each member point and
  compare the union against the total count; also yields every
  hyperplane intersection size, so the exponent comes for free.
  Needs |B| * (hyperplanes through a point) to be affordable.
* ``scan``   - walk every hyperplane dual and test B against it
  (only for small geometries).
* ``randomized-witness`` - for minimality in huge geometries: a seeded
  search for a tangent hyperplane per point.  Found witnesses are exact
  proofs; the method never certifies a false positive.

Exponents are defined through hyperplane intersections; the line-based
reading is always computed alongside as a cross-check and is the only
one available when the hyperplane family is out of reach.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .census import LineCensus, groups_through_point, line_census, pack_rows
from .pg import (Geometry, GeometryError, PointSet, Subspace, normalize_rows,
                 right_nullspace, space_size, span)

_COVER_LIMIT = 50_000_000


class BlockingError(Exception):
    pass


class NotBlocking(BlockingError):
    pass


class NotMember(BlockingError):
    pass


class QInB(BlockingError):
    pass


class QInH(BlockingError):
    pass


class HyperplaneFamilyTooLarge(BlockingError):
    pass


@dataclass
class BlockingReport:
    size: int
    kappa: int
    is_blocking: bool
    is_minimal: bool
    is_small: bool
    exponent_e: int | None
    exponent_e_lines: int | None
    q0: int | None
    h: int | None
    h_integral: bool
    span_dim: int
    point_exponents: list | None = None
    strategy: str = ""
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = {k: getattr(self, k) for k in (
            "size", "kappa", "is_blocking", "is_minimal", "is_small",
            "exponent_e", "exponent_e_lines", "q0", "h", "h_integral",
            "span_dim", "strategy")}
        d["point_exponents"] = self.point_exponents
        d["witnesses"] = self.witnesses
        return json.dumps(d, sort_keys=True)


# ---------------------------------------------------------------------------
# hyperplane machinery


def _duals_through_point(g: Geometry, coords) -> np.ndarray:
    """All normalized hyperplane duals vanishing on one point."""
    basis = right_nullspace(g.fs, [tuple(coords)])
    s = Subspace(g, basis)
    return s.coords_array()


def _hyperplane_profile(b: PointSet):
    """(met_keys, counts): every hyperplane meeting B with its |H ∩ B|."""
    g = b.geometry
    per_point = space_size(g.fs.q, g.n - 1)
    if b.card * per_point > _COVER_LIMIT:
        raise HyperplaneFamilyTooLarge(
            f"{b.card} x {per_point} dual enumerations needed")
    keys = []
    for c in b.coords():
        duals = _duals_through_point(g, [int(x) for x in c])
        keys.append(g.index_of_rows(duals))
    allkeys = np.concatenate(keys)
    met, counts = np.unique(allkeys, return_counts=True)
    return met, counts


def is_blocking(b: PointSet):
    """(verdict, witness): witness is an unblocked hyperplane index or None."""
    g = b.geometry
    met, _ = _hyperplane_profile(b)
    if met.size == g.num_hyperplanes:
        return True, None
    missing = np.setdiff1d(np.arange(g.num_hyperplanes, dtype=np.int64), met,
                           assume_unique=True) if g.num_hyperplanes <= 1 << 24 \
        else None
    if missing is not None and missing.size:
        return False, int(missing[0])
    # large dual space: find the first gap in the sorted met array
    expect = np.arange(met.size, dtype=np.int64)
    gaps = np.flatnonzero(met != expect)
    return False, int(gaps[0]) if gaps.size else int(met.size)


def tangent_counts(b: PointSet):
    """Tangent-hyperplane count for every member of B, via a full profile."""
    g = b.geometry
    met, counts = _hyperplane_profile(b)
    tangents = met[counts == 1]
    out = np.zeros(b.card, dtype=np.int64)
    if tangents.size == 0:
        return out, {}
    duals = g.coords_of_indices(tangents)
    witness: dict = {}
    for i, c in enumerate(b.coords()):
        hits = g.vdot(duals, [int(x) for x in c]) == 0
        out[i] = int(hits.sum())
        w = np.flatnonzero(hits)
        if w.size:
            witness[int(b.indices[i])] = int(tangents[w[0]])
    return out, witness


def randomized_tangent_witnesses(b: PointSet, seed: int = 0,
                                 trials: int = 400):
    """Seeded per-point search for tangent hyperplanes in huge geometries.

    Returns (witness dualvec per member or None, all_found). A returned
    witness is always exact; a miss after ``trials`` proves nothing.
    """
    g = b.geometry
    fs = g.fs
    rng = np.random.default_rng(seed)
    coords = b.coords()
    witnesses = {}
    all_found = True
    for i, c in enumerate(coords):
        basis = np.array(_duals_through_point_basis(g, [int(x) for x in c]),
                         dtype=np.int64)
        found = None
        for _ in range(trials):
            coef = rng.integers(0, fs.q, basis.shape[0])
            if not coef.any():
                continue
            dual = np.zeros(basis.shape[1], dtype=np.int64)
            for r in range(basis.shape[0]):
                dual = fs.vadd(dual, fs.vmul(basis[r], int(coef[r])))
            vals = _eval_form(g, coords, dual)
            if int((vals == 0).sum()) == 1:
                found = tuple(int(x) for x in dual)
                break
        if found is None:
            all_found = False
        else:
            witnesses[int(b.indices[i])] = found
    return witnesses, all_found


def _duals_through_point_basis(g: Geometry, coords):
    return right_nullspace(g.fs, [tuple(coords)])


def _eval_form(g: Geometry, rows: np.ndarray, dual) -> np.ndarray:
    fs = g.fs
    acc = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        acc = fs.vadd(acc, fs.vmul(rows[:, j], int(dual[j])))
    return acc


def is_minimal(b: PointSet):
    """(verdict, witnesses): per-point tangent hyperplane or violating point."""
    blocking, w = is_blocking(b)
    if not blocking:
        raise NotBlocking(f"unblocked hyperplane {w}")
    counts, witness = tangent_counts(b)
    bad = np.flatnonzero(counts == 0)
    if bad.size:
        return False, {"inessential": [int(b.indices[i]) for i in bad]}
    return True, {"tangents": witness}


def _exponent_from_sizes(sizes, p: int, t: int):
    g = 0
    for s in sizes:
        g = math.gcd(g, int(s) - 1)
        if g == 1:
            return 0
    e = 0
    while g % p == 0 and e < t:
        g //= p
        e += 1
    return e


def exponent(b: PointSet, census: LineCensus | None = None):
    """(e, q0, h, h_integral) from hyperplane intersections.

    Raises HyperplaneFamilyTooLarge when the dual family cannot be
    enumerated; use ``exponent_from_lines`` then.
    """
    g = b.geometry
    met, counts = _hyperplane_profile(b)
    if met.size != g.num_hyperplanes:
        raise NotBlocking("set does not block every hyperplane")
    fs = g.fs
    e = _exponent_from_sizes(np.unique(counts), fs.p, fs.t)
    return _exponent_tuple(e, fs)


def exponent_from_lines(b: PointSet, census: LineCensus | None = None):
    if census is None:
        census = line_census(b)
    fs = b.geometry.fs
    sizes = [s for s in census.hist if s >= 1]
    e = _exponent_from_sizes(sizes, fs.p, fs.t)
    return _exponent_tuple(e, fs)


def _exponent_tuple(e, fs):
    if e == 0:
        return 0, None, None, False
    q0 = fs.p ** e
    integral = fs.t % e == 0
    return e, q0, (fs.t // e if integral else None), integral


def point_exponent(b: PointSet, index: int) -> int:
    """Largest e_P with every line through the point meeting B in 1 mod p^e_P."""
    pos = int(np.searchsorted(b.indices, index))
    if pos >= b.card or int(b.indices[pos]) != int(index):
        raise NotMember(f"{index} is not in the set")
    groups = groups_through_point(b, pos)
    fs = b.geometry.fs
    sizes = {int(grp.size) + 1 for grp in groups}
    return _exponent_from_sizes(sizes, fs.p, fs.t)


def all_point_exponents(b: PointSet) -> list:
    fs = b.geometry.fs
    out = []
    for pos in range(b.card):
        sizes = {int(g.size) + 1 for g in groups_through_point(b, pos)}
        out.append(_exponent_from_sizes(sizes, fs.p, fs.t))
    return out


# ---------------------------------------------------------------------------


def analyze(b: PointSet, assume_blocking: bool | None = None,
            with_point_exponents: bool = False, seed: int = 0,
            census: LineCensus | None = None) -> BlockingReport:
    """Full BlockingReport for B, choosing feasible strategies.

    ``assume_blocking=True`` records a construction-certified blocking
    property when the hyperplane family is too large to enumerate.
    """
    g = b.geometry
    fs = g.fs
    if census is None:
        census = line_census(b)
    size = b.card
    small = size < 3 * (fs.q + 1) / 2
    span_dim = span(g, [tuple(int(x) for x in c) for c in b.coords()]).dim
    e_lines, *_ = exponent_from_lines(b, census)
    witnesses: dict = {}
    try:
        blocking, w = is_blocking(b)
        if w is not None:
            witnesses["unblocked_hyperplane"] = w
        strategy = "cover"
        if blocking:
            if g.n == 2 and census.per_point_tangents is not None:
                # in a plane the hyperplanes are the lines, so the census
                # already holds exact exponent data and tangent counts
                e, q0, h, integral = exponent_from_lines(b, census)
                counts = census.per_point_tangents
            else:
                e, q0, h, integral = exponent(b, census)
                counts, _ = tangent_counts(b)
            minimal = bool(np.all(counts > 0))
            if not minimal:
                witnesses["inessential"] = [
                    int(b.indices[i]) for i in np.flatnonzero(counts == 0)]
        else:
            e = q0 = h = None
            integral = False
            minimal = False
    except HyperplaneFamilyTooLarge:
        strategy = "structural"
        blocking = bool(assume_blocking)
        if assume_blocking:
            witnesses["blocking_certificate"] = "construction"
        e, q0, h, integral = exponent_from_lines(b, census)
        tw, all_found = randomized_tangent_witnesses(b, seed=seed)
        minimal = blocking and all_found
        witnesses["minimality_method"] = "randomized-witness"
    pexp = all_point_exponents(b) if with_point_exponents else None
    return BlockingReport(
        size=size, kappa=size - fs.q, is_blocking=blocking,
        is_minimal=minimal, is_small=bool(small), exponent_e=e,
        exponent_e_lines=e_lines, q0=q0, h=h, h_integral=integral,
        span_dim=span_dim, point_exponents=pexp, strategy=strategy,
        witnesses=witnesses)


# ---------------------------------------------------------------------------
# projection


def project(b: PointSet, q_coords, h: Subspace):
    """Project B from a point onto a hyperplane, re-coordinatized to PG(n-1,q).

    Returns (image PointSet, image Geometry).
    """
    g = b.geometry
    fs = g.fs
    qc = g.normalize(q_coords)
    if g.index_of(qc) in b:
        raise QInB("projection center lies in the set")
    if h.dim != g.n - 1:
        raise GeometryError("projection target must be a hyperplane")
    if h.contains_coords(qc):
        raise QInH("projection center lies in the target hyperplane")
    dual = np.array(g.dual_of_hyperplane(h), dtype=np.int64)
    coords = b.coords()
    dq = g.dot([int(x) for x in qc], [int(x) for x in dual])
    dp = _eval_form(g, coords, dual)
    # image point = (dual.P) Q - (dual.Q) P, which lies on QP and on H
    qv = np.array(qc, dtype=np.int64)
    img = fs.vsub(fs.vmul(dp[:, None], qv[None, :]),
                  fs.vmul(np.int64(dq), coords))
    # points of B already on H project to themselves (dp == 0 gives -dq * P)
    img = normalize_rows(fs, img)
    # re-coordinatize: coefficients w.r.t. the RREF basis of H live at pivots
    small = Geometry(g.n - 1, fs)
    reco = img[:, list(h.pivots)]
    return PointSet(small, small.index_of_rows(reco)), small


def find_tangent_only_point(b: PointSet, limit: int | None = None):
    """First point (in index order) off B lying only on tangent lines."""
    g = b.geometry
    fs = g.fs
    coords = b.coords()
    stop = g.num_points if limit is None else min(limit, g.num_points)
    for idx in range(stop):
        if idx in b:
            continue
        qc = np.array(g.coords_of(idx), dtype=np.int64)
        piv = int(np.argmax(qc != 0))
        alpha = coords[:, piv]
        red = fs.vsub(coords, fs.vmul(alpha[:, None], qc[None, :]))
        red = np.delete(red, piv, axis=1)
        red = normalize_rows(fs, red)
        keys = pack_rows(red, fs.q)
        uniq = np.unique(keys, axis=0 if keys.ndim > 1 else None)
        if uniq.shape[0] == b.card:
            return idx
    return None


# ---------------------------------------------------------------------------
# reduction to a minimal blocking set


def reduce_to_minimal(b: PointSet, order: str = "lex", seed: int = 0,
                      verify_orders: int = 0) -> PointSet:
    """Strip points without tangent hyperplanes until the set is minimal.

    ``order`` is "lex" (lowest index first) or "random" (seeded).  With
    ``verify_orders`` > 0 and |B| < 2q the result is recomputed under
    that many random orders and must be identical.
    """
    blocking, w = is_blocking(b)
    if not blocking:
        raise NotBlocking(f"unblocked hyperplane {w}")

    def run(strategy_rng):
        cur = b
        while True:
            counts, _ = tangent_counts(cur)
            loose = np.flatnonzero(counts == 0)
            if loose.size == 0:
                return cur
            if strategy_rng is None:
                drop = int(cur.indices[loose[0]])
            else:
                drop = int(cur.indices[strategy_rng.choice(loose)])
            cur = cur.remove(drop)

    result = run(None if order == "lex" else np.random.default_rng(seed))
    if verify_orders and b.card < 2 * b.geometry.fs.q:
        for k in range(verify_orders):
            other = run(np.random.default_rng(seed + 1 + k))
            if other != result:
                raise BlockingError(
                    "reduction is order-dependent below the 2q threshold")
    return result
