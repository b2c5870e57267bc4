"""Points, subspaces and point sets of PG(n, q).

Points are normalized homogeneous coordinate tuples (leftmost nonzero
coordinate = 1) of element codes.  Point and hyperplane indices are the
rank of the normalized tuple in lexicographic order; the bijection is
closed-form, so a Geometry never has to materialize its point table
unless an exhaustive scan asks for it.  Subspaces are stored as reduced
echelon bases, making equality a plain tuple comparison.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec, FieldError


class GeometryError(Exception):
    pass


class BudgetExceeded(GeometryError):
    pass


class EqualPoints(GeometryError):
    pass


def space_size(q: int, k: int) -> int:
    """Number of points of PG(k, q)."""
    return (q ** (k + 1) - 1) // (q - 1)


# ---------------------------------------------------------------------------
# echelon form over a FieldSpec


def rref(fs: FieldSpec, rows):
    """Reduced row echelon form; returns (rows, pivots), dependent rows dropped."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    out = []
    pivots = []
    for row in rows:
        row = list(row)
        for r, p in zip(out, pivots):
            c = row[p]
            if c:
                for j in range(ncols):
                    if r[j]:
                        row[j] = fs.sub(row[j], fs.mul(c, r[j]))
        lead = next((j for j, v in enumerate(row) if v), None)
        if lead is None:
            continue
        ilead = fs.inv(row[lead])
        row = [fs.mul(ilead, v) for v in row]
        # back-substitute into existing rows
        for k, (r, p) in enumerate(zip(out, pivots)):
            c = r[lead]
            if c:
                out[k] = [fs.sub(r[j], fs.mul(c, row[j])) for j in range(ncols)]
        out.append(row)
        pivots.append(lead)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [tuple(out[i]) for i in order], [pivots[i] for i in order]


def right_nullspace(fs: FieldSpec, rows, ncols=None):
    """Basis (RREF) of {v : rows @ v = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(fs, rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, p in zip(red, pivots):
            v[p] = fs.neg(r[f])
        basis.append(tuple(v))
    if not basis:
        return []
    return rref(fs, basis)[0]


class Subspace:
    """A projective subspace, canonically represented by its RREF basis."""

    __slots__ = ("geometry", "basis", "pivots")

    def __init__(self, geometry: "Geometry", rows):
        self.geometry = geometry
        basis, pivots = rref(geometry.fs, rows)
        if not basis:
            raise GeometryError("empty subspace has no basis")
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @property
    def dim(self) -> int:
        """Projective dimension."""
        return len(self.basis) - 1

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={self.basis})"

    def contains_coords(self, coords) -> bool:
        fs = self.geometry.fs
        v = list(coords)
        for r, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = [fs.sub(v[j], fs.mul(c, r[j])) for j in range(len(v))]
        return not any(v)

    def num_points(self) -> int:
        return space_size(self.geometry.fs.q, self.dim)

    def coords_array(self) -> np.ndarray:
        """All points as an (m, n+1) array of codes, lazily enumerated."""
        g = self.geometry
        fs = g.fs
        k = self.dim
        basis = np.array(self.basis, dtype=np.int64)
        chunks = []
        # parameter tuples over PG(k, q): pivot structure, lex order
        for piv in range(k + 1):
            rest = k - piv
            m = fs.q ** rest
            params = np.zeros((m, k + 1), dtype=np.int64)
            params[:, piv] = 1
            if rest:
                codes = np.arange(m, dtype=np.int64)
                for j in range(rest):
                    params[:, piv + 1 + j] = (codes // fs.q ** (rest - 1 - j)) % fs.q
            rowsum = np.zeros((m, basis.shape[1]), dtype=np.int64)
            for i in range(k + 1):
                term = fs.vmul(params[:, i : i + 1], basis[i][None, :])
                rowsum = fs.vadd(rowsum, term)
            chunks.append(normalize_rows(fs, rowsum))
        return np.concatenate(chunks, axis=0)

    def point_set(self) -> "PointSet":
        g = self.geometry
        idx = g.index_of_rows(self.coords_array())
        return PointSet(g, idx)


def normalize_rows(fs: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    rows = np.asarray(rows, dtype=np.int64)
    nz = rows != 0
    lead_col = np.argmax(nz, axis=1)
    lead = np.take_along_axis(rows, lead_col[:, None], axis=1)[:, 0]
    if np.any(lead == 0):
        raise GeometryError("zero vector cannot be normalized")
    return fs.vmul(fs.vinv(lead)[:, None], rows)


class Geometry:
    """PG(n, q).  Immutable; all queries are pure."""

    def __init__(self, n: int, fs: FieldSpec, materialize_lines: bool = False,
                 budget: int = 1 << 27):
        if n < 1:
            raise GeometryError("projective dimension must be >= 1")
        self.n = n
        self.fs = fs
        self.num_points = space_size(fs.q, n)
        self.num_hyperplanes = self.num_points
        self.budget = budget
        # offsets[i] = number of points whose pivot position is < i
        offs = []
        total = 0
        for piv in range(n + 1):
            offs.append(total)
            total += fs.q ** (n - piv)
        self._pivot_offsets = offs
        self._coords_cache = None
        self.line_table = None
        if materialize_lines:
            self.line_table = self._build_line_table()

    def __repr__(self):
        return f"PG({self.n}, {self.fs.q})"

    def __eq__(self, other):
        return (
            isinstance(other, Geometry)
            and self.n == other.n
            and self.fs == other.fs
        )

    def __hash__(self):
        return hash((self.n, self.fs))

    # -- point <-> index bijection ------------------------------------------

    def normalize(self, coords):
        fs = self.fs
        coords = list(coords)
        lead = next((c for c in coords if c), None)
        if lead is None:
            raise GeometryError("zero vector is not a projective point")
        if lead != 1:
            il = fs.inv(lead)
            coords = [fs.mul(il, c) for c in coords]
        return tuple(coords)

    def index_of(self, coords) -> int:
        coords = self.normalize(coords)
        piv = next(i for i, c in enumerate(coords) if c)
        rank = 0
        for c in coords[piv + 1:]:
            rank = rank * self.fs.q + c
        return self._pivot_offsets[piv] + rank

    def coords_of(self, index: int):
        q = self.fs.q
        n = self.n
        for piv in range(n + 1):
            block = q ** (n - piv)
            off = self._pivot_offsets[piv]
            if index < off + block:
                rank = index - off
                rest = []
                for _ in range(n - piv):
                    rank, r = divmod(rank, q)
                    rest.append(r)
                rest.reverse()
                return tuple([0] * piv + [1] + rest)
        raise GeometryError(f"point index {index} out of range")

    def index_of_rows(self, rows: np.ndarray) -> np.ndarray:
        """Vectorized index_of for an array of (already nonzero) rows."""
        fs = self.fs
        rows = normalize_rows(fs, rows)
        nz = rows != 0
        piv = np.argmax(nz, axis=1)
        offs = np.array(self._pivot_offsets, dtype=np.int64)
        idx = offs[piv]
        rank = np.zeros(rows.shape[0], dtype=np.int64)
        for j in range(1, self.n + 1):
            inblock = j > piv
            rank = np.where(inblock, rank * fs.q + rows[:, j], rank)
        return idx + rank

    def coords_of_indices(self, idx) -> np.ndarray:
        """Vectorized coords_of for an array of point indices."""
        idx = np.asarray(idx, dtype=np.int64)
        q = self.fs.q
        n = self.n
        offs = np.array(self._pivot_offsets, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.num_points):
            bad = idx[(idx < 0) | (idx >= self.num_points)][0]
            raise GeometryError(f"point index {int(bad)} out of range")
        piv = np.searchsorted(offs, idx, side="right") - 1
        rank = idx - offs[piv]
        out = np.zeros((idx.size, n + 1), dtype=np.int64)
        out[np.arange(idx.size), piv] = 1
        # trailing coordinates are the base-q digits of rank, most
        # significant first, right-aligned after the pivot column
        for j in range(n, 0, -1):
            digit = rank % q
            rank //= q
            live = j > piv
            out[:, j] = np.where(live, digit, out[:, j])
        return out

    def all_coords(self) -> np.ndarray:
        if self._coords_cache is None:
            if self.num_points > self.budget:
                raise BudgetExceeded(
                    f"{self.num_points} points exceed budget {self.budget}")
            self._coords_cache = self.coords_of_indices(
                np.arange(self.num_points))
        return self._coords_cache

    # -- hyperplanes (dual points, same indexing scheme) ---------------------

    def hyperplane_coords_of(self, index: int):
        return self.coords_of(index)

    def hyperplane_subspace(self, dual) -> Subspace:
        """The hyperplane {x : dual . x = 0} as a Subspace."""
        return Subspace(self, right_nullspace(self.fs, [tuple(dual)]))

    def dual_of_hyperplane(self, s: Subspace):
        if s.dim != self.n - 1:
            raise GeometryError("not a hyperplane")
        ns = right_nullspace(self.fs, list(s.basis))
        return self.normalize(ns[0])

    def hyperplanes(self):
        for i in range(self.num_hyperplanes):
            yield self.hyperplane_subspace(self.coords_of(i))

    def hyperplanes_through(self, s: Subspace):
        """Hyperplanes containing s, enumerated as Subspaces."""
        if s.dim > self.n - 1:
            raise GeometryError("subspace too large")
        duals = right_nullspace(self.fs, list(s.basis))
        dual_space = Subspace(self, duals)
        for dual in dual_space.coords_array():
            yield self.hyperplane_subspace(tuple(int(c) for c in dual))

    def dot(self, a, b) -> int:
        fs = self.fs
        acc = 0
        for x, y in zip(a, b):
            acc = fs.add(acc, fs.mul(x, y))
        return acc

    def vdot(self, duals: np.ndarray, point) -> np.ndarray:
        """dual . point for an array of dual rows (or points vs one dual)."""
        fs = self.fs
        point = np.asarray(point, dtype=np.int64)
        acc = np.zeros(duals.shape[0], dtype=np.int64)
        for j in range(duals.shape[1]):
            acc = fs.vadd(acc, fs.vmul(duals[:, j], point[j]))
        return acc

    # -- lines ----------------------------------------------------------------

    def line_through(self, pc, qc) -> Subspace:
        pc = self.normalize(pc)
        qc = self.normalize(qc)
        if pc == qc:
            raise EqualPoints("need two distinct points")
        return Subspace(self, [pc, qc])

    def _build_line_table(self):
        if self.num_points > 1 << 14:
            raise BudgetExceeded("line table too large to materialize")
        seen = set()
        table = []
        for i in range(self.num_points):
            pi = self.coords_of(i)
            for j in range(i + 1, self.num_points):
                line = self.line_through(pi, self.coords_of(j))
                if line.basis in seen:
                    continue
                seen.add(line.basis)
                table.append(line)
        return table


# ---------------------------------------------------------------------------


class PointSet:
    """A set of points of one Geometry, held as sorted unique indices."""

    __slots__ = ("geometry", "indices", "_set", "_coords")

    def __init__(self, geometry: Geometry, indices):
        self.geometry = geometry
        idx = np.unique(np.asarray(list(indices) if not isinstance(
            indices, np.ndarray) else indices, dtype=np.int64))
        self.indices = idx
        self._set = None
        self._coords = None

    @classmethod
    def from_coords(cls, geometry: Geometry, coords_list):
        rows = np.array([geometry.normalize(c) for c in coords_list],
                        dtype=np.int64)
        return cls(geometry, geometry.index_of_rows(rows))

    @property
    def card(self) -> int:
        return int(self.indices.size)

    def __len__(self):
        return self.card

    def __contains__(self, index: int) -> bool:
        if self._set is None:
            self._set = frozenset(int(i) for i in self.indices)
        return int(index) in self._set

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.geometry == other.geometry
            and self.indices.shape == other.indices.shape
            and bool(np.all(self.indices == other.indices))
        )

    def __hash__(self):
        return hash((self.geometry, self.indices.tobytes()))

    def coords(self) -> np.ndarray:
        if self._coords is None:
            self._coords = self.geometry.coords_of_indices(self.indices)
        return self._coords

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.geometry,
                        np.concatenate([self.indices, other.indices]))

    def difference(self, other) -> "PointSet":
        mask = ~np.isin(self.indices, np.asarray(list(other), dtype=np.int64)
                        if not isinstance(other, PointSet) else other.indices)
        return PointSet(self.geometry, self.indices[mask])

    def intersection(self, other: "PointSet") -> "PointSet":
        return PointSet(self.geometry,
                        self.indices[np.isin(self.indices, other.indices)])

    def remove(self, index: int) -> "PointSet":
        return PointSet(self.geometry, self.indices[self.indices != index])

    def add(self, index: int) -> "PointSet":
        return PointSet(self.geometry,
                        np.concatenate([self.indices, [index]]))


# ---------------------------------------------------------------------------
# module-level operations


def build_geometry(n: int, fs: FieldSpec, materialize_lines: bool = False,
                   budget: int = 1 << 27) -> Geometry:
    return Geometry(n, fs, materialize_lines=materialize_lines, budget=budget)


def line_through(g: Geometry, p, q) -> Subspace:
    return g.line_through(p, q)


def span(g: Geometry, items) -> Subspace:
    """Smallest subspace containing the given points and subspaces."""
    rows = []
    for it in items:
        if isinstance(it, Subspace):
            rows.extend(it.basis)
        else:
            rows.append(tuple(it))
    if not rows:
        raise GeometryError("span of nothing")
    return Subspace(g, rows)


def points_of(s: Subspace) -> PointSet:
    return s.point_set()


def intersect(a: Subspace, b: Subspace):
    """Intersection subspace, or None when disjoint."""
    fs = a.geometry.fs
    stacked = [list(r) for r in a.basis] + [list(fs.neg(c) for c in r)
                                            for r in b.basis]
    # left-nullspace of the stacked matrix: transpose, take right nullspace
    ncols = len(a.basis[0])
    ra = len(a.basis)
    transposed = [[row[j] for row in stacked] for j in range(ncols)]
    combos = right_nullspace(fs, transposed, ncols=len(stacked))
    if not combos:
        return None
    rows = []
    for z in combos:
        v = [0] * ncols
        for coef, arow in zip(z[:ra], a.basis):
            if coef:
                for j in range(ncols):
                    v[j] = fs.add(v[j], fs.mul(coef, arow[j]))
        if any(v):
            rows.append(tuple(v))
    if not rows:
        return None
    return Subspace(a.geometry, rows)


def set_meet(b: PointSet, s: Subspace) -> PointSet:
    """B intersected with the points of s."""
    g = b.geometry
    if b.geometry != s.geometry:
        raise GeometryError("point set and subspace live in different geometries")
    if s.num_points() <= b.card:
        return b.intersection(s.point_set())
    keep = [i for i, c in zip(b.indices, b.coords())
            if s.contains_coords([int(x) for x in c])]
    return PointSet(g, np.asarray(keep, dtype=np.int64))
