"""Field reduction: PG(n, q0^h) viewed inside PG(h(n+1)-1, q0).

A SpreadContext fixes a GF(q0)-basis {1, d, ..., d^(h-1)} of GF(q0^h),
where d is the class of x in the modulus representation, and the induced
linear bijection between V(n+1, q0^h) and V(h(n+1), q0).  Each point of
the big space then becomes an (h-1)-subspace of the reduced space; the
family of all of them is the Desarguesian spread.  The reduced geometry
is never enumerated globally: linear sets are computed by walking the
points of the defining subspace and mapping each one back upstairs.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldError, FieldSpec
from .pg import Geometry, PointSet, Subspace, normalize_rows, rref


class ReductionError(Exception):
    pass


class NotASubline(ReductionError):
    pass


class LiftInconsistent(ReductionError):
    pass


class ZeroOnly(ReductionError):
    pass


class SpreadContext:
    """The correspondence between PG(n, q0^h) and a Desarguesian spread."""

    def __init__(self, big: Geometry, e: int):
        fs = big.fs
        if fs.t % e != 0:
            raise FieldError(f"subfield degree {e} does not divide {fs.t}")
        self.big = big
        self.sub = fs.subfield(e)
        self.small_field = self.sub.field
        self.h = fs.t // e
        self.e = e
        self.q0 = fs.p ** e
        self.reduced = Geometry(self.h * (big.n + 1) - 1, self.small_field)
        self._build_maps()

    def _build_maps(self):
        """Per-code expansion table: big code -> h small-field codes."""
        fs = self.big.fs
        fs0 = self.small_field
        p, t, e, h = fs.p, fs.t, self.e, self.h
        delta = p if t > 1 else 1  # class of x (t = 1 never occurs with h > 1)
        root = self.sub.root if e > 1 else 1
        # F_p basis {root^j * delta^i}; column (i*e + j) = digits of that product
        cols = []
        for i in range(h):
            di = fs.pow_(delta, i) if t > 1 else 1
            for j in range(e):
                v = fs.mul(di, fs.pow_(root, j) if e > 1 else 1)
                digits = []
                for _ in range(t):
                    v, r = divmod(v, p)
                    digits.append(r)
                cols.append(digits)
        m = [[cols[c][r] for c in range(t)] for r in range(t)]
        minv = _matrix_inverse_mod_p(m, p)
        # expansion of every big code into h small codes, vectorized
        codes = np.arange(fs.q, dtype=np.int64)
        digs = np.empty((fs.q, t), dtype=np.int64)
        tmp = codes.copy()
        for r in range(t):
            digs[:, r] = tmp % p
            tmp //= p
        minv_np = np.array(minv, dtype=np.int64)
        coeff = digs @ minv_np.T % p  # (q, t), entry (i*e+j)
        small = np.zeros((fs.q, h), dtype=np.int64)
        for i in range(h):
            for j in range(e - 1, -1, -1):
                small[:, i] = small[:, i] * p + coeff[:, i * e + j]
        self.expand_table = small
        # inverse: h small codes -> big code, needs embed and delta powers
        self.embed_np = np.array(self.sub.embed_table, dtype=np.int64)
        self.delta_pows = [fs.pow_(delta, i) if t > 1 else 1 for i in range(h)]

    # -- coordinate maps -----------------------------------------------------

    def eps_rows(self, rows: np.ndarray) -> np.ndarray:
        """Map (m, n+1) big vectors to (m, (n+1)h) reduced vectors."""
        rows = np.asarray(rows, dtype=np.int64)
        out = self.expand_table[rows]  # (m, n+1, h)
        return out.reshape(rows.shape[0], -1)

    def eps(self, vec):
        return tuple(int(c) for c in self.eps_rows(
            np.asarray(vec, dtype=np.int64)[None, :])[0])

    def eps_inv_rows(self, rows: np.ndarray) -> np.ndarray:
        """Map (m, (n+1)h) reduced vectors back to (m, n+1) big vectors."""
        fs = self.big.fs
        rows = np.asarray(rows, dtype=np.int64)
        m = rows.shape[0]
        ncoord = self.big.n + 1
        chunks = rows.reshape(m, ncoord, self.h)
        out = np.zeros((m, ncoord), dtype=np.int64)
        for i in range(self.h):
            term = fs.vmul(self.embed_np[chunks[:, :, i]], self.delta_pows[i])
            out = fs.vadd(out, term)
        return out

    def eps_inv(self, vec):
        return tuple(int(c) for c in self.eps_inv_rows(
            np.asarray(vec, dtype=np.int64)[None, :])[0])

    # -- spread --------------------------------------------------------------

    def spread_element(self, coords) -> Subspace:
        """The (h-1)-dimensional reduced subspace of a big point."""
        fs = self.big.fs
        u = np.asarray(self.big.normalize(coords), dtype=np.int64)
        rows = np.stack([fs.vmul(u, d) for d in self.delta_pows])
        return Subspace(self.reduced, self.eps_rows(rows))

    def big_point_of_reduced(self, coords):
        """The big point whose spread element contains the reduced point."""
        v = self.eps_inv(coords)
        return self.big.normalize(v)

    # -- linear sets ----------------------------------------------------------

    def linear_set_from_vectors(self, vectors) -> PointSet:
        """B(U) for the GF(q0)-span U of the given big vectors.

        Enumerated directly in the big space: all GF(q0)-combinations of a
        maximal GF(q0)-independent subset of the generators.
        """
        fs = self.big.fs
        gens = [tuple(int(c) for c in v) for v in vectors
                if any(int(c) for c in v)]
        if not gens:
            raise ZeroOnly("need at least one nonzero vector")
        reduced_rows, _ = rref(self.small_field,
                               self.eps_rows(np.array(gens, dtype=np.int64)))
        basis = self.eps_inv_rows(np.array(reduced_rows, dtype=np.int64))
        r = basis.shape[0]
        q0 = self.q0
        # all nonzero GF(q0)-combinations, one block per leading coefficient
        chunks = []
        for lead in range(r):
            rest = r - lead - 1
            m = q0 ** rest
            lam = np.zeros((m, r), dtype=np.int64)
            lam[:, lead] = 1
            codes = np.arange(m, dtype=np.int64)
            for j in range(rest):
                lam[:, lead + 1 + j] = (codes // q0 ** (rest - 1 - j)) % q0
            emb = self.embed_np[lam]
            vecs = np.zeros((m, basis.shape[1]), dtype=np.int64)
            for i in range(r):
                vecs = fs.vadd(vecs, fs.vmul(emb[:, i : i + 1], basis[i][None, :]))
            chunks.append(vecs)
        allvecs = np.concatenate(chunks, axis=0)
        idx = self.big.index_of_rows(allvecs)
        return PointSet(self.big, idx)

    def linear_set_from_subspace(self, pi: Subspace) -> PointSet:
        """B(pi): big points whose spread element meets the reduced subspace."""
        if pi.geometry != self.reduced:
            raise ReductionError("subspace does not live in the reduced geometry")
        pts = pi.coords_array()
        big_rows = self.eps_inv_rows(pts)
        idx = self.big.index_of_rows(big_rows)
        return PointSet(self.big, np.unique(idx))

    def reduced_rank(self, vectors) -> int:
        rows = self.eps_rows(np.array([list(v) for v in vectors], dtype=np.int64))
        return len(rref(self.small_field, rows)[0])

    # -- subline lifting -------------------------------------------------------

    def lift_subline(self, s: PointSet, p_index: int, x_coords,
                     check_subline: bool = True) -> Subspace:
        """The unique reduced line through x mapping onto the subline s.

        s must be a GF(q0)-subline of a big line, p_index one of its point
        indices, and x a reduced point of the spread element of that point.
        """
        from .structure import is_subline  # local import: module layering

        fs = self.big.fs
        if check_subline and not is_subline(s, self.e):
            raise NotASubline("point set is not a subline of matching order")
        if p_index not in s:
            raise ReductionError("anchor point is not a member of the subline")
        v = np.asarray(self.eps_inv(x_coords), dtype=np.int64)
        pc = self.big.normalize([int(c) for c in v])
        if self.big.index_of(pc) != int(p_index):
            raise ReductionError("reduced point is not in the anchor's spread element")
        others = [int(i) for i in s.indices if int(i) != int(p_index)]
        w1 = np.asarray(self.big.coords_of(others[0]), dtype=np.int64)
        w2 = np.asarray(self.big.coords_of(others[1]), dtype=np.int64)
        a, b = _solve_two(fs, v, w1, w2)
        if a == 0 or b == 0:
            raise LiftInconsistent("anchor points are not in general position")
        mcoef = fs.div(b, a)
        w = fs.vmul(w1, mcoef)
        line = Subspace(self.reduced, np.stack([self.eps_rows(v[None, :])[0],
                                                self.eps_rows(w[None, :])[0]]))
        if self.linear_set_from_subspace(line) != s:
            raise LiftInconsistent("lifted line does not map back onto the subline")
        return line


def _matrix_inverse_mod_p(m, p):
    n = len(m)
    aug = [[m[i][j] % p for j in range(n)] + [1 if i == j else 0
                                              for j in range(n)] for i in range(n)]
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if aug[r][col] % p), None)
        if piv is None:
            raise ReductionError("basis matrix is singular")
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], -1, p)
        aug[row] = [(x * inv) % p for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(aug[r][j] - c * aug[row][j]) % p for j in range(2 * n)]
        row += 1
    return [r[n:] for r in aug]


def _solve_two(fs: FieldSpec, v, w1, w2):
    """Coefficients (a, b) with w2 = a v + b w1, assuming they exist."""
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            det = fs.sub(fs.mul(int(v[i]), int(w1[j])),
                         fs.mul(int(v[j]), int(w1[i])))
            if det == 0:
                continue
            di = fs.inv(det)
            a = fs.mul(di, fs.sub(fs.mul(int(w2[i]), int(w1[j])),
                                  fs.mul(int(w2[j]), int(w1[i]))))
            b = fs.mul(di, fs.sub(fs.mul(int(v[i]), int(w2[j])),
                                  fs.mul(int(v[j]), int(w2[i]))))
            # verify full consistency (the three points must be collinear)
            for k in range(n):
                lhs = fs.add(fs.mul(a, int(v[k])), fs.mul(b, int(w1[k])))
                if lhs != int(w2[k]):
                    raise LiftInconsistent("anchor points are not collinear")
            return a, b
    raise LiftInconsistent("degenerate line basis")
