"""Exact arithmetic in GF(p^t), subfields and Frobenius maps.

Elements are plain integers in 0..p^t-1, read base-p as the coefficients
of a polynomial of degree < t (least significant digit = constant term).
A FieldSpec owns the modulus and all lookup tables; it is immutable after
construction, so instances can be shared freely between threads.

For q = p^t <= 2^16 a discrete log / antilog pair is precomputed, which
both the scalar and the numpy-vectorized operations use.  Fields above
2^16 fall back to polynomial arithmetic (and have no vectorized path);
fields with p^t > 2^31 are out of scope.
"""

from __future__ import annotations

import json

import numpy as np

_TABLE_LIMIT = 1 << 16


class FieldError(Exception):
    """Base class for finite-field construction and arithmetic errors."""


class NonPrimeError(FieldError):
    pass


class ReducibleModulusError(FieldError):
    pass


class ZeroInverseError(FieldError):
    pass


class MixedFieldsError(FieldError):
    pass


class NonDivisorDegreeError(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); a polynomial is a tuple of ints, low first


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _poly_trim(a)


def _code_to_poly(code: int, p: int):
    digits = []
    while code:
        code, r = divmod(code, p)
        digits.append(r)
    return tuple(digits)


def _poly_to_code(poly, p: int) -> int:
    code = 0
    for c in reversed(poly):
        code = code * p + c
    return code


def poly_is_irreducible(coeffs, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    coeffs = _poly_trim(coeffs)
    deg = len(coeffs) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    if coeffs[0] == 0:  # divisible by x
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(p ** d):
            div = _code_to_poly(low, p) + (0,) * (d - len(_code_to_poly(low, p))) + (1,)
            if len(_poly_mod(coeffs, div, p)) == 0:
                return False
    return True


def _auto_modulus(p: int, t: int):
    """Smallest monic irreducible of degree t, by base-p code order."""
    if t == 1:
        return (0, 1)
    for low in range(p ** t):
        poly = _code_to_poly(low, p)
        coeffs = poly + (0,) * (t - len(poly)) + (1,)
        if poly_is_irreducible(coeffs, p):
            return coeffs
    raise ReducibleModulusError(f"no irreducible of degree {t} over GF({p})")


# ---------------------------------------------------------------------------


class FieldSpec:
    """GF(p^t) with a fixed irreducible modulus; all operations are pure."""

    def __init__(self, p: int, t: int, modulus="auto"):
        if not is_prime(p):
            raise NonPrimeError(f"{p} is not prime")
        if t < 1:
            raise FieldError("extension degree must be >= 1")
        if modulus == "auto":
            modulus = _auto_modulus(p, t)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != t + 1 or modulus[t] != 1:
            raise ReducibleModulusError("modulus must be monic of degree t")
        if t > 1 and not poly_is_irreducible(modulus, p):
            raise ReducibleModulusError(f"{list(modulus)} is reducible over GF({p})")
        self.p = p
        self.t = t
        self.q = p ** t
        self.modulus = modulus
        self._subfields = {}
        self._init_tables()

    # -- representation ----------------------------------------------------

    def __repr__(self):
        return f"GF({self.p}^{self.t})" if self.t > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.t, self.modulus) == (other.p, other.t, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.t, self.modulus))

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "t": self.t, "modulus": list(self.modulus)})

    @classmethod
    def from_json(cls, text: str) -> "FieldSpec":
        d = json.loads(text)
        return cls(d["p"], d["t"], d["modulus"])

    # -- tables ------------------------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        if self.t == 1:
            return a * b % self.p
        prod = _poly_mul(_code_to_poly(a, self.p), _code_to_poly(b, self.p), self.p)
        return _poly_to_code(_poly_mod(prod, self.modulus, self.p), self.p)

    def _init_tables(self):
        p, q = self.p, self.q
        if q > _TABLE_LIMIT:
            self._log = None
            self._exp = None
            self._np_log = None
            self._np_exp = None
            self._spread = None
            return
        # find a generator of the multiplicative group by walking powers
        exp = None
        for g in range(2, q):
            if self.t > 1 and g < p and p > 2:
                # small prime-field candidates rarely generate; still try them
                pass
            seq = [1]
            x = 1
            for _ in range(q - 2):
                x = self._mul_poly(x, g)
                if x == 1:
                    break
                seq.append(x)
            else:
                x = self._mul_poly(x, g)
                if x == 1:
                    exp = seq
                    break
        if exp is None:  # q == 2
            exp = [1]
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        self._np_exp = np.array(exp + exp, dtype=np.int64)  # doubled: no mod needed
        self._np_log = np.array([-1] + log[1:], dtype=np.int64)
        self._init_add_tables()

    def _init_add_tables(self):
        """Spread/unspread tables: vectorized add as one lookup-add-lookup.

        Each base-p digit is moved into its own base-2p slot, so adding
        two spread codes never carries between digits; an unspread table
        over the (2p)^t sum space maps back with the per-digit mod p.
        """
        p, t = self.p, self.t
        self._spread = None
        if p == 2 or t == 1 or (2 * p) ** t > 1 << 24:
            return
        codes = np.arange(self.q, dtype=np.int64)
        spread = np.zeros(self.q, dtype=np.int64)
        tmp = codes.copy()
        for k in range(t):
            spread += (tmp % p) * (2 * p) ** k
            tmp //= p
        sums = np.arange((2 * p) ** t, dtype=np.int64)
        unspread = np.zeros(sums.size, dtype=np.int64)
        tmp = sums.copy()
        for k in range(t):
            unspread += (tmp % (2 * p) % p) * p ** k
            tmp //= 2 * p
        neg = np.zeros(self.q, dtype=np.int64)
        tmp = codes.copy()
        for k in range(t):
            neg += (p - tmp % p) % p * p ** k
            tmp //= p
        self._spread = spread
        self._unspread = unspread
        self._np_neg = neg
        self._msneg = None  # log-sum -> spread(-product), built on demand

    @property
    def has_tables(self) -> bool:
        return self._log is not None

    # -- scalar arithmetic ---------------------------------------------------

    def check(self, a: int):
        if not 0 <= a < self.q:
            raise FieldError(f"element code {a} out of range for {self!r}")

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.t == 1:
            return (a + b) % p
        out = 0
        mult = 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += (da + db) % p * mult
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.t == 1:
            return (-a) % p
        out = 0
        mult = 1
        while a:
            a, da = divmod(a, p)
            out += (-da) % p * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverseError("0 has no multiplicative inverse")
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow_(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroInverseError("0 has no negative powers")
            return 0
        k %= self.q - 1
        if self._log is not None:
            return self._exp[self._log[a] * k % (self.q - 1)]
        out = 1
        base = a
        while k:
            if k & 1:
                out = self._mul_poly(out, base)
            base = self._mul_poly(base, base)
            k >>= 1
        return out

    def frobenius(self, a: int, k: int) -> int:
        """a raised to the p^k."""
        return self.pow_(a, self.p ** (k % self.t))

    # -- vectorized arithmetic on int64 numpy arrays -------------------------

    def _require_tables(self):
        if self._log is None:
            raise FieldError(f"vectorized ops need q <= {_TABLE_LIMIT}, got {self.q}")

    def vadd(self, a, b):
        p = self.p
        if p == 2:
            return np.bitwise_xor(a, b)
        if self.t == 1:
            return (a + b) % p
        a = np.asarray(a)
        b = np.asarray(b)
        if self._spread is not None:
            return self._unspread[self._spread[a] + self._spread[b]]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        mult = 1
        for _ in range(self.t):
            out += (a % p + b % p) % p * mult
            a = a // p
            b = b // p
            mult *= p
        return out

    def vneg(self, a):
        p = self.p
        if p == 2:
            return np.array(a, copy=True)
        if self.t == 1:
            return (-np.asarray(a)) % p
        a = np.asarray(a)
        if self._spread is not None:
            return self._np_neg[a]
        out = np.zeros(a.shape, dtype=np.int64)
        mult = 1
        for _ in range(self.t):
            out += (-(a % p)) % p * mult
            a = a // p
            mult *= p
        return out

    def vsub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.t == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        self._require_tables()
        a = np.asarray(a)
        b = np.asarray(b)
        out = self._np_exp[self._np_log[a] + self._np_log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        self._require_tables()
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroInverseError("0 has no multiplicative inverse")
        return self._np_exp[self.q - 1 - self._np_log[a]]

    def vlog(self, a):
        """Discrete log of nonzero codes; -1 marks zero entries."""
        self._require_tables()
        return self._np_log[np.asarray(a)]

    def spread_codes(self, a):
        """Spread representation of codes, or None if unavailable.

        Feed the result to vmulsub_spread to evaluate c - a*b with two
        table gathers per element instead of seven.
        """
        if self._spread is None:
            return None
        return self._spread[np.asarray(a)]

    def vmulsub_spread_log(self, sc, a, b):
        """Discrete logs of c - a*b, with c pre-spread (sc = spread_codes(c)).

        Returns -1 where the difference is zero.  Two large gathers per
        element: log-sum -> spread(-product), then spread-sum -> log.
        """
        if self._msneg is None:
            # spread(-exp[l]) for every unreduced log sum l, plus a 0 slot
            self._msneg = np.concatenate(
                [self._spread[self._np_neg[self._np_exp]],
                 np.zeros(1, dtype=np.int64)])
            self._unspread_log = self._np_log[self._unspread]
        zero_slot = 2 * (self.q - 1)
        a = np.asarray(a)
        b = np.asarray(b)
        lsum = self._np_log[a] + self._np_log[b]
        lsum = np.where((a == 0) | (b == 0), zero_slot, lsum)
        return self._unspread_log[sc + self._msneg[lsum]]

    # -- subfields -----------------------------------------------------------

    def subfield(self, e: int) -> "SubfieldHandle":
        if self.t % e != 0:
            raise NonDivisorDegreeError(f"{e} does not divide {self.t}")
        if e not in self._subfields:
            self._subfields[e] = SubfieldHandle(self, e)
        return self._subfields[e]


class SubfieldHandle:
    """The subfield GF(p^e) inside GF(p^t), with its own standalone spec.

    ``embed`` maps codes of the standalone GF(p^e) into the big field by
    evaluating at a root of the small modulus; membership of a big code is
    the Frobenius fixed-point test x^(p^e) == x.
    """

    def __init__(self, big: FieldSpec, e: int):
        self.big = big
        self.e = e
        self.q0 = big.p ** e
        self.field = big if e == big.t else FieldSpec(big.p, e)
        root = self._find_root()
        self.root = root
        emb = []
        for code in range(self.q0):
            digits = _code_to_poly(code, big.p)
            acc, pw = 0, 1
            for d in digits:
                acc = big.add(acc, big.mul(d % big.p, pw))
                pw = big.mul(pw, root)
            emb.append(acc)
        self.embed_table = tuple(emb)
        self._down = {v: i for i, v in enumerate(emb)}
        member = np.zeros(big.q, dtype=bool)
        member[list(emb)] = True
        self.member_mask = member

    def _find_root(self) -> int:
        big = self.big
        if self.e == big.t:
            return big.p if big.t > 1 else 0  # class of x (or irrelevant for t=1)
        if self.e == 1:
            return 1
        mod = self.field.modulus
        for z in range(big.q):
            acc, pw = 0, 1
            for c in mod:
                acc = big.add(acc, big.mul(c, pw))
                pw = big.mul(pw, z)
            if acc == 0 and self._order_check(z):
                return z
        raise FieldError("no root of subfield modulus found")

    def _order_check(self, z: int) -> bool:
        # the root must generate a degree-e subfield: z^(p^e) == z and z not in
        # any smaller one is implied by being a root of an irreducible of degree e
        return self.big.frobenius(z, self.e) == z

    def embed(self, a: int) -> int:
        return self.embed_table[a]

    def down(self, a: int):
        """Inverse of ``embed`` for codes in the image, else None."""
        return self._down.get(a)

    def __contains__(self, a: int) -> bool:
        return bool(self.member_mask[a])

    def members(self):
        return list(self.embed_table)


def make_field(p: int, t: int, modulus="auto") -> FieldSpec:
    """Validated GF(p^t); ``modulus='auto'`` picks the smallest irreducible."""
    return FieldSpec(p, t, modulus)
