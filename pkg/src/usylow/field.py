"""Exact arithmetic in F_{q^2} with its index-2 subfield F_q.

The field F_{q^2} (q = p^k) is built as F_p[x]/(f) for a monic
irreducible f of degree 2k.  Elements are encoded as integers: the
base-p digits of the index are the polynomial coefficients, so the
encoding is stable given (p, k, f).  Multiplication goes through
exp/log tables for a primitive element; for the small fields used in
group enumeration, full s x s addition and multiplication tables are
materialised as numpy arrays so the compiled kernels can run on them.

The subfield F_q sits inside F_{q^2} as the fixed field of the
conjugation x -> x^q, which is an involutive automorphism.
"""

from __future__ import annotations

import numpy as np

# Full s x s tables are only built up to this field size; all fields
# used by the enumeration pipeline (s <= 625) are far below it.
TABLE_LIMIT = 4096


class FieldError(ValueError):
    pass


# ----------------------------------------------------------------------
# Polynomial helpers over F_p (coefficient tuples, little-endian)
# ----------------------------------------------------------------------

def _poly_trim(f):
    i = len(f)
    while i > 0 and f[i - 1] == 0:
        i -= 1
    return tuple(f[:i])


def _poly_mulmod(a, b, mod, p):
    """(a * b) mod `mod` over F_p.  `mod` is monic."""
    deg = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = (res[i + j] + ai * bj) % p
    # reduce
    for i in range(len(res) - 1, deg - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(deg + 1):
                res[i - deg + j] = (res[i - deg + j] - c * mod[j]) % p
    return _poly_trim(res[:deg])


def _poly_powmod(a, e, mod, p):
    result = (1,)
    base = _poly_trim(a)
    while e > 0:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _poly_trim(out)


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        # a mod b, with b made monic on the fly
        lead_inv = pow(b[-1], p - 2, p)
        bm = tuple((c * lead_inv) % p for c in b)
        r = list(a)
        while len(_poly_trim(r)) >= len(bm) and _poly_trim(r):
            r = list(_poly_trim(r))
            shift = len(r) - len(bm)
            c = r[-1]
            for j, bj in enumerate(bm):
                r[shift + j] = (r[shift + j] - c * bj) % p
            r = list(_poly_trim(r))
        a, b = b, _poly_trim(r)
    return a


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_is_irreducible(f, p):
    """Rabin test: f (monic, degree d) is irreducible over F_p iff
    x^(p^d) = x mod f and gcd(x^(p^(d/r)) - x, f) = 1 for prime r | d."""
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    x = (0, 1)
    xq = _poly_powmod(x, p ** d, f, p)
    if _poly_trim(xq) != _poly_trim(x):
        return False
    for r in _prime_factors(d):
        h = _poly_sub(_poly_powmod(x, p ** (d // r), f, p), x, p)
        g = _poly_gcd(f, h, p)
        if len(_poly_trim(g)) - 1 >= 1:
            return False
    return True


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ----------------------------------------------------------------------
# FieldSpec
# ----------------------------------------------------------------------

class FieldSpec:
    """F_{q^2} = F_p[x]/(f), deg f = 2k, with conjugation x -> x^q.

    Elements are plain ints in [0, s), s = q^2; the base-p digits of an
    index are the polynomial coefficients (constant term first).
    """

    def __init__(self, p, k, modulus=None):
        if not _is_prime(p):
            raise FieldError(f"p={p} is not prime")
        self.p = p
        self.k = k
        self.q = p ** k
        self.s = self.q ** 2
        self.deg = 2 * k
        if self.s > 2 ** 16:
            raise FieldError(f"field size q^2={self.s} exceeds 2^16")

        if modulus is None:
            modulus = self._lowest_irreducible()
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != self.deg + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree 2k")
            if not poly_is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus

        self._build_log_tables()
        self._build_unary_tables()
        if self.s <= TABLE_LIMIT:
            self._build_full_tables()
        else:
            self.add_table = None
            self.mul_table = None
        self._validate()

    # -- construction ---------------------------------------------------

    def _lowest_irreducible(self):
        """Monic irreducible of degree 2k whose non-leading coefficient
        tuple has the smallest integer encoding sum(c_i p^i)."""
        for code in range(self.s):
            f = tuple(self.coeffs_of(code)) + (1,)
            if poly_is_irreducible(f, self.p):
                return f
        raise FieldError("no irreducible modulus found")  # unreachable

    def _mul_poly(self, a, b):
        fa = self.coeffs_of(a)
        fb = self.coeffs_of(b)
        return self.from_coeffs(_poly_mulmod(fa, fb, self.modulus, self.p))

    def _build_log_tables(self):
        s = self.s
        # find a primitive element by order testing
        factors = _prime_factors(s - 1)
        gen = None
        for g in range(2, s):
            if all(self._pow_slow(g, (s - 1) // r) != 1 for r in factors):
                gen = g
                break
        if gen is None:
            raise FieldError("no primitive element found")  # unreachable
        self.generator = gen
        exp = np.zeros(2 * (s - 1), dtype=np.int64)
        log = np.zeros(s, dtype=np.int64)
        v = 1
        for e in range(s - 1):
            exp[e] = v
            log[v] = e
            v = self._mul_poly(v, gen)
        if v != 1:
            raise FieldError("generator order mismatch")  # unreachable
        exp[s - 1:] = exp[: s - 1]
        self._exp = exp
        self._log = log

    def _pow_slow(self, a, e):
        r = 1
        b = a
        while e:
            if e & 1:
                r = self._mul_poly(r, b)
            b = self._mul_poly(b, b)
            e >>= 1
        return r

    def _build_unary_tables(self):
        s, p, q = self.s, self.p, self.q
        idx = np.arange(s, dtype=np.int64)
        digits = np.empty((s, self.deg), dtype=np.int64)
        t = idx.copy()
        for i in range(self.deg):
            digits[:, i] = t % p
            t //= p
        self._digits = digits
        # negation: digit-wise p - c
        neg = np.zeros(s, dtype=np.int64)
        w = 1
        for i in range(self.deg):
            neg += ((p - digits[:, i]) % p) * w
            w *= p
        self.neg_table = neg.astype(np.uint16)
        # conjugation x -> x^q via logs
        conj = np.zeros(s, dtype=np.int64)
        m = s - 1
        conj[self._exp[: m]] = self._exp[(np.arange(m) * q) % m]
        self.conj_table = conj.astype(np.uint16)
        # inverses
        inv = np.zeros(s, dtype=np.int64)
        inv[self._exp[: m]] = self._exp[(m - np.arange(m)) % m]
        self.inv_table = inv.astype(np.uint16)
        self.subfield_mask = self.conj_table == np.arange(s)

    def _build_full_tables(self):
        s, p = self.s, self.p
        d = self._digits
        w = np.array([p ** i for i in range(self.deg)], dtype=np.int64)
        add = ((d[:, None, :] + d[None, :, :]) % p) @ w
        self.add_table = add.astype(np.uint16).reshape(s * s)
        logs = self._log
        mul = self._exp[(logs[:, None] + logs[None, :]) % (s - 1)].copy()
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_table = mul.astype(np.uint16).reshape(s * s)

    def _validate(self):
        s, q = self.s, self.q
        c = self.conj_table
        if not np.array_equal(c[c], np.arange(s)):
            raise FieldError("conjugation is not an involution")
        if int(self.subfield_mask.sum()) != q:
            raise FieldError("fixed field of conjugation has wrong size")
        # additivity of conj (Frobenius); exhaustive for small s
        if self.add_table is not None and s <= 256:
            add = self.add_table.reshape(s, s)
            if not np.array_equal(c[add], add[np.ix_(c, c)]):
                raise FieldError("conjugation is not additive")
        else:
            rng = np.random.default_rng(0)
            for _ in range(2000):
                a, b = int(rng.integers(s)), int(rng.integers(s))
                if self.conj(self.add(a, b)) != self.add(self.conj(a), self.conj(b)):
                    raise FieldError("conjugation is not additive")

    # -- element encoding ----------------------------------------------

    def coeffs_of(self, a):
        out = []
        for _ in range(self.deg):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs):
        a = 0
        for c in reversed(coeffs[: self.deg]):
            a = a * self.p + (c % self.p)
        return a

    # -- arithmetic ------------------------------------------------------

    def add(self, a, b):
        if self.add_table is not None:
            return int(self.add_table[a * self.s + b])
        return self.from_coeffs(
            [(x + y) % self.p for x, y in zip(self.coeffs_of(a), self.coeffs_of(b))]
        )

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def neg(self, a):
        return int(self.neg_table[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return int(self.inv_table[a])

    def conj(self, a):
        return int(self.conj_table[a])

    def pow(self, a, e):
        if a == 0:
            return 0 if e else 1
        return int(self._exp[(self._log[a] * e) % (self.s - 1)])

    def in_subfield(self, a):
        return bool(self.subfield_mask[a])

    def trace(self, a):
        """a + conj(a), always in the subfield."""
        return self.add(a, self.conj(a))

    def trace_solution(self, c):
        """Some x with x + conj(x) = c (c must lie in the subfield)."""
        sol = self._trace_solutions()
        if c not in sol:
            raise FieldError(f"{c} is not a trace value")
        return sol[c]

    def trace_kernel(self):
        """All x with x + conj(x) = 0, in increasing encoding order."""
        return [x for x in range(self.s) if self.trace(x) == 0]

    def _trace_solutions(self):
        if not hasattr(self, "_trace_sol"):
            sol = {}
            for x in range(self.s):
                t = self.trace(x)
                if t not in sol:
                    sol[t] = x
            self._trace_sol = sol
        return self._trace_sol

    def subfield_elements(self):
        return [x for x in range(self.s) if self.subfield_mask[x]]

    def __repr__(self):
        return f"FieldSpec(p={self.p}, k={self.k}, modulus={self.modulus})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))


def field_create(p, k, modulus=None):
    """Construct F_{q^2} with subfield F_q, q = p^k."""
    return FieldSpec(p, k, modulus=modulus)
