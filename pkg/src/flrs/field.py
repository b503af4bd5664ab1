"""Finite fields as nested polynomial quotients, plus the automorphism/derivation context.

Elements are plain Python ints: the base-q integer of the little-endian
coordinate vector over the immediate base field.  Because every level encodes
its digits the same way, an element of any tower level is also the base-p
integer of its coordinates over the prime field, so addition is always
digit-wise mod p.
"""
import itertools
import json
import math
import os
from functools import lru_cache

from sympy import factorint, isprime, perfect_power

TABLE_LIMIT = 1 << 16
ADD_TABLE_LIMIT = 1024

_MODULI_PATH = os.path.join(os.path.dirname(__file__), "moduli.json")


class FieldError(ValueError):
    pass


def _digits(x, base, n):
    out = [0] * n
    for i in range(n):
        x, out[i] = divmod(x, base)
    return out


def _undigits(ds, base):
    x = 0
    for c in reversed(ds):
        x = x * base + c
    return x


class GF:
    """GF(base.order ** degree) = base[z] / modulus, or a prime field when base is None."""

    def __init__(self, base=None, modulus=None, p=None, build_tables=True):
        if base is None:
            if p is None or not isprime(p):
                raise FieldError(f"prime field needs a prime, got {p}")
            self.base = None
            self.p = p
            self.degree = 1
            self.order = p
            self.modulus = None
            self.prime_degree = 1
        else:
            modulus = list(modulus)
            if len(modulus) < 2 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree >= 1")
            self.base = base
            self.p = base.p
            self.degree = len(modulus) - 1
            self.order = base.order ** self.degree
            self.modulus = tuple(modulus)
            self.prime_degree = base.prime_degree * self.degree
        self.zero, self.one = 0, 1
        self.char2 = self.p == 2
        self._tables = False
        self._add_table = None
        self._gen = None
        if build_tables and self.order <= TABLE_LIMIT and self.base is not None:
            self._build_tables()

    # ---- identity / misc

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.base.order}^{self.degree})"

    def __eq__(self, other):
        return (isinstance(other, GF) and self.order == other.order
                and self.modulus == other.modulus and self.base == other.base)

    def __hash__(self):
        return hash((self.order, self.modulus))

    def __reduce__(self):
        return (GF, (self.base, self.modulus, self.p if self.base is None else None))

    def elements(self):
        return range(self.order)

    def coords(self, x):
        """Coordinates over the immediate base field, little-endian."""
        return _digits(x, self.base.order, self.degree) if self.base else [x]

    def from_coords(self, cs):
        return _undigits(cs, self.base.order) if self.base else cs[0]

    def subfield_chain(self):
        out, f = [], self
        while f is not None:
            out.append(f)
            f = f.base
        return out

    # ---- addition (base-p digitwise)

    def add(self, a, b):
        if self.char2:
            return a ^ b
        if self.base is None:
            s = a + b
            return s - self.p if s >= self.p else s
        if self._add_table is not None:
            return self._add_table[a][b]
        if self._tables:
            if a == 0:
                return b
            if b == 0:
                return a
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % self._n]
            return 0 if z < 0 else self._exp[la + z]
        return self._digit_add(a, b)

    def _digit_add(self, a, b):
        if self.char2:
            return a ^ b
        p, out, mult = self.p, 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            s = x + y
            if s >= p:
                s -= p
            out += s * mult
            mult *= p
        return out

    def neg(self, a):
        if self.char2 or a == 0:
            return a
        if self.base is None:
            return self.p - a
        if self._tables:
            return self._exp[self._log[a] + self._half]
        p, out, mult = self.p, 0, 1
        while a:
            a, x = divmod(a, p)
            out += ((p - x) % p) * mult
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    # ---- multiplication

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._tables:
            return self._exp[self._log[a] + self._log[b]]
        if self.base is None:
            return a * b % self.p
        return self._poly_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._tables:
            return self._exp[self._n - self._log[a]]
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self._tables:
            return self._exp[(self._log[a] * e) % self._n]
        if self.base is None:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def _poly_mul(self, a, b):
        B = self.base
        bo, m = B.order, self.degree
        da, db = _digits(a, bo, m), _digits(b, bo, m)
        if B.base is None:
            p = B.p
            prod = [0] * (2 * m - 1)
            for i, x in enumerate(da):
                if x:
                    for j, y in enumerate(db):
                        prod[i + j] += x * y
            for i in range(2 * m - 2, m - 1, -1):
                c = prod[i] % p
                if c:
                    base_i = i - m
                    for j, mj in self._mod_terms:
                        prod[base_i + j] -= c * mj
            return _undigits([c % p for c in prod[:m]], bo)
        mul, add, neg = B.mul, B.add, B.neg
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = add(prod[i + j], mul(x, y))
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                c = neg(c)
                for j, mj in self._mod_terms:
                    prod[i - m + j] = add(prod[i - m + j], mul(c, mj))
        return _undigits(prod[:m], bo)

    @property
    def _mod_terms(self):
        t = self.__dict__.get("_mod_terms_cache")
        if t is None:
            t = [(j, c) for j, c in enumerate(self.modulus[:-1]) if c]
            self.__dict__["_mod_terms_cache"] = t
        return t

    # ---- generator and tables

    def generator(self):
        """A fixed primitive element (z itself when the modulus is primitive)."""
        if self._gen is None:
            self._gen = self._find_generator()
        return self._gen

    def _find_generator(self):
        if self.order == 2:
            return 1
        fac = list(factorint(self.order - 1))
        start = self.base.order if self.base is not None and self.degree > 1 else 2
        cands = itertools.chain([start], (c for c in range(2, self.order) if c != start))
        for g in cands:
            if all(self._pow_slow(g, (self.order - 1) // r) != 1 for r in fac):
                return g
        raise FieldError("no primitive element found")

    def _pow_slow(self, a, e):
        if self.base is None:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self._poly_mul(result, a)
            e >>= 1
            if e:
                a = self._poly_mul(a, a)
        return result

    def _build_tables(self):
        Q = self.order
        n = Q - 1
        g = self._find_generator()
        self._gen = g
        exp = [0] * (2 * n + 1)
        log = [-1] * Q
        step = self._times_z if g == self.base.order else (lambda v: self._poly_mul(v, g))
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = step(x)
        if x != 1 or min(log[1:]) < 0:
            raise FieldError("generator does not have full order")
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        zech = [0] * n
        for i in range(n):
            s = self._digit_add(1, exp[i]) if not self.char2 else 1 ^ exp[i]
            zech[i] = log[s] if s else -1
        self._exp, self._log, self._zech, self._n = exp, log, zech, n
        self._half = n // 2 if self.p != 2 else 0
        self._tables = True
        if not self.char2 and Q <= ADD_TABLE_LIMIT:
            import numpy as np
            vals = np.arange(Q, dtype=np.int64)
            summed = np.zeros((Q, Q), dtype=np.int64)
            scale = 1
            for _ in range(self.prime_degree):
                dig = (vals // scale) % self.p
                summed += ((dig[:, None] + dig[None, :]) % self.p) * scale
                scale *= self.p
            self._add_table = summed.tolist()

    def _times_z(self, x):
        bo, m = self.base.order, self.degree
        top_unit = bo ** (m - 1)
        top, rest = divmod(x, top_unit)
        x = rest * bo
        if top:
            x = self._digit_add(x, self._reduction_vectors()[top])
        return x

    def _reduction_vectors(self):
        r = self.__dict__.get("_redvec")
        if r is None:
            B = self.base
            r = [0] * B.order
            for t in range(1, B.order):
                r[t] = _undigits([B.neg(B.mul(t, c)) for c in self.modulus[:-1]], B.order)
            self.__dict__["_redvec"] = r
        return r

    @property
    def has_tables(self):
        return self._tables

    def log(self, a):
        if not self._tables:
            raise FieldError("log only available on table fields")
        return self._log[a]

    def exp(self, i):
        if not self._tables:
            raise FieldError("exp only available on table fields")
        return self._exp[i % self._n]

    # ---- F_p helpers

    def prime_coords(self, x):
        return _digits(x, self.p, self.prime_degree)

    def from_prime_coords(self, cs):
        return _undigits(cs, self.p)

    def embed_base(self, b):
        """Image of a base-field element (coordinate 0)."""
        return b

    def is_in_subfield(self, x, sub):
        return x < sub.order


# ---------------------------------------------------------------- polynomials over a GF


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(F, a, b, mod):
    """(a*b) mod monic mod, polynomials over F as coefficient lists."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = F.add(prod[i + j], F.mul(x, y))
    return _pmod(F, prod, mod)


def _pmod(F, a, mod):
    a = list(a)
    d = len(mod) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            c = F.neg(c)
            for j in range(d):
                if mod[j]:
                    a[i - d + j] = F.add(a[i - d + j], F.mul(c, mod[j]))
            a[i] = 0
    return _ptrim(a[:d] if len(a) > d else a)


def _ppowmod_x(F, e, mod):
    result, base = [1], [0, 1]
    base = _pmod(F, base, mod)
    while e:
        if e & 1:
            result = _pmulmod(F, result, base, mod)
        e >>= 1
        if e:
            base = _pmulmod(F, base, base, mod)
    return result


def is_primitive_poly(F, coeffs):
    """coeffs monic, low-first, over F.  True iff z has order |F|^deg - 1 modulo it."""
    d = len(coeffs) - 1
    if coeffs[0] == 0:
        return False
    n = F.order ** d - 1
    if _ppowmod_x(F, n, coeffs) != [1]:
        return False
    for r in factorint(n):
        if _ppowmod_x(F, n // r, coeffs) == [1]:
            return False
    return True


def search_primitive_modulus(F, degree):
    """Smallest primitive monic polynomial of the given degree over F, ranked by the base-|F| integer of its lower coefficients."""
    if degree == 1:
        # z - g with g primitive; smallest by encoding of -g
        n = F.order - 1
        fac = list(factorint(n)) if n > 1 else []
        for c0 in range(1, F.order):
            g = F.neg(c0)
            if all(F.pow(g, n // r) != 1 for r in fac):
                return [c0, 1]
        raise FieldError("no primitive linear polynomial")
    q = F.order
    for code in range(1, q ** degree):
        cs = _digits(code, q, degree)
        if cs[0] == 0:
            continue
        if is_primitive_poly(F, cs + [1]):
            return cs + [1]
    raise FieldError("no primitive polynomial found")


# ---------------------------------------------------------------- canonical field construction


@lru_cache(maxsize=None)
def _moduli_table():
    try:
        with open(_MODULI_PATH) as fh:
            raw = json.load(fh)
    except OSError:
        return {}
    return {tuple(int(v) for v in k.split(",")): tuple(c) for k, c in raw["moduli"].items()}


def prime_power(q):
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    if isprime(q):
        return q, 1
    pp = perfect_power(q)
    if pp and isprime(pp[0]):
        return int(pp[0]), int(pp[1])
    raise FieldError(f"{q} is not a prime power")


def canonical_modulus(base_order, degree, use_table=True):
    if use_table:
        hit = _moduli_table().get((base_order, degree))
        if hit is not None:
            return list(hit)
    return search_primitive_modulus(canonical_field(base_order), degree)


@lru_cache(maxsize=None)
def tower_modulus(F, degree):
    """Primitive modulus over F itself; the stored table only applies to the canonical representation."""
    if F == canonical_field(F.order):
        return canonical_modulus(F.order, degree)
    return search_primitive_modulus(F, degree)


@lru_cache(maxsize=None)
def canonical_field(q):
    """The canonical field with q elements."""
    p, e = prime_power(q)
    Fp = _prime_field(p)
    if e == 1:
        return Fp
    return GF(Fp, canonical_modulus(p, e))


@lru_cache(maxsize=None)
def _prime_field(p):
    return GF(p=p)


@lru_cache(maxsize=None)
def extension(base_order, degree):
    """Canonical F_{base^degree} built directly over the canonical F_base."""
    B = canonical_field(base_order)
    if degree == 1:
        return B
    return GF(B, canonical_modulus(base_order, degree))


# ---------------------------------------------------------------- context


class FieldContext:
    """F_q subset F_{q^m} with sigma = theta^u and delta = d (Id - sigma)."""

    def __init__(self, q, m, u=1, d=0, field=None, alpha=None):
        self.q, self.m = q, m
        self.u = u % m if m else 0
        self.field = field if field is not None else extension(q, m)
        if self.field.order != q ** m:
            raise FieldError("field order does not match q^m")
        self.Fq = canonical_field(q) if field is None else _subfield_of_order(self.field, q)
        F = self.field
        self.modulus = F.modulus if F.order > q else None
        self.alpha = F.generator() if alpha is None else alpha
        self.d = d
        if not 0 <= d < F.order:
            raise FieldError("derivation scalar outside the field")
        self._aut_exp = [pow(q, (self.u * e) % m, F.order - 1) if m else 1 for e in range(m)]
        self._aut_tables = None
        if F.has_tables:
            n = F._n
            log, exp = F._log, F._exp
            self._aut_tables = []
            for e in range(m):
                k = pow(q, (self.u * e) % m) % n if n else 1
                tab = [0] * F.order
                for x in range(1, F.order):
                    tab[x] = exp[(log[x] * k) % n]
                self._aut_tables.append(tab)

    def __repr__(self):
        return f"FieldContext(q={self.q}, m={self.m}, u={self.u}, d={self.d})"

    def __reduce__(self):
        return (_rebuild_ctx, (self.q, self.m, self.u, self.d, self.field, self.alpha))

    @property
    def zero_derivation(self):
        return self.d == 0

    @property
    def fixed_order(self):
        """Order of the fixed field of sigma."""
        return self.q ** math.gcd(self.u, self.m)

    def aut(self, x, e=1):
        e %= self.m
        if e == 0 or x == 0:
            return x
        if self._aut_tables is not None:
            return self._aut_tables[e][x]
        return self.field.pow(x, self.q ** ((self.u * e) % self.m))

    def aut_table(self, e=1):
        if self._aut_tables is None:
            return None
        return self._aut_tables[e % self.m]

    def derivation(self, x):
        if self.d == 0:
            return 0
        F = self.field
        return F.mul(self.d, F.sub(x, self.aut(x)))

    def conjugate(self, a, c):
        """a^c = sigma(c) a c^-1 + delta(c) c^-1."""
        if c == 0:
            raise FieldError("conjugation by zero")
        F = self.field
        ci = F.inv(c)
        return F.add(F.mul(F.mul(self.aut(c), a), ci), F.mul(self.derivation(c), ci))

    def op(self, a, b):
        """D_a(b) = sigma(b) a + delta(b)."""
        F = self.field
        if self.d == 0:
            return F.mul(self.aut(b), a)
        return F.add(F.mul(self.aut(b), a), self.derivation(b))

    def are_conjugate(self, a, b):
        F = self.field
        if a == self.d or b == self.d:
            return a == b
        g = self.fixed_order - 1
        ratio = F.div(F.sub(a, self.d), F.sub(b, self.d))
        return F.pow(ratio, (F.order - 1) // g) == 1

    def conjugacy_representatives(self, count):
        g = self.fixed_order - 1
        if count > g:
            raise FieldError(f"only {g} nontrivial conjugacy classes available, asked for {count}")
        if count < 0:
            raise FieldError("negative count")
        F = self.field
        return [F.add(self.d, F.pow(self.alpha, j)) for j in range(count)]

    def representative(self, index):
        g = self.fixed_order - 1
        if not 0 <= index < g:
            raise FieldError(f"class index {index} outside 0..{g - 1}")
        F = self.field
        return F.add(self.d, F.pow(self.alpha, index))

    # F_q expansion over the polynomial basis (1, z, ..., z^{m-1})

    def expand(self, x):
        return _digits(x, self.q, self.m)

    def collapse(self, cs):
        return _undigits(cs, self.q)

    def expand_vector(self, v):
        """m x len matrix over F_q (list of rows)."""
        cols = [self.expand(x) for x in v]
        return [[c[r] for c in cols] for r in range(self.m)]

    def collapse_matrix(self, rows):
        return [self.collapse([rows[r][j] for r in range(self.m)]) for j in range(len(rows[0]) if rows else 0)]

    def tower(self, h):
        return TowerContext(self, h)


def _rebuild_ctx(q, m, u, d, field, alpha):
    return FieldContext(q, m, u, d, field=field, alpha=alpha)


def _subfield_of_order(F, q):
    for f in F.subfield_chain():
        if f.order == q:
            return f
    raise FieldError(f"no subfield of order {q} in the tower of {F}")


class TowerContext(FieldContext):
    """F_{q^{mh}} built as F_{q^m}[w]/T, sigma = theta^u on the big field.

    Basis gamma = (1, w, ..., w^{h-1}); an element's encoding is the base-q^m
    integer of its gamma-coordinates, so embed(a) = a for a in F_{q^m}.
    """

    def __init__(self, small, h):
        self.small, self.h = small, h
        if h == 1:
            big = small.field
        else:
            big = GF(small.field, tower_modulus(small.field, h))
        super().__init__(small.q, small.m * h, u=small.u, d=small.d, field=big,
                         alpha=small.alpha)
        # sigma on the big field is theta^u with theta the q-Frobenius; u stays the same.

    def embed(self, a):
        return a

    def project(self, x):
        if x >= self.small.field.order:
            raise FieldError("element is not in the small field")
        return x

    def to_column(self, x):
        """gamma-coordinates of x over the small field."""
        return _digits(x, self.small.field.order, self.h)

    def from_column(self, col):
        return _undigits(col, self.small.field.order)


def build_moduli_table(entries):
    """Compute moduli for (base_order, degree) pairs (used to regenerate moduli.json)."""
    out = {}
    for b, d in entries:
        out[f"{b},{d}"] = search_primitive_modulus(canonical_field(b), d)
    return out
