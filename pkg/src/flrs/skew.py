"""Skew polynomials over F_{q^m} with x*b = sigma(b) x + delta(b)."""
from . import linalg

MINUS_INF = float("-inf")


class SkewError(ValueError):
    pass


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class SkewPoly:
    """Immutable skew polynomial; coeffs[i] multiplies x^i (coefficients on the left)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs=()):
        self.ctx = ctx
        self.coeffs = _trim(coeffs)

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INF

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"SkewPoly({list(self.coeffs)})"

    def _check(self, other):
        if other.ctx is not self.ctx and (other.ctx.field != self.ctx.field or other.ctx.u != self.ctx.u
                                          or other.ctx.d != self.ctx.d):
            raise SkewError("skew polynomials from different rings")

    def __add__(self, other):
        self._check(other)
        F = self.ctx.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return SkewPoly(self.ctx, out)

    def __neg__(self):
        F = self.ctx.field
        return SkewPoly(self.ctx, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SkewPoly):
            return skew_mul(self, other)
        return skew_mul(self, SkewPoly.const(self.ctx, other))

    def __rmul__(self, c):
        F = self.ctx.field
        return SkewPoly(self.ctx, [F.mul(c, x) for x in self.coeffs])

    def monic(self):
        if self.is_zero():
            return self
        F = self.ctx.field
        inv = F.inv(self.lead())
        return SkewPoly(self.ctx, [F.mul(inv, c) for c in self.coeffs])

    def op_eval(self, b, a):
        return op_evaluate(self, b, a)

    def rem_eval(self, b):
        return rem_evaluate(self, b)


def monomial(ctx, c, k):
    return SkewPoly(ctx, [0] * k + [c])


def skew_mul(f, g):
    f._check(g)
    ctx = f.ctx
    F = ctx.field
    if f.is_zero() or g.is_zero():
        return SkewPoly(ctx)
    if ctx.d == 0:
        out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
        for i, fi in enumerate(f.coeffs):
            if fi:
                for j, gj in enumerate(g.coeffs):
                    if gj:
                        out[i + j] = F.add(out[i + j], F.mul(fi, ctx.aut(gj, i)))
        return SkewPoly(ctx, out)
    # general derivation: accumulate f_i * (x^i g), with x^i g built one step at a time
    out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    cur = list(g.coeffs)
    for i, fi in enumerate(f.coeffs):
        if i:
            nxt = [0] * (len(cur) + 1)
            for j, c in enumerate(cur):
                if c:
                    nxt[j + 1] = F.add(nxt[j + 1], ctx.aut(c))
                    nxt[j] = F.add(nxt[j], ctx.derivation(c))
            cur = nxt
        if fi:
            for j, c in enumerate(cur):
                if c:
                    out[j] = F.add(out[j], F.mul(fi, c))
    return SkewPoly(ctx, out)


# ---------------------------------------------------------------- evaluation maps


def op_power(ctx, a, b, i):
    """D_a^i(b) with D_a(b) = sigma(b) a + delta(b)."""
    if i < 0:
        raise SkewError("negative operator power")
    for _ in range(i):
        b = ctx.op(a, b)
    return b


def op_powers(ctx, a, b, count):
    """[D_a^0(b), ..., D_a^{count-1}(b)]."""
    out = [0] * count
    if count:
        out[0] = b
    for i in range(1, count):
        b = ctx.op(a, b)
        out[i] = b
    return out


def op_evaluate(f, b, a):
    """Generalized operator evaluation f(b)_a = sum f_i D_a^i(b)."""
    ctx = f.ctx
    F = ctx.field
    acc = 0
    for c in f.coeffs:
        if c:
            acc = F.add(acc, F.mul(c, b))
        b = ctx.op(a, b)
    return acc


def moore_matrix(ctx, d, x_blocks, a):
    """d x n matrix; entry (i, j) in block l is D_{a_l}^i(x_j)."""
    if len(x_blocks) != len(a):
        raise SkewError("need one evaluation parameter per block")
    cols = []
    for xs, al in zip(x_blocks, a):
        for x in xs:
            cols.append(op_powers(ctx, al, x, d))
    return [[col[i] for col in cols] for i in range(d)]


def _require_zero_derivation(ctx):
    if ctx.d != 0:
        raise SkewError("only defined for the zero derivation")


def generalized_power(ctx, a, i):
    """N_i(a) = prod_{k<i} sigma^k(a)."""
    _require_zero_derivation(ctx)
    F = ctx.field
    out = 1
    for k in range(i):
        out = F.mul(out, ctx.aut(a, k))
    return out


def generalized_powers(ctx, a, count):
    F = ctx.field
    out = [1] * count
    cur = a
    for i in range(1, count):
        out[i] = F.mul(out[i - 1], cur)
        cur = ctx.aut(cur)
    return out


def rem_evaluate(f, b):
    """f[b]: remainder of right division by x - b, computed as sum f_i N_i(b)."""
    ctx = f.ctx
    _require_zero_derivation(ctx)
    F = ctx.field
    acc, norm, cur = 0, 1, b
    for i, c in enumerate(f.coeffs):
        if c:
            acc = F.add(acc, F.mul(c, norm))
        norm = F.mul(norm, cur)
        cur = ctx.aut(cur)
    return acc


def right_divmod(f, g):
    """(quotient, remainder) with f = quotient * g + remainder, deg remainder < deg g."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero skew polynomial")
    ctx = f.ctx
    F = ctx.field
    n = g.degree
    lg = g.lead()
    quot = [0] * max(len(f.coeffs) - n, 0)
    rem = f
    while not rem.is_zero() and rem.degree >= n:
        k = rem.degree - n
        c = F.div(rem.lead(), ctx.aut(lg, k))
        quot[k] = c
        rem = rem - skew_mul(monomial(ctx, c, k), g)
    return SkewPoly(ctx, quot), rem


def left_divmod(f, g):
    """(quotient, remainder) with f = g * quotient + remainder."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero skew polynomial")
    ctx = f.ctx
    F = ctx.field
    n = g.degree
    quot = [0] * max(len(f.coeffs) - n, 0)
    rem = f
    while not rem.is_zero() and rem.degree >= n:
        k = rem.degree - n
        c = ctx.aut(F.div(rem.lead(), g.lead()), -n)
        quot[k] = c
        rem = rem - skew_mul(g, monomial(ctx, c, k))
    return SkewPoly(ctx, quot), rem


def rem_op_bridge(f, b, a):
    """Both sides of f[D_a(b) / b] = f(b)_a / b."""
    if b == 0:
        raise SkewError("b must be nonzero")
    ctx = f.ctx
    F = ctx.field
    binv = F.inv(b)
    left = rem_evaluate(f, F.mul(ctx.op(a, b), binv))
    right = F.mul(op_evaluate(f, b, a), binv)
    return left, right


def scaled_point_eval(f, c, j, b):
    """f[c^j b] computed through the twisted polynomial with coefficients f_i N_i(c^j)."""
    ctx = f.ctx
    F = ctx.field
    norms = generalized_powers(ctx, F.pow(c, j), len(f.coeffs))
    twisted = SkewPoly(ctx, [F.mul(fi, ni) for fi, ni in zip(f.coeffs, norms)])
    return rem_evaluate(twisted, b)


# ---------------------------------------------------------------- lclm and interpolation


def lclm_pair(f, g):
    """Monic least common left multiple via the right extended Euclidean algorithm."""
    ctx = f.ctx
    if f.is_zero() or g.is_zero():
        return SkewPoly(ctx)
    one, zero = SkewPoly.const(ctx, 1), SkewPoly(ctx)
    r0, r1 = f, g
    u0, u1 = one, zero
    while not r1.is_zero():
        quo, rem = right_divmod(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, u0 - skew_mul(quo, u1)
    return skew_mul(u1, f).monic()


def lclm(polys, ctx=None):
    polys = list(polys)
    if not polys:
        if ctx is None:
            raise SkewError("empty lclm needs a context")
        return SkewPoly.const(ctx, 1)
    out = polys[0].monic()
    for p in polys[1:]:
        out = lclm_pair(out, p)
    return out


def linear_factor(ctx, c):
    """x - c."""
    return SkewPoly(ctx, (ctx.field.neg(c), 1))


def is_p_independent(ctx, points):
    _require_zero_derivation(ctx)
    if not points:
        return True
    return lclm([linear_factor(ctx, b) for b in points]).degree == len(points)


def rem_interpolate(ctx, points, values):
    """Unique f with deg f < len(points) and f[b_j] = values[j]."""
    _require_zero_derivation(ctx)
    if len(points) != len(values):
        raise SkewError("points and values differ in length")
    n = len(points)
    if n == 0:
        return SkewPoly(ctx)
    F = ctx.field
    V = [generalized_powers(ctx, b, n) for b in points]
    sol = linalg.solve(F, V, list(values))
    if sol is None or sol[1]:
        raise SkewError("points are not P-independent")
    return SkewPoly(ctx, sol[0])


def annihilator(ctx, x_blocks, a):
    """Monic minimal polynomial with f(x)_{a_l} = 0 for every x in block l (zero derivation)."""
    _require_zero_derivation(ctx)
    F = ctx.field
    factors = []
    for xs, al in zip(x_blocks, a):
        for x in xs:
            if x:
                factors.append(linear_factor(ctx, F.div(ctx.op(al, x), x)))
    return lclm(factors, ctx)


class MultiSkewPoly:
    """Q(x, y_1..y_s) = Q_0(x) + Q_1(x) y_1 + ... + Q_s(x) y_s."""

    def __init__(self, components):
        self.components = list(components)
        if len(self.components) < 2:
            raise SkewError("need s >= 1")
        self.ctx = self.components[0].ctx

    @property
    def s(self):
        return len(self.components) - 1

    def __getitem__(self, r):
        return self.components[r]

    def evaluate(self, point, a):
        """E_Q(p)_a = sum_r Q_r(p_r)_a."""
        F = self.ctx.field
        acc = 0
        for Qr, pr in zip(self.components, point):
            acc = F.add(acc, op_evaluate(Qr, pr, a))
        return acc

    def compose(self, f, alpha):
        """P(x) = Q_0 + sum_r Q_r * f * alpha^{r-1}."""
        ctx = self.ctx
        F = ctx.field
        out = self.components[0]
        for r in range(1, len(self.components)):
            fa = skew_mul(f, SkewPoly.const(ctx, F.pow(alpha, r - 1)))
            out = out + skew_mul(self.components[r], fa)
        return out

    def __repr__(self):
        return f"MultiSkewPoly({self.components})"
