"""Folded linearized and folded skew Reed-Solomon codes."""
import math
from fractions import Fraction

from . import linalg
from .field import FieldError
from .skew import (SkewPoly, lclm, linear_factor, op_powers,
                   rem_evaluate, is_p_independent)


class CodeError(ValueError):
    pass


def fold(blocks, h):
    """Column-major reshape of each block of length h_i * N_i into an h_i x N_i matrix."""
    if len(blocks) != len(h):
        raise CodeError("one folding parameter per block")
    out = []
    for v, hi in zip(blocks, h):
        if hi <= 0 or len(v) % hi:
            raise CodeError(f"folding parameter {hi} does not divide block length {len(v)}")
        cols = len(v) // hi
        out.append([[v[c * hi + r] for c in range(cols)] for r in range(hi)])
    return out


def unfold(X):
    out = []
    for B in X:
        hi = len(B)
        cols = len(B[0]) if hi else 0
        out.append([B[r][c] for c in range(cols) for r in range(hi)])
    return out


def _sorted_shape(h, N):
    order = sorted(range(len(h)), key=lambda i: -h[i])
    return [h[i] for i in order], [N[i] for i in order]


def _split_index(N, dm1):
    """(j, lam) with dm1 = sum_{i<j} N_i + lam and 0 <= lam < N_j (0-based j)."""
    acc = 0
    for j, nj in enumerate(N):
        if dm1 < acc + nj:
            return j, dm1 - acc
        acc += nj
    return None


def min_distance_formula(h, N, k):
    """(d, j): d = N_1 + ... + N_j - floor((k - 1 - sum_{i>j} h_i N_i) / h_j), blocks sorted by h descending."""
    hs, Ns = _sorted_shape(h, N)
    ell = len(hs)
    for j in range(ell):
        tail = sum(hs[i] * Ns[i] for i in range(j + 1, ell))
        d = sum(Ns[:j + 1]) - (k - 1 - tail) // hs[j]
        if 0 <= d - sum(Ns[:j]) - 1 < Ns[j]:
            return d, j
    raise CodeError("no consistent split index; parameters out of range")


def singleton_exponent(h, N, d):
    """Max log_q |C| for a code in F_q^{h x N} with minimum distance d (per-block rows h_i)."""
    hs, Ns = _sorted_shape(h, N)
    total = sum(Ns)
    if not 1 <= d <= total + 1:
        raise CodeError(f"distance {d} outside 1..{total + 1}")
    if d - 1 == total:
        return 0
    j, lam = _split_index(Ns, d - 1)
    return sum(hs[i] * Ns[i] for i in range(j, len(hs))) - hs[j] * lam


def singleton_bound(h, N, d, m=1):
    """Exponent of q in the bound for codes over F_{q^m} with m*h_i rows."""
    return singleton_exponent([m * x for x in h], N, d)


class FlrsCode:
    """Folded linearized Reed-Solomon code with blocks h_i x N_i over F_{q^m}."""

    def __init__(self, ctx, h, N, k, a=None, a_indices=None, strict_fold=False):
        self.ctx = ctx
        self.h = tuple(int(x) for x in h)
        self.N = tuple(int(x) for x in N)
        self.k = int(k)
        if len(self.h) != len(self.N) or not self.h:
            raise CodeError("h and N must be nonempty and of equal length")
        self.ell = len(self.h)
        if math.gcd(ctx.u, ctx.m) != 1:
            raise CodeError("codes need gcd(u, m) = 1 so that sigma fixes exactly F_q")
        for hi, ni in zip(self.h, self.N):
            if hi < 1 or ni < 1:
                raise CodeError("folding parameters and block lengths must be positive")
            if ni > (hi if strict_fold else ctx.m * hi):
                raise CodeError(f"folded length N_i={ni} too large for folding parameter h_i={hi}")
            if hi * ni > ctx.m:
                raise CodeError(f"block length {hi * ni} exceeds m={ctx.m}")
        self.n_blocks = tuple(hi * ni for hi, ni in zip(self.h, self.N))
        self.n = sum(self.n_blocks)
        if not 1 <= self.k <= self.n:
            raise CodeError(f"dimension k={k} outside 1..{self.n}")
        if a is None:
            if a_indices is None:
                a_indices = range(self.ell)
            a_indices = list(a_indices)
            if len(a_indices) != self.ell:
                raise CodeError("one evaluation parameter index per block")
            try:
                a = [ctx.representative(i) for i in a_indices]
            except FieldError as exc:
                raise CodeError(str(exc)) from None
            if len(set(a_indices)) != len(a_indices):
                raise CodeError("evaluation parameter indices must be distinct")
        self.a_indices = None if a_indices is None else tuple(a_indices)
        self.a = tuple(a)
        if len(self.a) != self.ell:
            raise CodeError("one evaluation parameter per block")
        for i in range(self.ell):
            if self.a[i] == ctx.d:
                raise CodeError("evaluation parameters must avoid the class of d")
            for j in range(i):
                if ctx.are_conjugate(self.a[i], self.a[j]):
                    raise CodeError("evaluation parameters must be pairwise non-conjugate")
        self.order = sorted(range(self.ell), key=lambda i: -self.h[i])
        F = ctx.field
        self.locators = [[F.pow(ctx.alpha, j) for j in range(ni)] for ni in self.n_blocks]
        # gen[i][pos] = (D_{a_i}^0(beta_pos), ..., D_{a_i}^{k-1}(beta_pos))
        self.gen = [[op_powers(ctx, ai, b, self.k) for b in betas]
                    for ai, betas in zip(self.a, self.locators)]

    def __repr__(self):
        return f"FlrsCode(q={self.ctx.q}, m={self.ctx.m}, h={self.h}, N={self.N}, k={self.k})"

    @property
    def rate(self):
        return Fraction(self.k, self.n)

    def message(self, coeffs):
        if len(coeffs) > self.k:
            raise CodeError("message polynomial degree must be below k")
        return SkewPoly(self.ctx, coeffs)

    def encode_vector(self, f):
        """Unfolded codeword blocks: f(beta^{(i)})_{a_i}."""
        coeffs = f.coeffs if isinstance(f, SkewPoly) else tuple(f)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) > self.k:
            raise CodeError(f"message degree {len(coeffs) - 1} not below k={self.k}")
        F = self.ctx.field
        mul, add = F.mul, F.add
        out = []
        for gblock in self.gen:
            row = []
            for g in gblock:
                acc = 0
                for c, x in zip(coeffs, g):
                    if c and x:
                        acc = add(acc, mul(c, x))
                row.append(acc)
            out.append(row)
        return out

    def encode(self, f):
        return fold(self.encode_vector(f), self.h)

    def min_distance(self):
        return min_distance_formula(self.h, self.N, self.k)[0]

    def singleton_exponent(self, d=None):
        return singleton_bound(self.h, self.N, self.min_distance() if d is None else d, self.ctx.m)

    def is_msrd(self):
        """Divisibility test: h_j divides k - sum_{i>j} h_i N_i at the split index j of the distance."""
        _, j = min_distance_formula(self.h, self.N, self.k)
        hs, Ns = _sorted_shape(self.h, self.N)
        tail = sum(hs[i] * Ns[i] for i in range(j + 1, self.ell))
        return (self.k - tail) % hs[j] == 0

    def meets_strict_divisibility(self):
        """The stronger sufficient condition: h_j divides k and every h_i N_i with i > j."""
        _, j = min_distance_formula(self.h, self.N, self.k)
        hs, Ns = _sorted_shape(self.h, self.N)
        hj = hs[j]
        return self.k % hj == 0 and all((hs[i] * Ns[i]) % hj == 0 for i in range(j + 1, self.ell))

    def zero_tuple(self):
        return [[[0] * ni for _ in range(hi)] for hi, ni in zip(self.h, self.N)]

    def add(self, X, Y):
        F = self.ctx.field
        return [[[F.add(x, y) for x, y in zip(rx, ry)] for rx, ry in zip(BX, BY)] for BX, BY in zip(X, Y)]

    def sub(self, X, Y):
        F = self.ctx.field
        return [[[F.sub(x, y) for x, y in zip(rx, ry)] for rx, ry in zip(BX, BY)] for BX, BY in zip(X, Y)]

    def weight(self, X):
        return linalg.sum_rank_weight(self.ctx, X)


def is_msrd_by_bound(code):
    """Independent check: equality in the Singleton-like bound at the code's distance."""
    return code.singleton_exponent() == code.ctx.m * code.k


# ---------------------------------------------------------------- skew side


def isometry_map(ctx, X, h=None):
    """Divide each unfolded coordinate by its locator power alpha^{position}."""
    return _scale_positions(ctx, X, h, inverse=True)


def isometry_inv(ctx, X, h=None):
    return _scale_positions(ctx, X, h, inverse=False)


def _scale_positions(ctx, X, h, inverse):
    hs = [len(B) for B in X]
    if h is None:
        h = hs[0] if hs else 1
    if any(x != h for x in hs):
        raise CodeError("the isometry needs the same folding parameter in every block")
    F = ctx.field
    out = []
    for B in X:
        cols = len(B[0]) if B else 0
        nb = [[0] * cols for _ in range(h)]
        for c in range(cols):
            for r in range(h):
                p = F.pow(ctx.alpha, c * h + r)
                nb[r][c] = F.div(B[r][c], p) if inverse else F.mul(B[r][c], p)
        out.append(nb)
    return out


def skew_points(ctx, a, h, N):
    """P-basis {D_{a_i}(alpha^{jh}) / alpha^{jh}} for every block."""
    F = ctx.field
    out = []
    for ai, ni in zip(a, N):
        for j in range(ni):
            b = F.pow(ctx.alpha, j * h)
            out.append(F.div(ctx.op(ai, b), b))
    return out


def skew_weight_vector(tctx, x, B):
    """deg lclm(x - b_i^{x_i}) over nonzero x_i, in the ring over tctx."""
    if len(x) != len(B):
        raise CodeError("vector and P-basis differ in length")
    factors = [linear_factor(tctx, tctx.conjugate(b, xi)) for b, xi in zip(B, x) if xi]
    if not factors:
        return 0
    return lclm(factors).degree


def collapse_columns(tctx, X):
    """A tuple of h x N_i blocks as one vector over F_{q^{mh}} (basis 1, w, ..., w^{h-1})."""
    out = []
    for Bk in X:
        for c in range(len(Bk[0]) if Bk else 0):
            out.append(tctx.from_column([Bk[r][c] for r in range(len(Bk))]))
    return out


def skew_weight(ctx, X, a, B=None, check=False):
    """Skew weight of a tuple of h x N_i matrices (uniform h)."""
    h = len(X[0])
    tctx = ctx.tower(h)
    N = [len(Bk[0]) for Bk in X]
    if B is None:
        B = skew_points(ctx, a, h, N)
    if check and not is_p_independent(tctx, B):
        raise CodeError("evaluation points are not P-independent")
    return skew_weight_vector(tctx, collapse_columns(tctx, X), B)


class FsrsCode:
    """Folded skew Reed-Solomon code (zero derivation, one folding parameter)."""

    def __init__(self, ctx, h, N, k, a=None, a_indices=None):
        if ctx.d != 0:
            raise CodeError("folded skew codes are defined for the zero derivation only")
        self.ctx = ctx
        self.h = int(h)
        self.flrs = FlrsCode(ctx, [self.h] * len(N), N, k, a=a, a_indices=a_indices)
        self.N = self.flrs.N
        self.k = self.flrs.k
        self.a = self.flrs.a
        self.ell = self.flrs.ell
        F = ctx.field
        self.offset = F.div(ctx.aut(ctx.alpha), ctx.alpha)
        self.points = [[F.mul(F.pow(self.offset, j), ai) for j in range(self.h * ni)]
                       for ai, ni in zip(self.a, self.N)]

    def __repr__(self):
        return f"FsrsCode(q={self.ctx.q}, m={self.ctx.m}, h={self.h}, N={self.N}, k={self.k})"

    def encode(self, f):
        if not isinstance(f, SkewPoly):
            f = SkewPoly(self.ctx, f)
        if len(f.coeffs) > self.k:
            raise CodeError("message degree must be below k")
        return fold([[rem_evaluate(f, b) for b in pts] for pts in self.points], [self.h] * self.ell)

    def min_skew_distance(self):
        return fsrs_min_skew_distance(sum(self.N), self.h, self.k)

    def skew_weight(self, X):
        return skew_weight(self.ctx, X, self.a)

    def classes_stay_distinct(self):
        """True iff the a_i are still pairwise non-conjugate over F_{q^{mh}}.

        Only then does the isometry turn sum-rank weight into skew weight exactly;
        otherwise the skew weight can fall below it.
        """
        tctx = self.ctx.tower(self.h)
        return not any(tctx.are_conjugate(x, y) for i, x in enumerate(self.a) for y in self.a[i + 1:])


def fsrs_min_skew_distance(N_total, h, k):
    return N_total - (-(-k // h)) + 1
