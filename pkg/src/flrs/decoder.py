"""Interpolation-based list and probabilistic unique decoding of folded linearized RS codes."""
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .codes import isometry_inv, unfold
from .skew import MultiSkewPoly, SkewPoly, op_powers, skew_mul

STANDARD, HIGH_RATE = "standard", "high_rate"
LIST, UNIQUE = "list", "unique"


class DecoderError(ValueError):
    """Parameters that admit no decoder."""


def _norm_variant(v):
    v = v.replace("-", "_")
    if v not in (STANDARD, HIGH_RATE):
        raise DecoderError(f"unknown variant {v!r}")
    return v


@dataclass(frozen=True)
class DecoderConfig:
    s: int = 1
    mu: int = 1
    variant: str = STANDARD
    mode: str = LIST

    def __post_init__(self):
        object.__setattr__(self, "variant", _norm_variant(self.variant))
        if self.mode not in (LIST, UNIQUE):
            raise DecoderError(f"unknown mode {self.mode!r}")
        if self.s < 1:
            raise DecoderError("s must be at least 1")
        if self.mu < 1:
            raise DecoderError("mu must be at least 1")

    @property
    def effective_mu(self):
        return self.mu if self.mode == UNIQUE else 1


# ---------------------------------------------------------------- points


def window_starts(h, N, s, variant=STANDARD):
    """0-based starting positions of the sliding windows inside each unfolded block."""
    variant = _norm_variant(variant)
    if s > min(h):
        raise DecoderError(f"s={s} exceeds min h_i={min(h)}")
    out = []
    for hi, ni in zip(h, N):
        if variant == STANDARD:
            out.append([c * hi + l for c in range(ni) for l in range(hi - s + 1)])
        else:
            out.append(list(range(hi * ni - s + 1)))
    return out


def point_count(h, N, s, variant=STANDARD):
    variant = _norm_variant(variant)
    if variant == STANDARD:
        return sum(ni * (hi - s + 1) for hi, ni in zip(h, N))
    return sum(hi * ni for hi, ni in zip(h, N)) - len(h) * (s - 1)


def build_points(code, R, s, variant=STANDARD):
    """Interpolation points per block: (alpha^w, r_w, ..., r_{w+s-1}) with w the 0-based window start."""
    F = code.ctx.field
    r = unfold(R)
    out = []
    for blk, starts in zip(r, window_starts(code.h, code.N, s, variant)):
        out.append([(F.pow(code.ctx.alpha, w),) + tuple(blk[w:w + s]) for w in starts])
    return out


def build_points_standard(code, R, s):
    return build_points(code, R, s, STANDARD)


def build_points_high_rate(code, R, s):
    return build_points(code, R, s, HIGH_RATE)


def degree_constraint(h, N, s, k, mu=1, variant=STANDARD):
    P = point_count(h, N, s, variant)
    D = -(-(P + s * (k - 1) + mu) // (s + 1))
    if D - k + 1 < 1:
        raise DecoderError(f"degree constraint D={D} leaves no room for Q_1..Q_s (need D >= k)")
    return D


def interpolation_columns(D, k, s):
    return D * (s + 1) - s * (k - 1)


def build_interpolation_matrix(code, points, D):
    """Rows: points block by block; columns: D powers of p_0, then D-k+1 powers of each p_r."""
    ctx, k = code.ctx, code.k
    rows = []
    for ai, pts in zip(code.a, points):
        for p in pts:
            row = op_powers(ctx, ai, p[0], D)
            for pr in p[1:]:
                row.extend(op_powers(ctx, ai, pr, D - k + 1))
            rows.append(row)
    return rows


def split_interpolation_vector(ctx, v, D, k, s):
    comps = [SkewPoly(ctx, v[:D])]
    w = D - k + 1
    for r in range(s):
        comps.append(SkewPoly(ctx, v[D + r * w:D + (r + 1) * w]))
    return MultiSkewPoly(comps)


def solve_interpolation(code, S, D, s):
    basis = linalg.kernel_basis(code.ctx.field, S, interpolation_columns(D, code.k, s))
    return basis


# ---------------------------------------------------------------- radii


def _weights(h, s, variant):
    if _norm_variant(variant) == STANDARD:
        return [hi - s + 1 for hi in h]
    return [hi + s - 1 for hi in h]


def radius_rhs(h, N, s, k, mu=1, variant=STANDARD, mode=LIST):
    """Right-hand side of the decoding-region inequality, exact."""
    variant = _norm_variant(variant)
    if variant == STANDARD:
        base = sum(ni * (hi - s + 1) for hi, ni in zip(h, N)) - k + 1
    else:
        base = sum(ni * hi for hi, ni in zip(h, N)) - len(h) * (s - 1) - k + 1
    rhs = Fraction(s, s + 1) * base
    if mode == UNIQUE:
        rhs -= Fraction(mu, s + 1)
    return rhs


def radius_ok(t_vec, h, N, s, k, mu=1, variant=STANDARD, mode=LIST):
    if s > min(h) or s < 1:
        return False
    lhs = sum(t * w for t, w in zip(t_vec, _weights(h, s, variant)))
    rhs = radius_rhs(h, N, s, k, mu, variant, mode)
    return lhs < rhs if mode == LIST else lhs <= rhs


def decoding_radius(h, N, s, k, mu=1, variant=STANDARD, mode=LIST):
    """(ball radius, outer radius): equal for uniform h; worst|best-case otherwise."""
    rhs = radius_rhs(h, N, s, k, mu, variant, mode)
    ws = _weights(h, s, variant)
    return rhs / max(ws), rhs / min(ws)


def format_value(x):
    """Two decimals, rounded half up, with one trailing zero dropped: 2.0, 2.33, 3.5."""
    x = Fraction(x)
    cents = (x * 100 + Fraction(1, 2)).__floor__()
    whole, frac = divmod(cents, 100)
    text = f"{whole}.{frac:02d}"
    return text[:-1] if text.endswith("0") else text


def format_radius(h, N, s, k, mu=1, variant=STANDARD, mode=LIST):
    ball, outer = decoding_radius(h, N, s, k, mu, variant, mode)
    if ball == outer:
        return format_value(ball)
    return f"{format_value(ball)}|{format_value(outer)}"


def failure_bound(k, q, m, mu=1):
    return Fraction(k) * Fraction(k, q ** m) ** mu


def normalized_radius(h, R, s, variant=STANDARD):
    R = Fraction(R)
    if _norm_variant(variant) == STANDARD:
        val = Fraction(s, s + 1) * (1 - h * R / (h - s + 1))
    else:
        val = Fraction(s, s + 1) * Fraction(h, h + s - 1) * (1 - R)
    return max(val, Fraction(0))


def best_normalized_radius(h, R, variant=STANDARD):
    # ties go to the smallest s
    return max(((normalized_radius(h, R, s, variant), s) for s in range(1, h + 1)), key=lambda p: (p[0], -p[1]))


def normalized_radius_curve(h, R_grid, variant=STANDARD):
    """[(R, tau, best s)] with tau maximized over 1 <= s <= h."""
    out = []
    for R in R_grid:
        tau, s = best_normalized_radius(h, R, variant)
        out.append((Fraction(R), tau, s))
    return out


def rate_grid(step=Fraction(1, 20)):
    step = Fraction(step)
    n = int(1 / step)
    return [i * step for i in range(n + 1)]


# ---------------------------------------------------------------- results


@dataclass
class DecodeResult:
    status: str                      # "unique", "list" or "failure"
    message: object = None           # unique f, or particular solution in list mode
    basis: list = field(default_factory=list)
    reason: str = ""
    D: int = 0
    d_I: int = 0
    d_RF: int = -1
    points: int = 0
    interpolation: list = field(default_factory=list)
    code: object = None

    @property
    def ok(self):
        return self.status != "failure"

    @property
    def unique(self):
        return self.message if self.status != "failure" and self.d_RF == 0 else None

    def contains(self, f):
        """True iff f solves the root-finding problem of this decode."""
        if self.code is None or not self.interpolation:
            return False
        if not isinstance(f, SkewPoly):
            f = SkewPoly(self.code.ctx, f)
        if len(f.coeffs) > self.code.k:
            return False
        if self.reason == "inconsistent":
            return False
        alpha = self.code.ctx.alpha
        return all(Q.compose(f, alpha).is_zero() for Q in self.interpolation)

    def diagnostics(self):
        return {"status": self.status, "reason": self.reason, "D": self.D, "d_I": self.d_I,
                "d_RF": self.d_RF, "points": self.points}


# ---------------------------------------------------------------- root finding


def root_system(code, Qs, D):
    """Twisted system B f_hat = -q for the zero derivation (f_hat_i = sigma^{-i}(f_i))."""
    ctx, k = code.ctx, code.k
    F = ctx.field
    s = Qs[0].s
    w = D - k + 1
    # sigma^t(alpha) powers
    sig_alpha = [[F.pow(ctx.aut(ctx.alpha, t), r) for r in range(s)] for t in range(D)]
    rows, rhs = [], []
    for Q in Qs:
        q0 = Q[0]
        Bcoef = [[Q[r][j] for r in range(1, s + 1)] for j in range(w)]
        for t in range(D):
            row = [0] * k
            pw = sig_alpha[t]
            for i in range(max(0, t - w + 1), min(k - 1, t) + 1):
                j = t - i
                val = 0
                for c, a in zip(Bcoef[j], pw):
                    if c:
                        val = F.add(val, F.mul(c, a))
                row[i] = ctx.aut(val, -t) if val else 0
            rows.append(row)
            rhs.append(F.neg(ctx.aut(q0[t], -t)))
    return rows, rhs


def root_find(code, Qs, D):
    """(particular, homogeneous basis) as SkewPolys, or None if inconsistent."""
    if code.ctx.d != 0:
        return root_find_fq(code, Qs, D)
    ctx = code.ctx
    rows, rhs = root_system(code, Qs, D)
    sol = linalg.solve(ctx.field, rows, rhs)
    if sol is None:
        return None
    x, kern = sol
    untwist = lambda v: SkewPoly(ctx, [ctx.aut(c, i) for i, c in enumerate(v)])
    return untwist(x), [untwist(v) for v in kern]


def root_find_fq(code, Qs, D):
    """Root finding for any derivation: P(f) is F_q-linear in f, solve over F_q."""
    ctx, k, m = code.ctx, code.k, code.ctx.m
    F, Fq = ctx.field, ctx.Fq
    basis_elems = [ctx.collapse([1 if j == l else 0 for j in range(m)]) for l in range(m)]
    unknowns = [(i, e) for i in range(k) for e in basis_elems]
    cols = []
    for i, e in unknowns:
        f = SkewPoly(ctx, [0] * i + [e])
        col = []
        for Q in Qs:
            P = Q.compose(f, ctx.alpha) - Q[0]
            for t in range(D):
                col.extend(ctx.expand(P[t]))
        cols.append(col)
    rhs = []
    for Q in Qs:
        for t in range(D):
            rhs.extend(ctx.expand(F.neg(Q[0][t])))
    A = linalg.transpose(cols)
    sol = linalg.solve(Fq, A, rhs)
    if sol is None:
        return None
    x, kern = sol

    def to_poly(v):
        coeffs = [0] * k
        for idx, c in enumerate(v):
            if c:
                i, e = unknowns[idx]
                coeffs[i] = F.add(coeffs[i], F.mul(c, e))
        return SkewPoly(ctx, coeffs)

    particular = to_poly(x)
    kern_polys = [to_poly(v) for v in kern]
    # pick a basis of the kernel as a right F_{q^m}-space (g -> g * c)
    chosen, span = [], []
    for g in kern_polys:
        if _in_fq_span(ctx, span, g, k):
            continue
        chosen.append(g)
        for e in basis_elems:
            span.append(skew_mul(g, SkewPoly.const(ctx, e)))
    if len(span) != len(kern_polys):
        raise ArithmeticError("root space is not closed under right scalar multiplication")
    return particular, chosen


def _in_fq_span(ctx, span, g, k):
    if not span:
        return g.is_zero()
    vecs = [_fq_vector(ctx, p, k) for p in span]
    r0 = linalg.rank(ctx.Fq, vecs)
    return linalg.rank(ctx.Fq, vecs + [_fq_vector(ctx, g, k)]) == r0


def _fq_vector(ctx, p, k):
    out = []
    for i in range(k):
        out.extend(ctx.expand(p[i]))
    return out


# ---------------------------------------------------------------- pipeline


class DecoderPlan:
    """Per-(code, config) precomputation: windows, D and the received-independent columns of S."""

    def __init__(self, code, cfg):
        self.code, self.cfg = code, cfg
        s = cfg.s
        if s > min(code.h):
            raise DecoderError(f"s={s} exceeds min h_i={min(code.h)}")
        mu = cfg.effective_mu
        self.D = degree_constraint(code.h, code.N, s, code.k, mu, cfg.variant)
        self.cols = interpolation_columns(self.D, code.k, s)
        self.starts = window_starts(code.h, code.N, s, cfg.variant)
        self.npoints = sum(len(x) for x in self.starts)
        ctx = code.ctx
        F = ctx.field
        self.p0_rows = [[op_powers(ctx, ai, F.pow(ctx.alpha, w), self.D) for w in st]
                        for ai, st in zip(code.a, self.starts)]

    def matrix(self, R):
        code, s = self.code, self.cfg.s
        ctx = code.ctx
        w = self.D - code.k + 1
        rows = []
        for bi, (blk, ai) in enumerate(zip(unfold(R), code.a)):
            cache = {}
            for idx, start in enumerate(self.starts[bi]):
                row = list(self.p0_rows[bi][idx])
                for pos in range(start, start + s):
                    pw = cache.get(pos)
                    if pw is None:
                        pw = cache[pos] = op_powers(ctx, ai, blk[pos], w)
                    row.extend(pw)
                rows.append(row)
        return rows

    def decode(self, R, keep_interpolation=True):
        code, cfg = self.code, self.cfg
        ctx, D, s = code.ctx, self.D, cfg.s
        S = self.matrix(R)
        kern = linalg.kernel_basis(ctx.field, S, self.cols)
        Qs = [split_interpolation_vector(ctx, v, D, code.k, s) for v in kern]
        res = DecodeResult(status="failure", D=D, d_I=len(kern), points=self.npoints,
                           interpolation=Qs if keep_interpolation else [], code=code)
        if not Qs:
            res.reason = "no interpolation polynomial"
            return res
        found = root_find(code, Qs, D)
        if found is None:
            res.reason = "inconsistent"
            return res
        f, basis = found
        res.message, res.basis, res.d_RF = f, basis, len(basis)
        if cfg.mode == UNIQUE:
            if basis:
                res.reason = "ambiguous"
                return res
            res.status = "unique"
        else:
            res.status = "list"
        return res


_PLANS = {}


def plan_for(code, cfg):
    key = (id(code), cfg)
    plan = _PLANS.get(key)
    if plan is None or plan.code is not code:
        plan = DecoderPlan(code, cfg)
        if len(_PLANS) > 64:
            _PLANS.clear()
        _PLANS[key] = plan
    return plan


def decode(R, code, cfg):
    if len(R) != code.ell or any(len(B) != hi or (B and len(B[0]) != ni)
                                 for B, hi, ni in zip(R, code.h, code.N)):
        raise DecoderError("received tuple does not match the code shape")
    return plan_for(code, cfg).decode(R)


def fsrs_decode(R_skew, fsrs_code, cfg):
    """Decode a folded skew RS word by mapping it back to the matched FLRS code."""
    R = isometry_inv(fsrs_code.ctx, R_skew, fsrs_code.h)
    return decode(R, fsrs_code.flrs, cfg)
