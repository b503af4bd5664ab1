"""Sum-rank channel: fixed-weight error sampling, decodable patterns, Monte Carlo campaigns."""
import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .decoder import UNIQUE, DecoderConfig, plan_for, radius_ok
from .skew import SkewPoly


class ChannelError(ValueError):
    pass


def count_rank_matrices(q, m, h, N, t):
    """Number of h x N matrices over F_{q^m} whose columns span an F_q-space of dimension t."""
    if not 0 <= t <= min(m * h, N):
        raise ChannelError(f"rank {t} impossible for a {h}x{N} block over F_{q}^{m}")
    num = 1
    den = 1
    for j in range(t):
        num *= (q ** (m * h) - q ** j) * (q ** N - q ** j)
        den *= q ** t - q ** j
    return num // den


def decompositions(t, caps):
    """All (t_1..t_l) with sum t and 0 <= t_i <= caps_i, in lexicographic order."""
    out = []
    for combo in itertools.product(*[range(c + 1) for c in caps]):
        if sum(combo) == t:
            out.append(combo)
    return out


def block_caps(code):
    return [min(code.ctx.m * hi, ni) for hi, ni in zip(code.h, code.N)]


@dataclass
class ErrorSpec:
    t: int
    decompositions: list = None      # explicit list; default is all of weight t
    decodable_only: bool = False

    def resolve(self, code, cfg=None):
        if self.decompositions is not None:
            decs = [tuple(d) for d in self.decompositions]
            caps = block_caps(code)
            for d in decs:
                if len(d) != code.ell or sum(d) != self.t or any(x < 0 or x > c for x, c in zip(d, caps)):
                    raise ChannelError(f"decomposition {d} is not admissible for weight {self.t}")
        else:
            decs = decompositions(self.t, block_caps(code))
        if self.decodable_only:
            if cfg is None:
                raise ChannelError("decodable-only errors need a decoder configuration")
            decs = [d for d in decs if radius_ok(d, code.h, code.N, cfg.s, code.k, cfg.effective_mu,
                                                 cfg.variant, cfg.mode)]
        if not decs:
            raise ChannelError(f"no admissible decomposition of weight {self.t}")
        return decs


def decomposition_weights(code, decs):
    q, m = code.ctx.q, code.ctx.m
    out = []
    for d in decs:
        w = 1
        for hi, ni, ti in zip(code.h, code.N, d):
            w *= count_rank_matrices(q, m, hi, ni, ti)
        out.append(w)
    return out


def _random_independent_columns(ctx, h, t, rng):
    F = ctx.field
    while True:
        A = [[rng.randrange(F.order) for _ in range(t)] for _ in range(h)]
        if linalg.fq_rank(ctx, A) == t:
            return A


def _random_full_rank(Fq, t, N, rng):
    while True:
        B = [[rng.randrange(Fq.order) for _ in range(N)] for _ in range(t)]
        if linalg.rank(Fq, B) == t:
            return B


def sample_block(ctx, h, N, t, rng):
    if t == 0:
        return [[0] * N for _ in range(h)]
    A = _random_independent_columns(ctx, h, t, rng)
    B = _random_full_rank(ctx.Fq, t, N, rng)
    # entries of B lie in F_q, which sits inside F_{q^m} with the same encoding
    return linalg.mat_mul(ctx.field, A, B)


def pick_decomposition(decs, weights, rng):
    total = sum(weights)
    x = rng.randrange(total)
    for d, w in zip(decs, weights):
        if x < w:
            return d
        x -= w
    return decs[-1]


def sample_error(code, decs, rng, weights=None):
    """Uniform error over the union of the given decompositions; returns (tuple, decomposition)."""
    if not decs:
        raise ChannelError("empty error specification")
    if weights is None:
        weights = decomposition_weights(code, decs)
    d = pick_decomposition(decs, weights, rng)
    E = [sample_block(code.ctx, hi, ni, ti, rng) for hi, ni, ti in zip(code.h, code.N, d)]
    return E, d


def enumerate_decodable_patterns(h, N, k, s, mode="list", mu=1, variant="standard", t_max=None):
    """[(t, decodable, total)] with per-block caps t_i <= N_i."""
    if t_max is None:
        t_max = sum(N)
    rows = []
    for t in range(t_max + 1):
        decs = decompositions(t, N)
        good = sum(1 for d in decs if radius_ok(d, h, N, s, k, mu, variant, mode))
        rows.append((t, good, len(decs)))
    return rows


def format_pattern(good, total):
    return "none" if good == 0 else f"{good} / {total}"


# ---------------------------------------------------------------- statistics


def wilson_interval(failures, trials, z=1.959963984540054):
    if trials == 0:
        return 0.0, 1.0
    p = failures / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # the endpoints are exact at the extremes; avoid float residue there
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


def kl_divergence(p, u):
    """D(p || u) in bits, with 0 log(0/x) = 0 and x log(x/0) = inf."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    if p.shape != u.shape:
        raise ChannelError("distributions over different alphabets")
    total = 0.0
    for pi, ui in zip(p, u):
        if pi > 0:
            if ui <= 0:
                return math.inf
            total += pi * math.log2(pi / ui)
    return max(total, 0.0)


def kl_from_uniform(counts):
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n == 0:
        return math.nan
    p = counts[counts > 0] / n
    return float(max(np.sum(p * np.log2(p * len(counts))), 0.0))


def coefficient_histogram(results, field_order, mu):
    """Pooled counts of the coefficients of B_0^{(1..mu)} over a list of decode results."""
    counts = np.zeros(field_order, dtype=np.int64)
    for res in results:
        add_b0_coefficients(counts, res, mu)
    return counts


def add_b0_coefficients(counts, res, mu):
    for Q in res.interpolation[:mu]:
        for r in range(1, Q.s + 1):
            counts[Q[r][0]] += 1


def coefficient_distribution(counts):
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    return counts / total if total else counts


# ---------------------------------------------------------------- campaigns


def trial_seed(master_seed, trial):
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial,))
    a, b = ss.generate_state(2, dtype=np.uint64)
    return (int(a) << 64) | int(b)


@dataclass
class SimulationReport:
    trials: int
    failures: int
    declared: int
    miscorrections: int
    rate: float
    ci_low: float
    ci_high: float
    bound: float
    master_seed: int
    per_decomposition: dict = field(default_factory=dict)
    reasons: dict = field(default_factory=dict)
    histogram: object = None
    kl_trace: list = field(default_factory=list)
    not_contained: int = 0

    @property
    def kl_bits(self):
        return self.kl_trace[-1][1] if self.kl_trace else math.nan

    def to_dict(self):
        return {
            "trials": self.trials, "failures": self.failures, "declared_failures": self.declared,
            "miscorrections": self.miscorrections, "failure_rate": self.rate,
            "wilson_95": [self.ci_low, self.ci_high], "heuristic_bound": self.bound,
            "master_seed": self.master_seed,
            "per_decomposition": {",".join(map(str, k)): {"trials": v[0], "failures": v[1]}
                                  for k, v in sorted(self.per_decomposition.items())},
            "failure_reasons": dict(sorted(self.reasons.items())),
            "sent_not_in_list": self.not_contained,
            "kl_bits": None if not self.kl_trace else self.kl_bits,
        }


def _run_chunk(args):
    code, cfg, decs, weights, start, stop, master_seed, track, check_list = args
    plan = plan_for(code, cfg)
    F = code.ctx.field
    mu = cfg.effective_mu
    counts = np.zeros(F.order, dtype=np.int64) if track else None
    per_dec = {}
    reasons = {}
    declared = mis = not_contained = 0
    list_plan = plan_for(code, DecoderConfig(cfg.s, 1, cfg.variant, "list")) if check_list else None
    for trial in range(start, stop):
        rng = random.Random(trial_seed(master_seed, trial))
        f = SkewPoly(code.ctx, [rng.randrange(F.order) for _ in range(code.k)])
        E, d = sample_error(code, decs, rng, weights)
        R = code.add(code.encode(f), E)
        res = plan.decode(R, keep_interpolation=True)
        if track:
            add_b0_coefficients(counts, res, mu)
        failed = False
        if res.status == "failure":
            declared += 1
            failed = True
            reasons[res.reason] = reasons.get(res.reason, 0) + 1
        elif res.d_RF == 0 and res.message != f:
            mis += 1
            failed = True
            reasons["miscorrection"] = reasons.get("miscorrection", 0) + 1
        elif res.status == "list" and res.d_RF > 0:
            # list mode answer counts as correct only if the sent word is in it
            if not res.contains(f):
                mis += 1
                failed = True
        if check_list:
            lres = list_plan.decode(R, keep_interpolation=True) if list_plan is not plan else res
            if not lres.contains(f):
                not_contained += 1
        tr, fl = per_dec.get(d, (0, 0))
        per_dec[d] = (tr + 1, fl + int(failed))
    return start, declared, mis, per_dec, reasons, counts, not_contained


def run_campaign(code, cfg, spec, trials, master_seed=0, workers=1, track_coefficients=True,
                 trace_every=None, check_list=False, progress=None):
    """Monte Carlo failure-rate estimate; results depend only on (seed, trials, configuration)."""
    if not isinstance(spec, ErrorSpec):
        spec = ErrorSpec(int(spec))
    decs = spec.resolve(code, cfg)
    weights = decomposition_weights(code, decs)
    if trace_every is None:
        trace_every = max(1, min(1000, trials))
    chunks = [(code, cfg, decs, weights, s, min(s + trace_every, trials), master_seed,
               track_coefficients, check_list) for s in range(0, trials, trace_every)]
    if workers and workers > 1 and len(chunks) > 1:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(workers) as pool:
            outs = []
            for out in pool.imap_unordered(_run_chunk, chunks):
                outs.append(out)
                if progress:
                    progress(len(outs), len(chunks))
    else:
        outs = []
        for ch in chunks:
            outs.append(_run_chunk(ch))
            if progress:
                progress(len(outs), len(chunks))
    outs.sort(key=lambda o: o[0])
    F = code.ctx.field
    hist = np.zeros(F.order, dtype=np.int64) if track_coefficients else None
    declared = mis = not_contained = 0
    per_dec, reasons, trace = {}, {}, []
    done = 0
    for start, dcl, ms, pd, rs, counts, nc in outs:
        declared += dcl
        mis += ms
        not_contained += nc
        for k, (tr, fl) in pd.items():
            a, b = per_dec.get(k, (0, 0))
            per_dec[k] = (a + tr, b + fl)
        for k, v in rs.items():
            reasons[k] = reasons.get(k, 0) + v
        done += sum(tr for tr, _ in pd.values())
        if track_coefficients:
            hist += counts
            trace.append((done, kl_from_uniform(hist)))
    failures = declared + mis
    lo, hi = wilson_interval(failures, trials)
    from .decoder import failure_bound
    bound = float(failure_bound(code.k, code.ctx.q, code.ctx.m, cfg.effective_mu))
    return SimulationReport(trials=trials, failures=failures, declared=declared, miscorrections=mis,
                            rate=failures / trials if trials else 0.0, ci_low=lo, ci_high=hi,
                            bound=bound, master_seed=master_seed, per_decomposition=per_dec,
                            reasons=reasons, histogram=hist, kl_trace=trace,
                            not_contained=not_contained)


def default_unique_config(s, mu=1, variant="standard"):
    return DecoderConfig(s=s, mu=mu, variant=variant, mode=UNIQUE)
