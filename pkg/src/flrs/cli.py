"""Command-line front end: flrs <subcommand> [--config file.yaml] [flags]."""
import argparse
import json
import os
import random
import sys
from fractions import Fraction

import yaml

from . import channel as chan
from . import io
from .codes import FsrsCode, is_msrd_by_bound, isometry_map
from .decoder import (LIST, UNIQUE, DecoderConfig, DecoderError, decode, format_radius, format_value,
                      fsrs_decode, normalized_radius_curve, plan_for, rate_grid)
from .skew import SkewPoly

EXIT_OK, EXIT_PARAM, EXIT_DECODE, EXIT_IO = 0, 2, 3, 4

CONFIG_HELP = """\
Configuration is a YAML file with the sections below; anything missing falls
back to these defaults.

  field:      {q: 3, m: 6, u: 1, d: 0}        # sigma = Frobenius^u, derivation d(Id - sigma)
  code:       {kind: flrs, h: [3, 2], n: [6, 6], k: 2}   # or N: folded lengths; kind flrs|fsrs
  decoder:    {s: 2, mu: 1, variant: standard, mode: list}
  channel:    {t: 1, decompositions: null, decodable_only: false}
  simulation: {trials: 1000, seed: 0, workers: <cores>, trace_every: 1000}
  curve:      {h: 25, step: 1/20}

When channel.decompositions is null, errors of weight t are drawn uniformly
from all weight decompositions; decodable_only keeps the ones inside the
decoding region of the configured decoder.

Field elements are written as integers: the base-q number whose digits are the
coordinates over F_q (lowest digit first).
"""


class CliError(Exception):
    def __init__(self, msg, code=EXIT_PARAM):
        super().__init__(msg)
        self.code = code


def _shared(parser):
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--seed", type=int, help="master seed (overrides simulation.seed)")
    parser.add_argument("--out", default="flrs_out", help="output directory (default: flrs_out)")
    parser.add_argument("--workers", type=int,
                        help="worker processes for simulate/coeff-dist (default: available cores)")
    parser.add_argument("--variant", choices=["standard", "high-rate"], help="interpolation point set")
    parser.add_argument("--mode", choices=["list", "unique"], help="list or probabilistic unique decoding")
    parser.add_argument("--mu", type=int, help="dimension threshold for unique decoding")
    parser.add_argument("--s", type=int, help="interpolation parameter")


def build_parser():
    parser = argparse.ArgumentParser(prog="flrs", description="Folded linearized RS codes over the sum-rank metric.",
                                     epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "code-info": "minimum distance, MSRD verdict, Singleton exponent and decoding radii",
        "patterns": "decodable error-weight decompositions per weight t",
        "encode": "encode a message polynomial",
        "channel": "add a random error of fixed sum-rank weight to a codeword",
        "decode": "decode a received word",
        "simulate": "Monte Carlo failure rate of the probabilistic unique decoder",
        "coeff-dist": "empirical distribution of the root-finding coefficients and its KL divergence",
        "radius-curve": "normalized decoding radius against code rate (CSV)",
    }
    subs = {}
    for name, text in specs.items():
        p = sub.add_parser(name, help=text, description=text)
        _shared(p)
        subs[name] = p
    subs["patterns"].add_argument("--t-max", type=int, default=5, help="largest weight listed (default 5)")
    subs["encode"].add_argument("--message", help="coefficients f_0 ... f_{k-1}, space or comma separated")
    subs["encode"].add_argument("--message-file", help="file with the message coefficients")
    subs["channel"].add_argument("--input", help="codeword file (default: encode a random message)")
    subs["channel"].add_argument("--t", type=int, help="error weight (overrides channel.t)")
    subs["decode"].add_argument("--input", required=True, help="received word file")
    for name in ("simulate", "coeff-dist"):
        subs[name].add_argument("--trials", type=int, help="number of transmissions")
        subs[name].add_argument("--t", type=int, help="error weight (overrides channel.t)")
    subs["radius-curve"].add_argument("--h", type=int, help="folding parameter (overrides curve.h)")
    subs["radius-curve"].add_argument("--step", help="rate grid step, e.g. 1/20")
    return parser


def resolve_config(args):
    over = {}
    if args.seed is not None:
        over.setdefault("simulation", {})["seed"] = args.seed
    if args.workers is not None:
        over.setdefault("simulation", {})["workers"] = args.workers
    dec = {}
    for key in ("variant", "mode", "mu", "s"):
        val = getattr(args, key)
        if val is not None:
            dec[key] = val.replace("-", "_") if key == "variant" else val
    if dec:
        over["decoder"] = dec
    if getattr(args, "t", None) is not None:
        over["channel"] = {"t": args.t}
    if getattr(args, "trials", None) is not None:
        over.setdefault("simulation", {})["trials"] = args.trials
    if getattr(args, "h", None) is not None:
        over["curve"] = {"h": args.h}
    if getattr(args, "step", None) is not None:
        over.setdefault("curve", {})["step"] = args.step
    try:
        cfg = io.load_config(args.config, over)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", EXIT_IO) from None
    except io.ConfigError as exc:
        raise CliError(str(exc)) from None
    if not cfg["simulation"].get("workers"):
        cfg["simulation"]["workers"] = os.cpu_count() or 1
    return cfg


def _prepare_out(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {path}: {exc}", EXIT_IO) from None


def _flrs(code):
    return code.flrs if isinstance(code, FsrsCode) else code


def _shape(code):
    c = _flrs(code)
    return list(zip(c.h, c.N))


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def _validated(cfg):
    try:
        ctx = io.build_context(cfg)
        code = io.build_code(cfg, ctx)
        dcfg = io.decoder_config(cfg)
        plan_for(_flrs(code), dcfg)
    except (io.ConfigError, DecoderError) as exc:
        raise CliError(str(exc)) from None
    return ctx, code, dcfg


# ---------------------------------------------------------------- subcommands


def cmd_code_info(cfg, out):
    ctx, code, dcfg = _validated(cfg)
    c = _flrs(code)
    s, mu, var = dcfg.s, dcfg.mu, dcfg.variant
    rows = [
        ("q", ctx.q), ("m", ctx.m), ("u", ctx.u), ("d", ctx.d), ("kind", cfg["code"]["kind"]),
        ("h", " ".join(map(str, c.h))), ("N", " ".join(map(str, c.N))), ("n", " ".join(map(str, c.n_blocks))),
        ("k", c.k), ("rate", str(c.rate)), ("min_distance", c.min_distance()),
        ("singleton_exponent", c.singleton_exponent()), ("msrd", c.is_msrd()),
        ("msrd_by_bound", is_msrd_by_bound(c)),
        ("s", s), ("variant", var),
        ("list_radius", format_radius(c.h, c.N, s, c.k, 1, var, LIST)),
        ("unique_radius", format_radius(c.h, c.N, s, c.k, mu, var, UNIQUE)),
        ("mu", mu),
    ]
    if isinstance(code, FsrsCode):
        rows.append(("min_skew_distance", code.min_skew_distance()))
    io.write_csv(os.path.join(out, "code_info.csv"), ["key", "value"], rows)
    return "\n".join(f"{k:>20}: {v}" for k, v in rows)


def cmd_patterns(cfg, out, t_max=5):
    ctx, code, dcfg = _validated(cfg)
    c = _flrs(code)
    mode = dcfg.mode
    table = chan.enumerate_decodable_patterns(c.h, c.N, c.k, dcfg.s, mode, dcfg.mu, dcfg.variant, t_max)
    rows = [(t, good, total, chan.format_pattern(good, total)) for t, good, total in table if t >= 1]
    io.write_csv(os.path.join(out, "patterns.csv"), ["t", "decodable", "total", "rendered"], rows)
    radius = format_radius(c.h, c.N, dcfg.s, c.k, dcfg.mu, dcfg.variant, mode)
    lines = [f"t={t}: {r}" for t, _, _, r in rows]
    lines.append(f"radius: {radius}   min distance: {c.min_distance()}")
    return "\n".join(lines)


def _message_from(args, code, rng):
    F = code.ctx.field
    if args.message is not None:
        coeffs = io.parse_poly(args.message, F.order)
    elif args.message_file:
        coeffs = io.parse_poly(_read(args.message_file), F.order)
    else:
        coeffs = [rng.randrange(F.order) for _ in range(code.k)]
    if len(coeffs) > code.k:
        raise CliError(f"message has {len(coeffs)} coefficients, the code dimension is {code.k}")
    return coeffs


def cmd_encode(cfg, out, args):
    ctx, code, _ = _validated(cfg)
    rng = random.Random(chan.trial_seed(cfg["simulation"]["seed"], 0))
    coeffs = _message_from(args, code, rng)
    X = code.encode(SkewPoly(ctx, coeffs))
    io.write_text(os.path.join(out, "message.txt"), io.format_poly(coeffs))
    io.write_text(os.path.join(out, "codeword.txt"), io.format_tuple(X))
    return io.format_tuple(X).rstrip()


def cmd_channel(cfg, out, args):
    ctx, code, dcfg = _validated(cfg)
    c = _flrs(code)
    F = ctx.field
    rng = random.Random(chan.trial_seed(cfg["simulation"]["seed"], 0))
    if args.input:
        X = io.parse_tuple(_read(args.input), _shape(code), F.order)
    else:
        coeffs = [rng.randrange(F.order) for _ in range(c.k)]
        X = code.encode(SkewPoly(ctx, coeffs))
        io.write_text(os.path.join(out, "message.txt"), io.format_poly(coeffs))
        io.write_text(os.path.join(out, "codeword.txt"), io.format_tuple(X))
    ch = cfg["channel"]
    spec = chan.ErrorSpec(int(ch["t"]), ch.get("decompositions"), bool(ch.get("decodable_only")))
    try:
        decs = spec.resolve(c, dcfg)
    except chan.ChannelError as exc:
        raise CliError(str(exc)) from None
    E, d = chan.sample_error(c, decs, rng)
    if isinstance(code, FsrsCode):
        E = isometry_map(ctx, E, code.h)
    Y = c.add(X, E)
    io.write_text(os.path.join(out, "error.txt"), io.format_tuple(E))
    io.write_text(os.path.join(out, "received.txt"), io.format_tuple(Y))
    return f"weight decomposition: {' '.join(map(str, d))}\n" + io.format_tuple(Y).rstrip()


def cmd_decode(cfg, out, args):
    ctx, code, dcfg = _validated(cfg)
    Y = io.parse_tuple(_read(args.input), _shape(code), ctx.field.order)
    if isinstance(code, FsrsCode):
        res = fsrs_decode(Y, code, dcfg)
    else:
        res = decode(Y, code, dcfg)
    diag = res.diagnostics()
    io.write_text(os.path.join(out, "diagnostics.json"), json.dumps(diag, indent=2, sort_keys=True) + "\n")
    if res.status == "failure":
        io.write_text(os.path.join(out, "decoded.txt"), f"# failure: {res.reason}\n")
        raise CliError(f"decoding failure: {res.reason}", EXIT_DECODE)
    k = _flrs(code).k
    pad = lambda p: [p[i] for i in range(k)]
    lines = [io.format_poly(pad(res.message)).rstrip()]
    if res.basis:
        lines.append(f"# solution space: particular solution above plus the right F_q^m-span of {len(res.basis)} polys")
        lines += [io.format_poly(pad(b)).rstrip() for b in res.basis]
    text = "\n".join(lines) + "\n"
    io.write_text(os.path.join(out, "decoded.txt"), text)
    return f"status: {res.status}  d_I={res.d_I}  d_RF={res.d_RF}\n" + text.rstrip()


def _campaign(cfg, out, progress=True):
    ctx, code, dcfg = _validated(cfg)
    c = _flrs(code)
    ucfg = DecoderConfig(dcfg.s, dcfg.mu, dcfg.variant, UNIQUE)
    try:
        plan_for(c, ucfg)
    except DecoderError as exc:
        raise CliError(str(exc)) from None
    ch, sim = cfg["channel"], cfg["simulation"]
    spec = chan.ErrorSpec(int(ch["t"]), ch.get("decompositions"), bool(ch.get("decodable_only")))
    try:
        spec.resolve(c, ucfg)
    except chan.ChannelError as exc:
        raise CliError(str(exc)) from None
    trials = int(sim["trials"])
    if trials < 1:
        raise CliError("simulation.trials must be positive")

    def show(done, total):
        if progress and sys.stderr.isatty():
            print(f"\r{done}/{total} chunks", end="", file=sys.stderr, flush=True)

    rep = chan.run_campaign(c, ucfg, spec, trials, int(sim["seed"]), int(sim.get("workers") or 1),
                            trace_every=int(sim.get("trace_every") or 1000), progress=show)
    if progress and sys.stderr.isatty():
        print(file=sys.stderr)
    io.write_csv(os.path.join(out, "kl_trace.csv"), ["trial", "kl_bits"],
                 [(n, f"{kl:.10g}") for n, kl in rep.kl_trace])
    return rep


def cmd_simulate(cfg, out):
    rep = _campaign(cfg, out)
    d = rep.to_dict()
    io.write_text(os.path.join(out, "report.yaml"), yaml.safe_dump(d, sort_keys=False))
    total = rep.histogram.sum()
    io.write_csv(os.path.join(out, "histogram.csv"), ["element", "count", "pmf"],
                 [(e, int(n), f"{n / total:.10g}") for e, n in enumerate(rep.histogram)])
    lo, hi = d["wilson_95"]
    return (f"trials: {rep.trials}  failures: {rep.failures} (declared {rep.declared}, "
            f"miscorrections {rep.miscorrections})\n"
            f"failure rate: {rep.rate:.4g}  95% CI [{lo:.3g}, {hi:.3g}]  heuristic bound: {rep.bound:.4g}")


def cmd_coeff_dist(cfg, out):
    rep = _campaign(cfg, out)
    pmf = chan.coefficient_distribution(rep.histogram)
    io.write_csv(os.path.join(out, "coefficient_pmf.csv"), ["element", "count", "pmf"],
                 [(e, int(n), f"{p:.10g}") for e, (n, p) in enumerate(zip(rep.histogram, pmf))])
    uniform = [1 / len(pmf)] * len(pmf)
    kl = chan.kl_divergence(pmf, uniform)
    io.write_text(os.path.join(out, "kl.txt"), f"{kl:.10g}\n")
    return f"samples: {int(rep.histogram.sum())}  KL divergence to uniform: {kl:.4g} bits"


def cmd_radius_curve(cfg, out):
    cv = cfg["curve"]
    h = int(cv["h"])
    if h < 1:
        raise CliError("curve.h must be positive")
    try:
        step = Fraction(str(cv["step"]))
    except (ValueError, ZeroDivisionError):
        raise CliError(f"curve.step {cv['step']!r} is not a number") from None
    if not 0 < step <= 1 or (1 / step).denominator != 1:
        raise CliError("curve.step must divide 1")
    grid = rate_grid(step)
    std = normalized_radius_curve(h, grid, "standard")
    hr = normalized_radius_curve(h, grid, "high_rate")
    rows = []
    for (R, ts, ss), (_, th, sh) in zip(std, hr):
        rows.append((f"{float(R):.6g}", f"{float(ts):.12g}", ss, f"{float(th):.12g}", sh,
                     f"{float(1 - R):.12g}", f"{float((1 - R) / 2):.12g}"))
    io.write_csv(os.path.join(out, "radius_curve.csv"),
                 ["rate", "standard", "standard_s", "high_rate", "high_rate_s", "singleton", "unique"], rows)
    return (f"h={h}: tau(0) standard {format_value(std[0][1])} ({std[0][1]}), "
            f"high-rate {format_value(hr[0][1])} ({hr[0][1]}); {len(rows)} grid points")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        # validate everything before touching the output directory
        if args.command != "radius-curve":
            _validated(cfg)
        _prepare_out(args.out)
        cmd = args.command
        if cmd == "code-info":
            text = cmd_code_info(cfg, args.out)
        elif cmd == "patterns":
            text = cmd_patterns(cfg, args.out, args.t_max)
        elif cmd == "encode":
            text = cmd_encode(cfg, args.out, args)
        elif cmd == "channel":
            text = cmd_channel(cfg, args.out, args)
        elif cmd == "decode":
            try:
                text = cmd_decode(cfg, args.out, args)
            finally:
                io.write_manifest(args.out, cmd, cfg)
        elif cmd == "simulate":
            text = cmd_simulate(cfg, args.out)
        elif cmd == "coeff-dist":
            text = cmd_coeff_dist(cfg, args.out)
        else:
            text = cmd_radius_curve(cfg, args.out)
        if cmd != "decode":
            io.write_manifest(args.out, cmd, cfg)
    except CliError as exc:
        print(f"flrs {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except io.ConfigError as exc:
        print(f"flrs {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"flrs {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
