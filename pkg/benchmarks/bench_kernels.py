"""Compiled vs pure-Python elimination kernel: raw rref and end-to-end decoding.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import time

from flrs import _kernels_py, linalg
from flrs.channel import ErrorSpec, sample_error
from flrs.codes import FlrsCode
from flrs.decoder import DecoderConfig, plan_for
from flrs.field import FieldContext, canonical_field
from flrs.skew import SkewPoly


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(repeat):
    print(f"{'field':>10} {'size':>5} {'compiled ms':>12} {'python ms':>10} {'speedup':>8}")
    rng = random.Random(1)
    for q in (7, 256, 729, 3 ** 9):
        F = canonical_field(q)
        for n in (20, 40, 80):
            M = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
            ref = linalg.rref(F, M, backend=_kernels_py)
            if linalg.KERNEL == "compiled":
                assert linalg.rref(F, M) == ref, "kernels disagree"
                tc = best_of(lambda: linalg.rref(F, M), repeat)
            else:
                tc = float("nan")
            tp = best_of(lambda: linalg.rref(F, M, backend=_kernels_py), repeat)
            print(f"{q:>10} {n:>5} {tc * 1e3:>12.3f} {tp * 1e3:>10.3f} {tp / tc:>8.1f}")


def bench_decode(trials):
    ctx = FieldContext(3, 6)
    code = FlrsCode(ctx, (3, 2), (2, 3), 2)
    cfg = DecoderConfig(s=2, mu=1, mode="unique")
    plan = plan_for(code, cfg)
    decs = ErrorSpec(2, decodable_only=True).resolve(code, cfg)
    rng = random.Random(2)
    words = []
    for _ in range(trials):
        f = SkewPoly(ctx, [rng.randrange(729) for _ in range(2)])
        E, _ = sample_error(code, decs, rng)
        words.append(code.add(code.encode(f), E))
    saved = linalg._kern
    out = {}
    for name, mod in (("compiled", saved), ("python", _kernels_py)):
        if name == "compiled" and linalg.KERNEL != "compiled":
            continue
        linalg._kern = mod
        t0 = time.perf_counter()
        for R in words:
            plan.decode(R)
        out[name] = (time.perf_counter() - t0) / trials
    linalg._kern = saved
    print(f"\ndecode q=3 m=6 h=(3,2) t=2, {trials} words")
    for name, t in out.items():
        print(f"  {name:>8}: {t * 1e3:.3f} ms per word")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--trials", type=int, default=500)
    args = ap.parse_args()
    print(f"active kernel: {linalg.KERNEL}")
    bench_rref(args.repeat)
    bench_decode(args.trials)


if __name__ == "__main__":
    main()
