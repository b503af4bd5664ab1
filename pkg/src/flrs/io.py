"""Config files and the plain-text formats used by the command line."""
import copy
import json
import os
import platform
import sys

import yaml

from .codes import CodeError, FlrsCode, FsrsCode
from .decoder import DecoderConfig
from .field import FieldContext, FieldError

DEFAULTS = {
    "field": {"q": 3, "m": 6, "u": 1, "d": 0},
    "code": {"kind": "flrs", "h": [3, 2], "n": [6, 6], "k": 2},
    "decoder": {"s": 2, "mu": 1, "variant": "standard", "mode": "list"},
    "channel": {"t": 1, "decompositions": None, "decodable_only": False},
    "simulation": {"trials": 1000, "seed": 0, "workers": None, "trace_every": 1000},
    "curve": {"h": 25, "step": "1/20"},
}


class ConfigError(ValueError):
    pass


def _merge(base, extra):
    out = copy.deepcopy(base)
    for key, val in (extra or {}).items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def load_config(path=None, overrides=None):
    raw = {}
    if path:
        try:
            with open(path) as fh:
                raw = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: not valid YAML ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        unknown = set(raw) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"{path}: unknown sections {sorted(unknown)}")
    cfg = _merge(DEFAULTS, raw)
    # n and N are alternatives; an explicit N wins over the default n
    if "N" in (raw.get("code") or {}) and "n" not in raw.get("code", {}):
        cfg["code"].pop("n", None)
    return _merge(cfg, overrides)


def folded_lengths(code_cfg):
    h = [int(x) for x in code_cfg["h"]]
    if code_cfg.get("N") is not None:
        N = [int(x) for x in code_cfg["N"]]
    elif code_cfg.get("n") is not None:
        n = [int(x) for x in code_cfg["n"]]
        if len(n) != len(h):
            raise ConfigError("code.n and code.h must have the same length")
        for ni, hi in zip(n, h):
            if hi <= 0 or ni % hi:
                raise ConfigError(f"folding parameter {hi} does not divide block length {ni}")
        N = [ni // hi for ni, hi in zip(n, h)]
    else:
        raise ConfigError("code needs n (block lengths) or N (folded lengths)")
    if len(N) != len(h):
        raise ConfigError("code.N and code.h must have the same length")
    return h, N


def build_context(cfg):
    f = cfg["field"]
    try:
        return FieldContext(int(f["q"]), int(f["m"]), int(f.get("u", 1)), int(f.get("d", 0)))
    except (FieldError, ValueError) as exc:
        raise ConfigError(f"field: {exc}") from None


def build_code(cfg, ctx=None):
    ctx = ctx or build_context(cfg)
    c = cfg["code"]
    h, N = folded_lengths(c)
    kind = c.get("kind", "flrs")
    try:
        if kind == "flrs":
            return FlrsCode(ctx, h, N, int(c["k"]), a_indices=c.get("a_indices"),
                            strict_fold=bool(c.get("strict_fold", False)))
        if kind == "fsrs":
            if len(set(h)) != 1:
                raise ConfigError("fsrs codes use one folding parameter for all blocks")
            return FsrsCode(ctx, h[0], N, int(c["k"]), a_indices=c.get("a_indices"))
    except (CodeError, FieldError) as exc:
        raise ConfigError(f"code: {exc}") from None
    raise ConfigError(f"code.kind must be flrs or fsrs, not {kind!r}")


def decoder_config(cfg):
    d = cfg["decoder"]
    try:
        return DecoderConfig(s=int(d["s"]), mu=int(d["mu"]), variant=str(d["variant"]), mode=str(d["mode"]))
    except ValueError as exc:
        raise ConfigError(f"decoder: {exc}") from None


# ---------------------------------------------------------------- text formats


def format_tuple(X):
    """Blocks separated by blank lines, one matrix row per line, entries as integers."""
    chunks = []
    for i, B in enumerate(X):
        rows = [f"# block {i + 1}: {len(B)} x {len(B[0]) if B else 0}"]
        rows += [" ".join(str(v) for v in row) for row in B]
        chunks.append("\n".join(rows))
    return "\n\n".join(chunks) + "\n"


def parse_tuple(text, shape=None, order=None):
    blocks, cur = [], []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        try:
            cur.append([int(tok) for tok in line.split()])
        except ValueError:
            raise ConfigError(f"not an integer row: {line!r}") from None
    if cur:
        blocks.append(cur)
    for B in blocks:
        if len({len(r) for r in B}) != 1:
            raise ConfigError("ragged matrix block")
    if shape is not None:
        got = [(len(B), len(B[0])) for B in blocks]
        if got != [tuple(x) for x in shape]:
            raise ConfigError(f"block shapes {got} do not match the code {list(map(tuple, shape))}")
    if order is not None and any(v < 0 or v >= order for B in blocks for r in B for v in r):
        raise ConfigError(f"entries must lie in 0..{order - 1}")
    return blocks


def format_poly(coeffs):
    return " ".join(str(c) for c in coeffs) + "\n"


def parse_poly(text, order=None):
    toks = text.replace(",", " ").split()
    try:
        out = [int(t) for t in toks]
    except ValueError:
        raise ConfigError("polynomial coefficients must be integers") from None
    if order is not None and any(c < 0 or c >= order for c in out):
        raise ConfigError(f"coefficients must lie in 0..{order - 1}")
    return out


def write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def write_csv(path, header, rows):
    import csv
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_manifest(out_dir, command, cfg, extra=None):
    from . import linalg
    try:
        from importlib.metadata import version
        pkg_version = version("artifact")
    except Exception:
        pkg_version = "unknown"
    import numpy
    import sympy
    manifest = {
        "command": command,
        "config": cfg,
        "versions": {"artifact": pkg_version, "python": platform.python_version(),
                     "numpy": numpy.__version__, "sympy": sympy.__version__, "pyyaml": yaml.__version__},
        "kernel": linalg.KERNEL,
        "argv": sys.argv[1:],
    }
    if extra:
        manifest.update(extra)
    write_text(os.path.join(out_dir, "manifest.json"), json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return manifest
