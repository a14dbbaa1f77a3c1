"""Command-line surface: bounds, construct, verify, solve, encode, table,
compose.

Configurations travel as JSON files, tables as CSV on stdout, solver
results as JSON backed by an on-disk cache.  Exit codes: 0 ok, 2 usage,
3 I/O or parse error, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import fcntl
import hashlib
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .core import (
    Configuration,
    GridParams,
    Rook,
    RookError,
    config_coverage,
)
from .bounds import bound_report
from .constructions import (
    CONSTRUCTIONS,
    blowup_covering,
    blowup_packing,
    blowup_two_packing,
    diagonal_slab_block,
    extend_covering,
    stack,
)
from .solve import (
    SolverBudget,
    encode_ilp,
    exact_max_coverage,
    exact_max_packing,
    exact_max_two_packing,
    exact_min_covering,
)
from .verify import verify_covering, verify_packing, verify_two_packing

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_BUDGET = 4

DEFAULT_CACHE_DIR = ".rookpack-cache"


# ---------------------------------------------------------------- JSON forms
def config_to_dict(cfg: Configuration) -> dict:
    g = cfg.params
    return {
        "n": g.n,
        "k": g.k,
        "l": g.l,
        "rooks": [
            {"point": list(r.point), "dirs": sorted(r.dirs)}
            for r in cfg.sorted_rooks()
        ],
    }


def config_from_dict(d: dict) -> Configuration:
    try:
        g = GridParams(int(d["n"]), int(d["k"]), int(d["l"]))
        rooks = [
            Rook(tuple(int(x) for x in r["point"]), frozenset(int(a) for a in r["dirs"]))
            for r in d["rooks"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise RookError(f"malformed configuration file: {e}")
    return Configuration(g, rooks)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path):
    with open(path) as f:
        return json.load(f)


def _frac(x):
    """Exact JSON spelling for a Fraction; plain int when integral."""
    if x is None:
        return None
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def report_to_dict(c, kind: str) -> dict:
    if kind == "cover":
        rep = verify_covering(c)
    elif kind == "pack":
        rep = verify_packing(c)
    else:
        rep = verify_two_packing(c, mode=kind)
    return {
        "valid": rep.valid,
        "total_violations": rep.total_violations,
        "capped": rep.capped,
        "violations": [
            {"kind": v.kind, "point": v.point, "rooks": list(v.rooks) if v.rooks else None}
            for v in rep.violations
        ],
    }


# ---------------------------------------------------------------- cache
def _cache_dir() -> str:
    return os.environ.get("ROOKPACK_CACHE", DEFAULT_CACHE_DIR)


def _instance_hash(mode, g, flags) -> str:
    blob = f"{mode}|{g.n},{g.k},{g.l}|{flags}".encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class _CacheLock:
    """Advisory lock over the whole cache directory."""

    def __init__(self, directory):
        os.makedirs(directory, exist_ok=True)
        self.path = os.path.join(directory, ".lock")

    def __enter__(self):
        self.fd = open(self.path, "a+")
        fcntl.flock(self.fd, fcntl.LOCK_EX)
        return self

    def __exit__(self, *exc):
        fcntl.flock(self.fd, fcntl.LOCK_UN)
        self.fd.close()


# ---------------------------------------------------------------- commands
def cmd_bounds(args) -> int:
    g = GridParams(args.n, args.k, args.l)
    rep = bound_report(g)
    out = {
        "n": g.n,
        "k": g.k,
        "l": g.l,
        "a_lower": rep.a_lower,
        "a_upper": rep.a_upper,
        "b_upper": _frac(rep.b_upper),
        "asymptotic": {
            key: _frac(val) if isinstance(val, Fraction) else val
            for key, val in rep.asymptotic.items()
        },
    }
    if rep.c_upper is not None:
        out["c_upper"] = _frac(rep.c_upper)
    sys.stdout.write(dump_json(out))
    return EXIT_OK


def cmd_construct(args) -> int:
    name = args.name
    if name not in CONSTRUCTIONS:
        sys.stderr.write(f"unknown construction {name!r}\n")
        return EXIT_USAGE
    fn, wanted = CONSTRUCTIONS[name]
    params = {}
    for p in wanted:
        val = getattr(args, p, None)
        if val is None:
            sys.stderr.write(f"construction {name} needs --{p}\n")
            return EXIT_USAGE
        params[p] = val
    extra = {}
    if name == "diagonal_slab_block":
        cfg, axis_report = diagonal_slab_block(**params)
        extra["axis_report"] = list(axis_report)
    else:
        cfg = fn(**params)
    doc = config_to_dict(cfg)
    if args.out:
        with open(args.out, "w") as f:
            f.write(dump_json(doc))
        summary = {"name": name, "rooks": len(cfg), "out": args.out, **extra}
        sys.stdout.write(dump_json(summary))
    else:
        if extra:
            doc.update(extra)
        sys.stdout.write(dump_json(doc))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = config_from_dict(load_json(args.path))
    kind = args.mode
    if kind == "pack2":
        kind = "strict" if args.strict else "closed"
    out = report_to_dict(cfg, kind)
    sys.stdout.write(dump_json(out))
    return EXIT_OK if out["valid"] else 1


_SOLVERS = {
    "a": ("min_cover", verify_covering),
    "b": ("max_pack", verify_packing),
    "c": ("max_two_pack", None),
    "coverage": ("max_coverage", None),
}


def _witness_ok(mode, strict, cfg, optimum) -> bool:
    try:
        if mode == "a":
            return len(cfg) == optimum and verify_covering(cfg).valid
        if mode == "b":
            return len(cfg) == optimum and verify_packing(cfg).valid
        if mode == "c":
            two = "strict" if strict else "closed"
            return len(cfg) == optimum and verify_two_packing(cfg, mode=two).valid
        return config_coverage(cfg).popcount() == optimum
    except RookError:
        return False


def cmd_solve(args) -> int:
    g = GridParams(args.n, args.k, args.l)
    budget = SolverBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)
    flags = []
    if args.mode == "c" and args.strict:
        flags.append("strict")
    if args.mode == "a" and args.symmetry:
        flags.append("sym")
    if args.mode == "coverage":
        flags.append(f"N={args.N}")
    flagstr = ",".join(flags)
    h = _instance_hash(args.mode, g, flagstr)
    directory = _cache_dir()
    suffix = ("_" + flagstr.replace("=", "").replace(",", "_")) if flagstr else ""
    base = f"solve_{args.mode}{suffix}_{g.n}_{g.k}_{g.l}"
    rec_path = os.path.join(directory, base + ".json")
    wit_path = os.path.join(directory, base + "_witness.json")

    with _CacheLock(directory):
        cached = _load_cached(rec_path, wit_path, h, args)
        if cached is not None:
            sys.stdout.write(cached)
            return EXIT_OK

        if args.mode == "a":
            res = exact_min_covering(g, budget, symmetry_breaking=args.symmetry)
        elif args.mode == "b":
            res = exact_max_packing(g, budget)
        elif args.mode == "c":
            res = exact_max_two_packing(g, "strict" if args.strict else "closed", budget)
        else:
            if args.N is None:
                sys.stderr.write("coverage mode needs --N\n")
                return EXIT_USAGE
            res = exact_max_coverage(g, args.N, budget)

        out = {
            "mode": args.mode,
            "n": g.n,
            "k": g.k,
            "l": g.l,
            "flags": flagstr,
            "optimum": res.optimum,
            "exact": res.exact,
            "lower_bound": res.lower_bound,
            "upper_bound": res.upper_bound,
            "stats": {
                "nodes": res.stats.nodes,
                "pruned": res.stats.pruned,
                "wall_time": res.stats.wall_time,
            },
            "witness": config_to_dict(res.witness) if res.witness is not None else None,
        }
        text = dump_json(out)
        if not res.exact:
            sys.stdout.write(text)
            return EXIT_BUDGET
        with open(rec_path, "w") as f:
            f.write(text)
        with open(wit_path, "w") as f:
            f.write(
                dump_json(
                    {
                        "version": __version__,
                        "instance_hash": h,
                        "optimum": res.optimum,
                        "config": config_to_dict(res.witness),
                    }
                )
            )
        sys.stdout.write(text)
        return EXIT_OK


def _load_cached(rec_path, wit_path, h, args):
    """Record text if the cached witness still checks out, else None."""
    if not (os.path.exists(rec_path) and os.path.exists(wit_path)):
        return None
    try:
        with open(rec_path) as f:
            text = f.read()
        record = json.loads(text)
        wit = load_json(wit_path)
        if wit.get("version") != __version__ or wit.get("instance_hash") != h:
            return None
        cfg = config_from_dict(wit["config"])
        if not _witness_ok(args.mode, getattr(args, "strict", False), cfg, record["optimum"]):
            return None
        return text
    except (OSError, ValueError, KeyError, RookError):
        return None


def cmd_encode(args) -> int:
    g = GridParams(args.n, args.k, args.l)
    if args.out:
        with open(args.out, "w") as f:
            summary = encode_ilp(g, args.mode, f)
        sys.stdout.write(dump_json(summary))
    else:
        encode_ilp(g, args.mode, sys.stdout)
    return EXIT_OK


def _parse_range(spec: str):
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def cmd_table(args) -> int:
    ns = _parse_range(args.n)
    ns = [n for n in ns if n >= 1]
    if not ns:
        sys.stderr.write("empty n range\n")
        return EXIT_USAGE
    budget = SolverBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)
    rows = ["n,lower,exact,upper,density"]
    for n in ns:
        g = GridParams(n, args.k, args.l)
        if args.mode == "a":
            res = exact_min_covering(g, budget)
            denom = n ** (args.k - 1)
        elif args.mode == "b":
            res = exact_max_packing(g, budget)
            denom = n ** (args.k - 1)
        else:
            res = exact_max_two_packing(g, "closed", budget)
            denom = n ** (args.k - 2) if args.k >= 2 else 1
        if res.exact:
            value = res.optimum
        elif args.mode == "a":
            value = res.upper_bound  # best covering found so far
        else:
            value = res.lower_bound  # best packing found so far
        rows.append(
            f"{n},{res.lower_bound},{value},{res.upper_bound},{value / denom:.6f}"
        )
    sys.stdout.write("\n".join(rows) + "\n")
    return EXIT_OK


def cmd_compose(args) -> int:
    cfg = config_from_dict(load_json(args.path))
    if args.op == "blowup":
        if args.n_inner is None:
            sys.stderr.write("blowup needs --n-inner\n")
            return EXIT_USAGE
        builder = {
            "cover": blowup_covering,
            "pack": blowup_packing,
            "pack2": blowup_two_packing,
        }[args.kind]
        out_cfg = builder(cfg, args.n_inner)
    elif args.op == "stack":
        out_cfg = stack(cfg, args.copies if args.copies is not None else cfg.params.n)
    else:
        out_cfg = extend_covering(cfg)
    doc = config_to_dict(out_cfg)
    if args.out:
        with open(args.out, "w") as f:
            f.write(dump_json(doc))
        sys.stdout.write(dump_json({"op": args.op, "rooks": len(out_cfg), "out": args.out}))
    else:
        sys.stdout.write(dump_json(doc))
    return EXIT_OK


# ---------------------------------------------------------------- wiring
def _build_parser():
    p = argparse.ArgumentParser(prog="rookpack")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="closed-form bounds for one instance")
    for flag in ("--n", "--k", "--l"):
        b.add_argument(flag, type=int, required=True)
    b.set_defaults(fn=cmd_bounds)

    c = sub.add_parser("construct", help="emit a named construction as JSON")
    c.add_argument("name")
    for flag in ("--n", "--k", "--l", "--n1", "--t", "--p", "--a", "--b"):
        c.add_argument(flag, type=int)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_construct)

    v = sub.add_parser("verify", help="check a configuration file")
    v.add_argument("mode", choices=("cover", "pack", "pack2"))
    v.add_argument("path")
    v.add_argument("--strict", action="store_true")
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("solve", help="exact optimum with caching")
    s.add_argument("mode", choices=("a", "b", "c", "coverage"))
    for flag in ("--n", "--k", "--l"):
        s.add_argument(flag, type=int, required=True)
    s.add_argument("--N", type=int)
    s.add_argument("--strict", action="store_true")
    s.add_argument("--symmetry", action="store_true")
    s.add_argument("--max-nodes", type=int, default=5_000_000)
    s.add_argument("--max-seconds", type=float, default=60.0)
    s.set_defaults(fn=cmd_solve)

    e = sub.add_parser("encode", help="emit an integer program (LP format)")
    e.add_argument("mode", choices=("min_cover", "max_pack", "max_two_pack"))
    for flag in ("--n", "--k", "--l"):
        e.add_argument(flag, type=int, required=True)
    e.add_argument("--out")
    e.set_defaults(fn=cmd_encode)

    t = sub.add_parser("table", help="CSV sweep over n")
    t.add_argument("--mode", choices=("a", "b", "c"), required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--l", type=int, required=True)
    t.add_argument("--n", required=True, help="range like 2..5")
    t.add_argument("--max-nodes", type=int, default=5_000_000)
    t.add_argument("--max-seconds", type=float, default=60.0)
    t.set_defaults(fn=cmd_table)

    m = sub.add_parser("compose", help="blowup / stack / extend a configuration")
    m.add_argument("op", choices=("blowup", "stack", "extend"))
    m.add_argument("path")
    m.add_argument("--kind", choices=("cover", "pack", "pack2"), default="cover")
    m.add_argument("--n-inner", dest="n_inner", type=int)
    m.add_argument("--copies", type=int)
    m.add_argument("--out")
    m.set_defaults(fn=cmd_compose)
    return p


def main(argv=None) -> int:
    threads = os.environ.get("ROOKPACK_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            sys.stderr.write("ROOKPACK_THREADS must be a positive integer\n")
            return EXIT_USAGE
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except RookError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except json.JSONDecodeError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_IO
    except OSError as e:
        sys.stderr.write(f"I/O error: {e}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
