"""Command-line front end.

Every subcommand prints a plain-text table, and can also write a JSON report
(``--out``) and one CSV per table (``--csv DIR``).  Settings come from
built-in defaults, then an INI file (``--config``; section ``[common]`` and
a section named after the subcommand), then command-line flags.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .bfs_core import (
    ConstantExponent,
    VariableExponent,
    WeightPair,
    associate_caveat,
    associate_norm,
    holder_defect,
    integrate,
    log_holder_check,
    luxemburg_norm,
    muckenhoupt_constant,
)
from .errors import HardyError, InputError
from .grid import Interval, parse_function
from .hardy_op import OperatorSpec, compactness_profile, norm_bracket
from .oracle import discretize, svd_snumbers
from .partition import Marcher, asymptote, count_intervals, snum_estimate, solve_epsilon
from .script_a import NormMaps, script_a_bracket

COMMANDS = ("norm", "bound", "compact", "script-a", "equalize", "partition", "snum", "oracle", "asymptote")


@dataclass
class RunConfig:
    a: float = 0.0
    b: float = 1.0
    p: str = "2"
    u: str = "const:1"
    v: str = "const:1"
    grid: int = 4096
    seed: int = 0
    eps: float | None = None
    n: int | None = None
    n_list: str = "4,8,16,32"
    depth: int = 6
    budget: int = 20
    n_points: int = 8
    restarts: int = 5
    c_low: float = 1.0
    c_up: float = 1.0

    def validate(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise InputError(f"need finite a < b, got ({self.a}, {self.b})")
        if self.grid < 16:
            raise InputError("grid must be >= 16")
        if self.budget < 1:
            raise InputError("budget must be >= 1")
        if self.depth < 1:
            raise InputError("depth must be >= 1")
        if self.n_points < 2:
            raise InputError("n-points must be >= 2")
        if self.eps is not None and not self.eps > 0:
            raise InputError("eps must be positive")
        if self.n is not None and self.n < 2:
            raise InputError("n must be >= 2")

    def ns(self) -> list:
        try:
            ns = [int(t) for t in str(self.n_list).replace(" ", "").split(",") if t]
        except ValueError:
            raise InputError(f"bad n-list {self.n_list!r}") from None
        if not ns:
            raise InputError("n-list is empty")
        if any(n < 2 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise InputError("n-list must be increasing integers >= 2")
        return ns

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name, raw):
    kind = _FIELD_TYPES[name]
    if raw is None:
        return None
    try:
        if "float" in kind:
            return float(raw)
        if "int" in kind:
            return int(raw)
    except ValueError:
        raise InputError(f"bad value for {name}: {raw!r}") from None
    return str(raw)


def load_config(command: str, path, overrides: dict) -> RunConfig:
    values = {}
    if path:
        parser = configparser.ConfigParser()
        if not Path(path).exists():
            raise InputError(f"no such config file: {path}")
        parser.read(path)
        for section in ("common", command):
            if parser.has_section(section):
                for key, raw in parser.items(section):
                    key = key.replace("-", "_")
                    if key not in _FIELD_TYPES:
                        raise InputError(f"unknown config key {key!r} in [{section}]")
                    values[key] = _coerce(key, raw)
    for key, raw in overrides.items():
        if raw is not None:
            values[key] = _coerce(key, raw)
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def build(cfg: RunConfig):
    iv = Interval(cfg.a, cfg.b)
    u = parse_function(cfg.u, iv, cfg.grid)
    v = parse_function(cfg.v, iv, cfg.grid)
    weights = WeightPair(u, v)
    try:
        space = ConstantExponent(float(cfg.p))
    except ValueError:
        space = VariableExponent(parse_function(cfg.p, iv, cfg.grid))
    weights.check_admissible(space)
    return iv, weights, space


# -- commands --------------------------------------------------------------------

def cmd_norm(cfg: RunConfig):
    iv, W, space = build(cfg)
    results = {
        "u_associate_norm": associate_norm(W.u, space),
        "v_norm": luxemburg_norm(W.v, space),
        "integral_uv": integrate(W.u * W.v),
        "holder_defect": holder_defect(W.v, W.u, space),
    }
    diag = {"associate_caveat": associate_caveat(space)}
    if isinstance(space, VariableExponent):
        lh = log_holder_check(space.p)
        diag["log_holder"] = {"constant": lh.constant, "pass": lh.passed, "suspected_jump": lh.suspected_jump}
        diag["muckenhoupt_constant"] = muckenhoupt_constant(space, iv, cfg.depth)
    return results, {}, diag


def cmd_bound(cfg: RunConfig):
    iv, W, space = build(cfg)
    op = OperatorSpec.on(W, space)
    nb = norm_bracket(op, cfg.budget, cfg.restarts, cfg.seed)
    prof = compactness_profile(op, cfg.n_points)
    results = {"lower": nb.lower, "upper": nb.upper, "a_sup": nb.a_sup, "argmax": nb.argmax,
               "K": nb.K, "method": nb.method}
    return results, _profile_tables(prof), {"flags": list(nb.flags)}


def _profile_tables(prof):
    return {
        "compact_left": [{"x": x, "value": y} for x, y in zip(prof.x_left, prof.left)],
        "compact_right": [{"x": x, "value": y} for x, y in zip(prof.x_right, prof.right)],
    }


def cmd_compact(cfg: RunConfig):
    iv, W, space = build(cfg)
    prof = compactness_profile(OperatorSpec.on(W, space), cfg.n_points)
    return {"n_points": cfg.n_points}, _profile_tables(prof), {"associate_caveat": associate_caveat(space)}


def cmd_script_a(cfg: RunConfig):
    iv, W, space = build(cfg)
    br = script_a_bracket(iv, W, space, cfg.budget, cfg.restarts, cfg.seed)
    return asdict(br), {}, {"associate_caveat": associate_caveat(space)}


def cmd_equalize(cfg: RunConfig):
    iv, W, space = build(cfg)
    maps = NormMaps(W, space)
    value, e = maps.a_hat(iv.a, iv.b)
    results = {"e": e, "a_hat": value, "left": maps.left(iv.a, e), "right": maps.right(e, iv.b)}
    return results, {}, {"associate_caveat": associate_caveat(space)}


def _partition_table(part):
    return [{"i": i + 1, "left": lo, "right": hi, "kind": iv.kind, "value": iv.value}
            for i, (lo, hi, iv) in enumerate(zip(part.points[:-1], part.points[1:], part.per_interval))]


def cmd_partition(cfg: RunConfig):
    iv, W, space = build(cfg)
    op = OperatorSpec.on(W, space)
    if cfg.eps is not None:
        N, part = count_intervals(cfg.eps, op)
    elif cfg.n is not None:
        part = solve_epsilon(cfg.n, op)
        N = part.N
    else:
        raise InputError("partition needs --eps or --n")
    return {"N": N, "epsilon": part.epsilon}, {"partition": _partition_table(part)}, \
        {"associate_caveat": associate_caveat(space)}


def _hilbert(space) -> bool:
    return isinstance(space, ConstantExponent) and space.p == 2.0


def cmd_snum(cfg: RunConfig):
    iv, W, space = build(cfg)
    op = OperatorSpec.on(W, space)
    ns = cfg.ns()
    sigma = svd_snumbers(discretize(op), max(ns)) if _hilbert(space) else None
    marcher = Marcher(op)
    rows = []
    for N in ns:
        est = snum_estimate(N, op, cfg.c_low, cfg.c_up, marcher)
        row = {"N": N, "epsilon_N": est.epsilon_N, "lower": est.lower, "upper": est.upper}
        if sigma is not None:
            row["sigma_N"] = float(sigma[N - 1])
            row["ratio"] = est.epsilon_N / float(sigma[N - 1])
        rows.append(row)
    notes = ["equivalence constants are configured, not sharp"]
    return {"N_list": ns}, {"snum": rows}, {"notes": notes, "associate_caveat": associate_caveat(space)}


def cmd_oracle(cfg: RunConfig):
    iv, W, space = build(cfg)
    if not _hilbert(space):
        raise InputError("the SVD oracle needs p = 2")
    k = cfg.n or max(cfg.ns())
    s = svd_snumbers(discretize(OperatorSpec.on(W, space)), k)
    rows = [{"n": i + 1, "sigma_n": float(x), "n_sigma_n": (i + 1) * float(x)} for i, x in enumerate(s)]
    I_uv = integrate(W.u * W.v)
    return {"k": k, "reference_limit": I_uv / math.pi}, {"singular_values": rows}, {}


def cmd_asymptote(cfg: RunConfig):
    iv, W, space = build(cfg)
    rep = asymptote(cfg.ns(), OperatorSpec.on(W, space))
    rows = [asdict(r) for r in rep.rows]
    results = {"integral_uv": rep.integral_uv, "reference": rep.reference, "reference_kind": rep.reference_kind,
               "min_N_eps": rep.min_N_eps, "max_N_eps": rep.max_N_eps}
    return results, {"asymptote": rows}, {"flags": list(rep.flags)}


HANDLERS = {
    "norm": cmd_norm, "bound": cmd_bound, "compact": cmd_compact, "script-a": cmd_script_a,
    "equalize": cmd_equalize, "partition": cmd_partition, "snum": cmd_snum, "oracle": cmd_oracle,
    "asymptote": cmd_asymptote,
}


# -- output ------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def print_report(command, results, tables, diagnostics, stream):
    print(f"# {command}", file=stream)
    for k, v in results.items():
        print(f"{k:>20}  {_fmt(v)}", file=stream)
    for name, rows in tables.items():
        print(f"\n## {name}", file=stream)
        if not rows:
            continue
        cols = list(rows[0])
        print("  ".join(f"{c:>14}" for c in cols), file=stream)
        for r in rows:
            print("  ".join(f"{_fmt(r[c]):>14}" for c in cols), file=stream)
    for k, v in diagnostics.items():
        print(f"[{k}] {v}", file=stream)


def write_csv(dirpath, tables):
    d = Path(dirpath)
    d.mkdir(parents=True, exist_ok=True)
    for name, rows in tables.items():
        with open(d / f"{name}.csv", "w", newline="") as fh:
            if not rows:
                continue
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            for r in rows:
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [common] and per-command sections")
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--p", help="constant exponent, or csv:PATH / function spec for p(x)")
    common.add_argument("--u", help="weight u: const:/pow:/exp:/sin:/lin: spec or csv:PATH")
    common.add_argument("--v", help="weight v, same forms as --u")
    common.add_argument("--grid", type=int, help="number of grid cells M")
    common.add_argument("--seed", type=int)
    common.add_argument("--eps", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--n-list", dest="n_list")
    common.add_argument("--depth", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--n-points", dest="n_points", type=int)
    common.add_argument("--restarts", type=int)
    common.add_argument("--out", help="write a JSON report here")
    common.add_argument("--csv", help="write one CSV per table into this directory")
    parser = argparse.ArgumentParser(prog="hardy-snum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = make_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in _FIELD_TYPES if hasattr(args, k)}
    errors = []
    cfg = None
    results, tables, diagnostics = {}, {}, {}
    try:
        cfg = load_config(args.command, args.config, overrides)
        results, tables, diagnostics = HANDLERS[args.command](cfg)
    except HardyError as exc:
        errors.append({"type": type(exc).__name__, "message": str(exc)})
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
    report = {
        "command": args.command,
        "config": asdict(cfg) if cfg else {k: v for k, v in overrides.items() if v is not None},
        "results": results,
        "tables": tables,
        "diagnostics": {**diagnostics, "errors": errors},
        "meta": {"config_hash": cfg.digest() if cfg else None, "seed": cfg.seed if cfg else None,
                 "grid": cfg.grid if cfg else None, "version": __version__},
    }
    report = _jsonable(report)
    if not errors:
        print_report(args.command, results, tables, diagnostics, stdout)
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True))
    if args.csv and not errors:
        write_csv(args.csv, tables)
    return 0 if not errors else 2


def main() -> None:
    sys.exit(run())
