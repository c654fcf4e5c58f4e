"""Command-line entry point.

Exit codes: 0 success, 1 invalid input or arguments, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .assigners import (
    distributed_assign,
    identical_cost,
    identical_range,
    optimal_assign,
    suboptimal_assign,
)
from .experiments import (
    PAIRS,
    ExperimentConfig,
    bm_histogram,
    diff_histogram,
    emit_report,
    run_density_sweep,
    pair_key,
)
from .network import NetworkError, assignment_cost, load_network
from .oracle import OracleConfig, brute_force_optimal
from .protocol import run_protocol
from .serialize import dumps, write_text
from .topogen import MODES, GenSpec, generate


class UsageError(NetworkError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text: str):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _source_policy(text: str):
    if text in ("random", "center"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected random, center or an index, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linebroadcast", description="Minimum-energy broadcast range assignment on a line.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a network")
    g.add_argument("--mode", choices=MODES, required=True)
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--length", type=float, default=1000.0)
    g.add_argument("--lambda", dest="lam", type=float, default=0.01)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--source", type=_source_policy, default="random")
    g.add_argument("--r1", type=float, default=102.0)
    g.add_argument("--r2", type=float, default=100.0)
    g.add_argument("--eps1", type=float, default=1.0)
    g.add_argument("--eps2", type=float, default=None)
    g.add_argument("--count", type=int, default=None, help="batch mode: one JSON object per line")
    g.add_argument("--out", default=None)

    a = sub.add_parser("assign", help="compute a range assignment")
    a.add_argument("--algo", choices=("optimal", "suboptimal", "distributed", "identical"), required=True)
    a.add_argument("--net", required=True)
    a.add_argument("--alpha", type=float, default=2.0)
    a.add_argument("--pc", type=float, default=None)
    a.add_argument("--lambda", dest="lam", type=float, default=None)
    a.add_argument("--length", type=float, default=None)
    a.add_argument("--out", default=None)

    o = sub.add_parser("oracle", help="exhaustive optimum for small networks")
    o.add_argument("--net", required=True)
    o.add_argument("--alpha", type=float, default=2.0)
    o.add_argument("--max-n", type=int, default=8)
    o.add_argument("--out", default=None)

    pr = sub.add_parser("protocol", help="simulate the distributed protocol")
    pr.add_argument("--net", required=True)
    pr.add_argument("--out", default=None)

    for name in ("sweep", "hist"):
        e = sub.add_parser(name, help="density sweep" if name == "sweep" else "histograms")
        e.add_argument("--config", default=None, help="JSON file with experiment fields")
        e.add_argument("--length", type=float)
        e.add_argument("--lambdas", type=_floats)
        e.add_argument("--trials", type=int)
        e.add_argument("--alpha", type=float)
        e.add_argument("--pcs", type=_floats)
        e.add_argument("--seed", type=int)
        e.add_argument("--algorithms", type=_names)
        e.add_argument("--mode", choices=MODES)
        e.add_argument("--source", dest="source_policy", type=_source_policy)
        e.add_argument("--bins", type=int)
        e.add_argument("--workers", type=int)
        e.add_argument("--audit", action="store_true", default=None)
        e.add_argument("--format", choices=("csv", "json"), default="csv")
        e.add_argument("--out", default=None)
        if name == "hist":
            e.add_argument("--kind", choices=("diff", "bm"), default="diff")
            e.add_argument("--pair", choices=[pair_key(*q) for q in PAIRS], default="distributed-optimal")
    return p


_CONFIG_FIELDS = ("length", "lambdas", "trials", "alpha", "pcs", "seed", "algorithms", "mode",
                  "source_policy", "bins", "workers", "audit")


def _experiment_config(args) -> ExperimentConfig:
    fields = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise NetworkError("config: expected a JSON object")
        for key, value in data.items():
            if key not in ExperimentConfig.__dataclass_fields__:
                raise NetworkError(f"{key}: unknown config field")
            fields[key] = tuple(value) if isinstance(value, list) else value
    for key in _CONFIG_FIELDS:
        value = getattr(args, key, None)
        if value is not None:
            fields[key] = value
    return ExperimentConfig(**fields)


def _cmd_gen(args):
    spec = GenSpec(mode=args.mode, n=args.n, length=args.length, lam=args.lam, seed=args.seed,
                   source_policy=args.source, r1=args.r1, r2=args.r2, eps1=args.eps1, eps2=args.eps2)
    if args.count is None:
        doc = dict(generate(spec).to_dict(), seed=args.seed, mode=args.mode)
        return dumps(doc) + "\n"
    if args.count < 1:
        raise NetworkError(f"count: need at least 1, got {args.count}")
    lines = []
    for k in range(args.count):
        doc = dict(generate(spec, key=(k,)).to_dict(), seed=args.seed, mode=args.mode, trial=k)
        lines.append(dumps(doc))
    return "\n".join(lines) + "\n"


def _load(path):
    """Network plus the seed recorded by ``gen`` (None for hand-written files)."""
    net = load_network(path)
    seed = json.loads(Path(path).read_text()).get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise NetworkError(f"seed: expected an integer, got {seed!r}")
    return net, seed


def _cmd_assign(args):
    net, seed = _load(args.net)
    bm = None
    if args.algo == "optimal":
        res = optimal_assign(net, args.alpha)
        ranges, cost, bm = res.assignment, res.cost, res.bm
    elif args.algo == "suboptimal":
        res = suboptimal_assign(net, args.alpha)
        ranges, cost = res.assignment, res.cost
    elif args.algo == "distributed":
        ranges = distributed_assign(net)
        cost = assignment_cost(ranges, args.alpha)
    else:
        if args.pc is None:
            raise NetworkError("pc: --pc is required for the identical assignment")
        length = args.length if args.length is not None else net.length
        lam = args.lam if args.lam is not None else net.n / length
        radius, _ = identical_range(args.pc, lam, length)
        ranges = [radius] * net.n
        cost = identical_cost(net.n, radius, args.alpha)
    doc = {"ranges": [float(r) for r in ranges], "cost": float(cost), "algorithm": args.algo, "bm": bm,
           "seed": seed}
    return dumps(doc) + "\n"


def _cmd_oracle(args):
    net, seed = _load(args.net)
    ranges, cost = brute_force_optimal(net, OracleConfig(max_n=args.max_n, alpha=args.alpha))
    return dumps({"ranges": ranges, "cost": cost, "algorithm": "oracle", "bm": None, "seed": seed}) + "\n"


def _cmd_protocol(args):
    net, seed = _load(args.net)
    return dumps(dict(run_protocol(net).to_dict(), seed=seed)) + "\n"


def _cmd_experiment(args):
    cfg = _experiment_config(args)
    if args.command == "sweep":
        report = run_density_sweep(cfg)
    elif args.kind == "bm":
        report = bm_histogram(cfg)
    else:
        report = diff_histogram(cfg, tuple(args.pair.split("-")))
    emit_report(report, args.format, args.out)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command in ("sweep", "hist"):
            _cmd_experiment(args)
        else:
            handler = {"gen": _cmd_gen, "assign": _cmd_assign, "oracle": _cmd_oracle, "protocol": _cmd_protocol}
            write_text(handler[args.command](args), args.out)
    except (NetworkError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        where = f"{exc.filename}: " if getattr(exc, "filename", None) else ""
        print(f"error: {where}{exc.strerror or exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
