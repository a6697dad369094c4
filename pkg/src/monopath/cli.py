"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 oracle exhausted, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .classifier import classify
from .gameengine import ADAMS, GameSpec, IllegalMove, bob_for, play_game
from .graphcore import (
    ALL,
    ArityError,
    DomainError,
    Exhausted,
    FiniteClass,
    LazyColoring,
    VertexClass,
    default_horizon,
    load_coloring_file,
    make_oracle,
    parse_coloring_spec,
    type_class,
)
from .hyperpart import tight_cycle_partition, tight_path_partition
from .paths import PartitionResult, verify_partition
from .powerpart import counterexample_check, four_square_partition, power_partition, sweep_pokrovskiy
from .radopart import rado_partition

EXIT_OK, EXIT_VERIFY, EXIT_EXHAUSTED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj, fmt: str = "json") -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        _print_text(obj)


def _print_text(obj, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and val and not all(isinstance(x, (int, float, str)) for x in val):
                print(f"{pad}{key}:")
                _print_text(val, indent + 1)
            else:
                print(f"{pad}{key}: {val}")
    elif isinstance(obj, list):
        for item in obj:
            _print_text(item, indent) if isinstance(item, (dict, list)) else print(f"{pad}- {item}")
            if isinstance(item, dict):
                print(f"{pad}--")
    else:
        print(f"{pad}{obj}")


def load_coloring(spec: str, r: int | None = None, k: int | None = None) -> LazyColoring:
    if os.path.exists(spec):
        return load_coloring_file(spec)
    try:
        return parse_coloring_spec(spec, {"r": r, "k": k})
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad coloring spec {spec!r}: {exc}") from exc


def _oracle(coloring, args, prefix: int):
    horizon = args.horizon or default_horizon(prefix)
    return make_oracle(coloring, horizon=horizon, mode=args.oracle, prefix=prefix)


def parse_class(text: str, coloring: LazyColoring) -> VertexClass:
    """``all``, ``set:1|2|3``, or type names joined by ``+``."""
    if text == "all":
        return ALL
    if text.startswith("set:"):
        return FiniteClass(int(v) for v in filter(None, text[4:].split("|")))
    if coloring.structure is None:
        raise UsageError(f"{coloring.tag} has no vertex types; use 'all' or 'set:...'")
    names = text.split("+")
    known = {t.name for t in coloring.structure.types}
    if not set(names) <= known:
        raise UsageError(f"unknown types {sorted(set(names) - known)}; known: {sorted(known)}")
    return type_class(coloring, names)


# ---------------------------------------------------------------------------
# commands


def cmd_partition(args) -> int:
    coloring = load_coloring(args.coloring, args.r, args.k)
    oracle = _oracle(coloring, args, args.prefix)
    if args.mode == "rado":
        result = rado_partition(coloring, args.prefix, oracle)
    elif args.mode == "tight":
        result = tight_path_partition(coloring, args.prefix, oracle)
    elif args.mode == "tightcycle":
        result = tight_cycle_partition(coloring, args.prefix, oracle)
    elif args.mode == "power":
        result = power_partition(coloring, args.power, args.prefix, oracle)
    else:
        result = four_square_partition(coloring, args.prefix, oracle)
    report = verify_partition(coloring, result)
    out = result.to_json()
    out["coloring"] = args.coloring
    out["horizon"] = oracle.horizon
    out["verification"] = report.to_json()
    _dump(out, args.format)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not JSON: {exc}") from exc
    spec = args.coloring or data.get("coloring")
    if not spec:
        raise UsageError("no coloring given and none recorded in the input")
    coloring = load_coloring(spec, args.r, args.k)
    try:
        result = PartitionResult.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed partition: {exc}") from exc
    report = verify_partition(coloring, result)
    _dump(report.to_json(), args.format)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_game(args) -> int:
    spec_text, color = args.host, args.host_color
    if "@" in spec_text:
        spec_text, _, c = spec_text.rpartition("@")
        color = int(c)
    if color is None:
        raise UsageError("host colour missing: use SPEC@i or --host-color")
    coloring = load_coloring(spec_text)
    entries = [parse_class(t, coloring) for t in args.ladder.split(",")]
    if len(entries) == 1:
        entries = entries * (args.k + 1)
    if len(entries) != args.k + 1:
        raise UsageError(f"ladder needs k+1 = {args.k + 1} entries, got {len(entries)}")
    oracle = _oracle(coloring, args, args.prefix)
    spec = GameSpec(coloring, color, entries, oracle)
    adam = ADAMS[args.adam](args.seed)
    try:
        result = play_game(spec, adam, bob_for(spec, local=not args.full_neighbourhood), args.rounds, args.prefix)
    except IllegalMove as exc:
        _dump({"error": "illegal-move", "message": str(exc)}, args.format)
        return EXIT_VERIFY
    _dump(result.to_json(), args.format)
    return EXIT_OK if result.bob_wins else EXIT_VERIFY


def cmd_classify(args) -> int:
    coloring = load_coloring(args.coloring, args.r, args.k)
    oracle = _oracle(coloring, args, args.prefix)
    cl = classify(coloring, args.prefix, oracle)
    _dump(cl.to_json(args.prefix), args.format)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    report = counterexample_check(args.prefix)
    _dump(report, args.report)
    ok = not report["twoSquareCover"] and report["zeroSquareBoundsHold"] and report["mixedSquaresAllColorOne"]
    return EXIT_OK if ok else EXIT_VERIFY


def _sweep_shard(params):
    return sweep_pokrovskiy(**params)


def cmd_sweep(args) -> int:
    base = {"n": args.n, "k": args.k, "samples": args.samples, "seed": args.seed, "shards": args.shards}
    shards = [args.shard] if args.shard is not None else list(range(args.shards))
    jobs = [{**base, "shard": s} for s in shards]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            parts = list(pool.map(_sweep_shard, jobs))
    else:
        parts = [_sweep_shard(j) for j in jobs]
    out = {
        "n": args.n,
        "k": args.k,
        "checked": sum(p["checked"] for p in parts),
        "alarms": sum(p["alarms"] for p in parts),
        "failures": [f for p in parts for f in p["failures"]][:20],
        "shards": shards,
    }
    _dump(out, args.format)
    return EXIT_OK if out["alarms"] == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="monopath", description="Monochromatic path partitions of coloured complete (hyper)graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, coloring=True):
        if coloring:
            sp.add_argument("--coloring", required=True, help="family:params or a coloring file")
            sp.add_argument("--r", type=int, help="number of colours, if the family takes it")
            sp.add_argument("--k", type=int, help="uniformity, if the family takes it")
        sp.add_argument("--horizon", type=int, help="oracle horizon (default MONOPATH_HORIZON or 10n+1000)")
        sp.add_argument("--oracle", choices=["exact", "scan"], help="force the oracle mode")
        sp.add_argument("--format", choices=["json", "text"], default="json")

    sp = sub.add_parser("partition", help="build and verify a partition")
    sp.add_argument("--mode", required=True, choices=["rado", "tight", "tightcycle", "power", "squares"])
    sp.add_argument("--prefix", type=int, default=50)
    sp.add_argument("--power", type=int, default=2, help="power of the paths in power mode")
    common(sp)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("verify", help="re-verify a partition JSON")
    sp.add_argument("--input", default="-", help="file, or - for standard input")
    sp.add_argument("--coloring", help="overrides the coloring recorded in the input")
    sp.add_argument("--r", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("game", help="covering games")
    gsub = sp.add_subparsers(dest="game_command", required=True, parser_class=_Parser)
    gp = gsub.add_parser("play", help="play Bob's strategy against an Adam strategy")
    gp.add_argument("--host", required=True, help="SPEC@colour, or SPEC with --host-color")
    gp.add_argument("--host-color", type=int)
    gp.add_argument("--k", type=int, default=2, help="power")
    gp.add_argument("--ladder", default="all", help="comma separated W_0..W_k (one entry is repeated)")
    gp.add_argument("--adam", choices=sorted(ADAMS), default="empty")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--rounds", type=int, default=50)
    gp.add_argument("--prefix", type=int, default=10)
    gp.add_argument("--full-neighbourhood", action="store_true", help="join each cell to all earlier lower-row cells")
    common(gp, coloring=False)
    gp.set_defaults(func=cmd_game)

    sp = sub.add_parser("classify", help="print the vertex classification")
    sp.add_argument("--prefix", type=int, default=20)
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("counterexample", help="check the finite core of the three-squares lower bound")
    sp.add_argument("--report", choices=["json", "text"], default="json")
    sp.add_argument("--prefix", type=int, default=30)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("sweep", help="exhaustive sweeps")
    ssub = sp.add_subparsers(dest="sweep_command", required=True, parser_class=_Parser)
    pk = ssub.add_parser("pokrovskiy", help="paths-plus-power covers of small 2-coloured K_n")
    pk.add_argument("--n", type=int, required=True)
    pk.add_argument("--k", type=int, default=2)
    pk.add_argument("--samples", type=int, help="seeded samples instead of all colourings")
    pk.add_argument("--seed", type=int, default=0)
    pk.add_argument("--shards", type=int, default=1)
    pk.add_argument("--shard", type=int, help="run only this shard")
    pk.add_argument("--jobs", type=int, default=1, help="worker processes")
    pk.add_argument("--format", choices=["json", "text"], default="json")
    pk.set_defaults(func=cmd_sweep)
    return p


def _validate(args) -> None:
    for name in ("prefix", "rounds", "n"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            raise UsageError(f"--{name} must be >= 0")
    for name in ("horizon", "r", "k", "power", "shards", "jobs"):
        val = getattr(args, name, None)
        if val is not None and val < 1:
            raise UsageError(f"--{name} must be >= 1")
    shard = getattr(args, "shard", None)
    if shard is not None and not 0 <= shard < args.shards:
        raise UsageError("--shard must lie in [0, shards)")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except (UsageError, ArityError, DomainError) as exc:
        print(f"monopath: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exhausted as exc:
        print(json.dumps(exc.to_json(), sort_keys=True))
        return EXIT_EXHAUSTED
    except OSError as exc:
        print(f"monopath: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
