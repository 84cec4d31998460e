"""
Command-line entry point: ``pseudobound <subcommand> ...``.

Exit status is 0 on success, 1 on invalid input and 2 when a
verification finds a mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from .bipermutation import (
    Bipermutation,
    CapacityExceeded,
    MemoTable,
    ReroutingCounter,
    format_decimal,
    gen_complete_sequence,
    log2_floor,
)
from .construction import ConfigError, assemble_bound, format_report, load_config
from .geometry import PatchError, bipermutation_of_patch, load_patch
from .lgv import format_lgv_table, lgv_count, lgv_table
from .oracle import crosscheck, gen_grid3, reduced_word_classes
from .verify import check_p4, run_all

__all__ = ["RunSummary", "build_parser", "run", "main"]

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2

# inputs beyond these sizes need --allow-long
LONG_SEGMENTS = 24
LONG_SIDE = 200
# exact LGV counts are printed up to this side length
PRINT_COUNT_SIDE = 60


class UsageError(Exception):
    pass


@dataclass
class RunSummary:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    count: int | None = None
    log2: str | None = None
    elapsed: float = 0.0
    memo: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        if d["count"] is not None:
            d["count"] = str(d["count"])  # keep big integers exact for any reader
        d["elapsed"] = round(d["elapsed"], 6)
        return json.dumps(d, sort_keys=True)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pseudobound", description="Count patch reroutings and assemble lower bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count-patch", help="count the reroutings of one patch")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="patch file")
    src.add_argument("--biperm", help='bipermutation as space-separated labels, e.g. "1 2 3 1 2 3"')
    src.add_argument("--complete", type=int, metavar="N", help="patch of N pairwise crossing segments")
    src.add_argument("--grid3", type=int, metavar="L", help="L x L three-slope square patch")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--memo-cap", type=int, default=None, help="maximum memo entries")
    c.add_argument("--log2-places", type=int, default=2)
    c.add_argument("--show-biperm", action="store_true", help="also print the bipermutation")
    c.add_argument("--allow-long", action="store_true", help=f"allow more than {LONG_SEGMENTS} segments")
    c.add_argument("--json", action="store_true", help="print a JSON summary instead of text")

    g = sub.add_parser("lgv", help="count square three-slope patches by a determinant")
    which = g.add_mutually_exclusive_group(required=True)
    which.add_argument("--side", type=int)
    which.add_argument("--table", help="comma-separated side lengths")
    g.add_argument("--log2-places", type=int, default=3)
    g.add_argument("--allow-long", action="store_true", help=f"allow sides above {LONG_SIDE}")
    g.add_argument("--json", action="store_true")

    b = sub.add_parser("bound", help="assemble a lower bound from a construction config")
    b.add_argument("--config", required=True)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--memo-cap", type=int, default=None)

    o = sub.add_parser("oracle", help="independent reference counts")
    osub = o.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    bn = osub.add_parser("bn", help="simple arrangements of n pseudolines by brute force")
    bn.add_argument("--n", type=int, required=True)
    cc = osub.add_parser("crosscheck", help="compare the dynamic program with independent counts")
    cc.add_argument("--lmax", type=int, default=2)
    cc.add_argument("--nmax", type=int, default=4)

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--allow-long", action="store_true", help="also count the four-bundle square patch (hours)")
    v.add_argument("--verbose", action="store_true")
    return p


def _positive(name, value):
    if value is not None and value < 1:
        raise UsageError(f"{name} must be >= 1")


def _count_patch(args, out) -> int:
    _positive("--threads", args.threads)
    _positive("--memo-cap", args.memo_cap)
    if args.log2_places < 0:
        raise UsageError("--log2-places must be >= 0")
    if args.file is not None:
        bip = bipermutation_of_patch(load_patch(args.file))
        inputs = {"file": args.file}
    elif args.biperm is not None:
        bip = Bipermutation.parse(args.biperm)
        inputs = {"biperm": args.biperm}
    elif args.complete is not None:
        _positive("--complete", args.complete)
        bip = Bipermutation(gen_complete_sequence(args.complete))
        inputs = {"complete": args.complete}
    else:
        _positive("--grid3", args.grid3)
        bip = bipermutation_of_patch(gen_grid3(args.grid3))
        inputs = {"grid3": args.grid3}
    if bip.segment_count > LONG_SEGMENTS and not args.allow_long:
        raise UsageError(
            f"{bip.segment_count} segments may take hours; pass --allow-long to run anyway"
        )
    memo = MemoTable(args.memo_cap)
    counter = ReroutingCounter(memo, threads=args.threads)
    t0 = time.perf_counter()
    count = counter.count(bip)
    elapsed = time.perf_counter() - t0
    lg = format_decimal(log2_floor(count, args.log2_places), args.log2_places)
    if args.show_biperm:
        inputs["bipermutation"] = str(bip)
    summary = RunSummary("count-patch", inputs, count, lg, elapsed, memo.stats())
    if args.json:
        print(summary.to_json(), file=out)
        return EXIT_OK
    print(count, file=out)
    print(f"log2 >= {lg}", file=out)
    print(f"segments: {bip.segment_count}", file=out)
    if args.show_biperm:
        print(f"bipermutation: {bip}", file=out)
    stats = summary.memo
    print(f"memo: entries={stats['entries']} hits={stats['hits']} misses={stats['misses']}", file=out)
    print(f"elapsed: {elapsed:.3f}s", file=out)
    return EXIT_OK


def _lgv(args, out) -> int:
    if args.log2_places < 0:
        raise UsageError("--log2-places must be >= 0")
    if args.side is not None:
        sides = [args.side]
    else:
        try:
            sides = [int(s) for s in args.table.split(",") if s.strip()]
        except ValueError:
            raise UsageError(f"--table expects comma-separated integers, got {args.table!r}") from None
        if not sides:
            raise UsageError("--table is empty")
    for s in sides:
        _positive("side", s)
        if s > LONG_SIDE and not args.allow_long:
            raise UsageError(f"side {s} may take hours; pass --allow-long to run anyway")
    if args.table is not None:
        rows = lgv_table(sides, log2_places=args.log2_places)
        if args.json:
            for r in rows:
                lg = format_decimal(r.log2, args.log2_places)
                print(RunSummary("lgv", {"side": r.side}, r.count, lg, r.seconds).to_json(), file=out)
        else:
            print(format_lgv_table(rows, log2_places=args.log2_places), file=out)
        return EXIT_OK
    side = sides[0]
    t0 = time.perf_counter()
    count = lgv_count(side)
    elapsed = time.perf_counter() - t0
    lg = format_decimal(log2_floor(count, args.log2_places), args.log2_places)
    if args.json:
        print(RunSummary("lgv", {"side": side}, count, lg, elapsed).to_json(), file=out)
        return EXIT_OK
    if side <= PRINT_COUNT_SIDE:
        print(count, file=out)
    else:
        print(f"({len(str(count))}-digit count not shown)", file=out)
    print(f"log2 >= {lg}", file=out)
    print(f"elapsed: {elapsed:.3f}s", file=out)
    return EXIT_OK


def _bound(args, out) -> int:
    _positive("--threads", args.threads)
    _positive("--memo-cap", args.memo_cap)
    config = load_config(args.config)
    counter = ReroutingCounter(MemoTable(args.memo_cap), threads=args.threads)
    base = os.path.dirname(os.path.abspath(args.config))
    report = assemble_bound(config, counter, base_dir=base)
    print(format_report(report), file=out)
    return EXIT_OK


def _oracle(args, out) -> int:
    if args.oracle_command == "bn":
        if not 2 <= args.n <= 6:
            raise UsageError("oracle bn supports 2 <= n <= 6")
        t0 = time.perf_counter()
        res = reduced_word_classes(args.n)
        elapsed = time.perf_counter() - t0
        dp = ReroutingCounter().count(gen_complete_sequence(args.n))
        print(res.classes, file=out)
        print(f"reduced words: {res.words}", file=out)
        print(f"dynamic program: {dp}", file=out)
        print(f"elapsed: {elapsed:.3f}s", file=out)
        return EXIT_OK if dp == res.classes else EXIT_MISMATCH
    _positive("--lmax", args.lmax)
    if not 2 <= args.nmax <= 6:
        raise UsageError("--nmax must be between 2 and 6")
    report = crosscheck(args.lmax, args.nmax)
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _verify(args, out) -> int:
    results = run_all()
    if args.allow_long:
        results.append(check_p4())
    for r in results:
        print(r.line(), file=out)
        if args.verbose or not r.ok:
            for d in r.details:
                print(f"      {d}", file=out)
    ok = all(r.ok for r in results)
    print(f"{sum(r.ok for r in results)}/{len(results)} checks passed", file=out)
    return EXIT_OK if ok else EXIT_MISMATCH


_HANDLERS = {
    "count-patch": _count_patch,
    "lgv": _lgv,
    "bound": _bound,
    "oracle": _oracle,
    "verify": _verify,
}


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _HANDLERS[args.command](args, out)
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    except (UsageError, PatchError, ConfigError, CapacityExceeded, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=err)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
