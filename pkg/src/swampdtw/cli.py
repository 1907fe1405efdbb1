"""Command-line interface: ``swampdtw find|oracle|bench-lb|generate``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numba
import numpy as np

from .bench import bench_lb
from .core import SearchConfig, SwampError, TimeSeries
from .datagen import KINDS, generate
from .oracle import brute_force_motif
from .report import RunReport, config_dict, format_series, ingest
from .swamp import run_swamp

log = logging.getLogger("swampdtw")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_argument_group("input")
    src.add_argument("--input", metavar="PATH", help="one float per line, or CSV with --column")
    src.add_argument("--column", metavar="NAME|INDEX", help="CSV column (header name or 1-based index)")
    src.add_argument("--generate", metavar="KIND", choices=KINDS, help="synthetic input instead of --input")
    src.add_argument("--n", type=int, help="generated series length")
    src.add_argument("--seed", type=int, default=0)
    src.add_argument("--noise", type=float, default=0.0, help="planted-motif noise amplitude")
    p.add_argument("--length", type=int, metavar="L", help="subsequence length")
    win = p.add_mutually_exclusive_group()
    win.add_argument("--window", type=int, metavar="W", help="absolute warping window")
    win.add_argument("--window-frac", type=float, metavar="F", help="window as a fraction of L")
    p.add_argument("--mode", choices=("raw", "znorm"), default="raw")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--output", metavar="PATH", help="write to PATH instead of stdout")
    p.add_argument("--dump-profiles", metavar="DIR", help="write per-level profiles as CSV")
    p.add_argument("--threads", type=int, metavar="K", help="cap on worker threads")
    p.add_argument("--no-timings", action="store_true", help="omit timings (byte-stable output)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    parser = _Parser(prog="swampdtw", description="Exact DTW motif discovery.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("find", parents=[shared], help="exact top-1 DTW motif")
    o = sub.add_parser("oracle", parents=[shared], help="brute-force top-1 DTW motif")
    o.add_argument("--force", action="store_true", help="allow n > 20000")
    b = sub.add_parser("bench-lb", parents=[shared], help="tightness/time spectrum of the bounds")
    b.add_argument("--pairs", type=int, default=1000)
    b.add_argument("--levels", help="comma-separated PAA factors (default: powers of two <= L)")
    b.add_argument("--repeats", type=int, default=7)
    sub.add_parser("generate", parents=[shared], help="write a synthetic series")
    return parser


def _series(args) -> tuple[TimeSeries, dict]:
    if args.input and args.generate:
        raise UsageError("use either --input or --generate, not both")
    if args.input:
        return ingest(args.input, args.column), {"path": args.input, "column": args.column}
    if args.generate:
        if args.n is None:
            raise UsageError("--generate needs --n")
        if args.generate == "planted-motif" and args.length is None:
            raise UsageError("planted-motif generation needs --length")
        ts = generate(args.generate, args.n, args.length or 0, args.seed, args.noise)
        desc = {"generator": args.generate, "n": args.n, "seed": args.seed, "noise": args.noise}
        return ts, desc
    raise UsageError("an input is required: --input PATH or --generate KIND")


def _config(args) -> SearchConfig:
    if args.length is None:
        raise UsageError("--length is required")
    if args.window_frac is not None:
        if not 0 <= args.window_frac <= 1:
            raise UsageError("--window-frac must lie in [0, 1]")
        w = int(math.floor(args.window_frac * args.length))
    else:
        w = args.window if args.window is not None else 0
    return SearchConfig(args.length, w, args.mode, args.epsilon)


def _set_threads(k: Optional[int]) -> None:
    if k is None:
        return
    if k < 1:
        raise UsageError("--threads must be >= 1")
    cap = numba.config.NUMBA_NUM_THREADS
    if k > cap:
        log.warning("--threads %d exceeds the %d threads numba was started with; using %d", k, cap, cap)
    numba.set_num_threads(min(k, cap))


def _write_csv(path: Path, values: np.ndarray) -> None:
    path.write_text("".join(f"{v!r}\n" for v in np.asarray(values, dtype=float).tolist()))


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_find(args) -> None:
    ts, desc = _series(args)
    cfg = _config(args)
    run = run_swamp(ts, cfg, keep_levels=bool(args.dump_profiles))
    report = RunReport.from_result(desc, cfg, run.result, timings=not args.no_timings)
    if args.dump_profiles:
        out = Path(args.dump_profiles)
        out.mkdir(parents=True, exist_ok=True)
        dumps = {"ed_mp": str(out / "ed_mp.csv")}
        _write_csv(out / "ed_mp.csv", run.phase_one.ed_profile.distances)
        for lv in run.level_profiles:
            name = f"lbmp_D{lv.factor}"
            _write_csv(out / f"{name}.csv", lv.lbmp)
            dumps[name] = str(out / f"{name}.csv")
        report.dumps = dumps
    _emit(args, report.to_json())


def cmd_oracle(args) -> None:
    ts, desc = _series(args)
    cfg = _config(args)
    result = brute_force_motif(ts, cfg, force=args.force)
    report = RunReport.from_result(desc, cfg, result, timings=not args.no_timings)
    _emit(args, report.to_json())


def cmd_bench(args) -> None:
    ts, desc = _series(args)
    cfg = _config(args)
    levels = None
    if args.levels:
        try:
            levels = [int(v) for v in args.levels.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--levels must be comma-separated integers, got {args.levels!r}")
    rows = bench_lb(ts, cfg.subsequence_length, cfg.warp_window, args.pairs, levels,
                    seed=args.seed, repeats=args.repeats)
    bench = []
    for r in rows:
        d = r.to_dict()
        if args.no_timings:
            d.pop("mean_time_ns")
        bench.append(d)
    report = RunReport(input=desc, config=config_dict(cfg), bench=bench)
    _emit(args, report.to_json())


def cmd_generate(args) -> None:
    if args.input:
        raise UsageError("generate does not take --input")
    if not args.generate:
        args.generate = "random-walk"
    ts, _ = _series(args)
    _emit(args, format_series(ts))


COMMANDS = {"find": cmd_find, "oracle": cmd_oracle, "bench-lb": cmd_bench, "generate": cmd_generate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        _set_threads(args.threads)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"swampdtw: usage error: {exc}", file=sys.stderr)
        return 1
    except SwampError as exc:
        print(f"swampdtw: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"swampdtw: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
