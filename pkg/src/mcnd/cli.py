"""Command-line front end: gen, logdet, bench, report.

Exit codes: 0 success, 1 usage error, 2 I/O or format error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench as bench_mod
from .matrix import (
    FormatError,
    GENERATOR_KINDS,
    MatrixSpec,
    generate,
    read_matrix,
    read_matrix_csv,
    write_matrix,
)

USAGE_ERROR = 1
IO_ERROR = 2

_KIND_ALIASES = {
    "uniform": "uniform-random",
    "diag": "diagonally-dominant",
    "correlation": "scaled-correlation",
    "singular": "singular-planted",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _kind(value: str) -> str:
    value = _KIND_ALIASES.get(value, value)
    if value not in GENERATOR_KINDS:
        raise argparse.ArgumentTypeError(
            f"unknown kind {value!r}; choose from {', '.join(GENERATOR_KINDS)}"
        )
    return value


def _int_list(value: str) -> list[int]:
    try:
        return [int(tok) for tok in value.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcnd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a matrix file")
    p_gen.add_argument("--size", type=int, required=True)
    p_gen.add_argument("--kind", type=_kind, default="uniform-random")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_ld = sub.add_parser("logdet", help="compute a log-determinant")
    p_ld.add_argument("input", help="matrix file (.mcnd binary or .csv)")
    p_ld.add_argument(
        "--algorithm", default="mc-serial", choices=bench_mod.ALGORITHMS
    )
    p_ld.add_argument("--workers", type=int, default=1)

    p_bench = sub.add_parser("bench", help="run a benchmark sweep to CSV")
    p_bench.add_argument("--sizes", type=_int_list, default=list(bench_mod.DEFAULT_SIZES))
    p_bench.add_argument("--workers", type=_int_list, default=list(bench_mod.DEFAULT_WORKERS))
    p_bench.add_argument("--repeats", type=int, default=bench_mod.DEFAULT_REPEATS)
    p_bench.add_argument("--kind", type=_kind, default="uniform-random")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", required=True)

    p_rep = sub.add_parser("report", help="speedup and communication report")
    p_rep.add_argument("input", help="CSV produced by `mcnd bench`")

    return parser


def _cmd_gen(args) -> int:
    if args.size < 1:
        print("invalid size", file=sys.stderr)
        return USAGE_ERROR
    spec = MatrixSpec(size=args.size, kind=args.kind, seed=args.seed)
    try:
        write_matrix(generate(spec), args.out)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return IO_ERROR
    return 0


def _load_matrix(path):
    if str(path).endswith(".csv"):
        return read_matrix_csv(path)
    return read_matrix(path)


def _cmd_logdet(args) -> int:
    if args.workers < 1:
        print("workers must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    try:
        a = _load_matrix(args.input)
    except FormatError as exc:
        print(f"bad matrix file {args.input}: {exc}", file=sys.stderr)
        return IO_ERROR
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return IO_ERROR
    try:
        res = bench_mod.run_algorithm(args.algorithm, a, args.workers)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    ld, st = res.logdet, res.stats
    status = "singular" if ld.sign == 0 else "ok"
    sign = {1: "+1", -1: "-1", 0: "0"}[ld.sign]
    print(
        f"status={status} sign={sign} logabs={ld.log_abs:.17g} "
        f"algorithm={args.algorithm} workers={args.workers} "
        f"broadcasts={st.broadcasts} broadcast_bytes={st.broadcast_bytes} "
        f"pivot_search_msgs={st.pivot_search_msgs} "
        f"scatter_s={st.scatter_seconds:.6f} comm_s={st.comm_seconds:.6f} "
        f"total_s={res.total_seconds:.6f}"
    )
    return 0


def _cmd_bench(args) -> int:
    if args.repeats < 1:
        print("repeats must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    cap = os.environ.get("MCND_THREADS")
    max_workers = int(cap) if cap else None
    records = bench_mod.run_bench(
        sizes=args.sizes,
        workers=args.workers,
        repeats=args.repeats,
        kind=args.kind,
        seed=args.seed,
        max_workers=max_workers,
    )
    try:
        bench_mod.write_records(records, args.out)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return IO_ERROR
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_report(args) -> int:
    try:
        records = bench_mod.read_records(args.input)
        report = bench_mod.format_report(records)
    except bench_mod.ReportError as exc:
        print(f"bad benchmark CSV {args.input}: {exc}", file=sys.stderr)
        return IO_ERROR
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return IO_ERROR
    sys.stdout.write(report)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "logdet":
            return _cmd_logdet(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "report":
            return _cmd_report(args)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
