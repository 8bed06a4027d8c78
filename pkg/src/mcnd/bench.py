"""Benchmark sweeps and the speedup / communication report.

Timing protocol: total excludes data distribution (it is measured from the
end of the scatter), comm time is accumulated inside collective calls only,
and reported numbers are means over the repeated runs. Speedup for a
problem size is T_s / T_p with T_s the fastest single-worker mean across
all algorithms at that size.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .condense import logdet_condensation
from .gauss import logdet_lu
from .matrix import MatrixSpec, generate
from .runtime import CommStats, RunResult, ge_parallel, mc_parallel

ALGORITHMS = ("mc-serial", "mc-parallel", "ge-serial", "ge-parallel")
CSV_HEADER = ["algorithm", "n", "p", "run", "total_s", "scatter_s", "comm_s", "sign", "logabs"]

DEFAULT_SIZES = (256, 512, 1024, 2048)
DEFAULT_WORKERS = (1, 2, 4, 8)
DEFAULT_REPEATS = 5


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    n: int
    p: int
    run_index: int
    total_seconds: float
    scatter_seconds: float
    comm_seconds: float
    sign: int
    log_abs: float


class ReportError(ValueError):
    """Malformed benchmark CSV."""


def run_algorithm(algorithm: str, a: np.ndarray, p: int) -> RunResult:
    """Execute one algorithm; serial variants report empty comm stats."""
    if algorithm == "mc-parallel":
        return mc_parallel(a, p)
    if algorithm == "ge-parallel":
        return ge_parallel(a, p)
    if algorithm == "mc-serial":
        fn = logdet_condensation
    elif algorithm == "ge-serial":
        fn = logdet_lu
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    t0 = time.perf_counter()
    ld = fn(a)
    return RunResult(logdet=ld, stats=CommStats(), n_workers=1,
                     total_seconds=time.perf_counter() - t0)


def run_bench(
    sizes,
    workers,
    repeats: int = DEFAULT_REPEATS,
    kind: str = "uniform-random",
    seed: int = 0,
    max_workers: int | None = None,
    log=None,
) -> list[BenchRecord]:
    """One record per (algorithm, n, p, run). p > n combinations are skipped
    with a warning; ``max_workers`` (e.g. from MCND_THREADS) caps p."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    warn = log if log is not None else (lambda msg: print(msg, file=sys.stderr))
    records = []
    for n in sizes:
        a = generate(MatrixSpec(size=n, kind=kind, seed=seed))
        for p in workers:
            if p > n:
                warn(f"warning: skipping p={p} > n={n}")
                continue
            if max_workers is not None and p > max_workers:
                warn(f"warning: skipping p={p} > worker cap {max_workers}")
                continue
            for run in range(repeats):
                for algorithm in ALGORITHMS:
                    res = run_algorithm(algorithm, a, p)
                    records.append(
                        BenchRecord(
                            algorithm=algorithm,
                            n=n,
                            p=p,
                            run_index=run,
                            total_seconds=res.total_seconds,
                            scatter_seconds=res.stats.scatter_seconds,
                            comm_seconds=res.stats.comm_seconds,
                            sign=res.logdet.sign,
                            log_abs=res.logdet.log_abs,
                        )
                    )
    return records


def write_records(records, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow(
                [
                    r.algorithm,
                    r.n,
                    r.p,
                    r.run_index,
                    repr(r.total_seconds),
                    repr(r.scatter_seconds),
                    repr(r.comm_seconds),
                    r.sign,
                    repr(r.log_abs),
                ]
            )


def read_records(path) -> list[BenchRecord]:
    records = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ReportError("empty CSV") from None
        if header != CSV_HEADER:
            raise ReportError(f"line 1: bad header {header!r}")
        for line_no, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ReportError(f"line {line_no}: expected {len(CSV_HEADER)} fields, got {len(row)}")
            try:
                records.append(
                    BenchRecord(
                        algorithm=row[0],
                        n=int(row[1]),
                        p=int(row[2]),
                        run_index=int(row[3]),
                        total_seconds=float(row[4]),
                        scatter_seconds=float(row[5]),
                        comm_seconds=float(row[6]),
                        sign=int(row[7]),
                        log_abs=float(row[8]),
                    )
                )
            except ValueError as exc:
                raise ReportError(f"line {line_no}: {exc}") from exc
    return records


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values)


def mean_totals(records) -> dict[tuple[str, int, int], float]:
    """Mean total seconds per (algorithm, n, p)."""
    groups: dict[tuple[str, int, int], list[float]] = {}
    for r in records:
        groups.setdefault((r.algorithm, r.n, r.p), []).append(r.total_seconds)
    return {key: _mean(vals) for key, vals in groups.items()}


def serial_reference_times(records) -> dict[int, float]:
    """Per size: fastest single-worker mean time across all algorithms."""
    means = mean_totals(records)
    out: dict[int, float] = {}
    for (alg, n, p), t in means.items():
        if p == 1 and (n not in out or t < out[n]):
            out[n] = t
    return out


def speedup_table(records) -> dict[tuple[str, int, int], float]:
    means = mean_totals(records)
    t_serial = serial_reference_times(records)
    table = {}
    for (alg, n, p), t in means.items():
        if n in t_serial and t > 0:
            table[(alg, n, p)] = t_serial[n] / t
    return table


def average_speedups(records) -> dict[tuple[str, int], float]:
    """Mean of the per-size speedups across all sizes, per (algorithm, p)."""
    table = speedup_table(records)
    groups: dict[tuple[str, int], list[float]] = {}
    for (alg, n, p), s in table.items():
        groups.setdefault((alg, p), []).append(s)
    return {key: _mean(vals) for key, vals in groups.items()}


def comm_summary(records) -> dict[tuple[str, int], tuple[float, float]]:
    """Mean (scatter_seconds, comm_seconds) across sizes and runs per
    (algorithm, p)."""
    groups: dict[tuple[str, int], list[tuple[float, float]]] = {}
    for r in records:
        groups.setdefault((r.algorithm, r.p), []).append(
            (r.scatter_seconds, r.comm_seconds)
        )
    return {
        key: (_mean(s for s, _ in vals), _mean(c for _, c in vals))
        for key, vals in groups.items()
    }


def format_report(records) -> str:
    """Deterministic text report: per-size speedups, average speedups, and
    scatter/comm averages."""
    if not records:
        raise ReportError("no records to report")
    lines = []
    table = speedup_table(records)
    t_serial = serial_reference_times(records)

    lines.append("== Speedup per size (T_s / T_p; T_s = fastest 1-worker mean) ==")
    lines.append(f"{'algorithm':<12} {'n':>6} {'p':>4} {'mean_total_s':>14} {'speedup':>10}")
    means = mean_totals(records)
    for (alg, n, p) in sorted(means, key=lambda k: (k[1], k[0], k[2])):
        t = means[(alg, n, p)]
        s = table.get((alg, n, p), math.nan)
        lines.append(f"{alg:<12} {n:>6} {p:>4} {t:>14.6f} {s:>10.4f}")

    lines.append("")
    lines.append("== Average speedup across sizes ==")
    lines.append(f"{'algorithm':<12} {'p':>4} {'avg_speedup':>12}")
    avgs = average_speedups(records)
    for (alg, p) in sorted(avgs, key=lambda k: (k[0], k[1])):
        lines.append(f"{alg:<12} {p:>4} {avgs[(alg, p)]:>12.4f}")

    lines.append("")
    lines.append("== Scatter / communication averages ==")
    lines.append(f"{'algorithm':<12} {'p':>4} {'avg_scatter_s':>14} {'avg_comm_s':>12}")
    comms = comm_summary(records)
    for (alg, p) in sorted(comms, key=lambda k: (k[0], k[1])):
        sc, cm = comms[(alg, p)]
        lines.append(f"{alg:<12} {p:>4} {sc:>14.6f} {cm:>12.6f}")

    lines.append("")
    lines.append(
        "reference serial times: "
        + ", ".join(f"n={n}: {t_serial[n]:.6f}s" for n in sorted(t_serial))
    )
    return "\n".join(lines) + "\n"
