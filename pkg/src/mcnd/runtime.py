"""In-process distributed runtime: block-distributed parallel condensation,
cyclic-distributed parallel Gaussian elimination, and exact communication
accounting.

Workers are shared-nothing peers simulated inside one process: each owns a
private copy of its row block, and every inter-worker exchange goes through
the explicitly counted collectives below (receivers get real copies of the
payload, so byte counts and comm timings reflect actual transfers). Fixed
(matrix, p) gives a fixed message sequence and a bitwise-fixed result.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .condense import LogDet, SINGULAR, SINGULAR_RTOL
from .gauss import _permutation_parity, logdet_lu
from .matrix import require_square


@dataclass(frozen=True)
class WorkerPlan:
    """Contiguous block row assignment: per-worker (start, length)."""

    n_workers: int
    assignments: tuple[tuple[int, int], ...]


def plan_blocks(n: int, p: int) -> WorkerPlan:
    """Near-equal contiguous blocks: the first n % p workers get one extra row."""
    if p < 1 or p > n:
        raise ValueError(f"invalid plan: need 1 <= p <= n, got p={p}, n={n}")
    base, extra = divmod(n, p)
    assignments = []
    start = 0
    for w in range(p):
        length = base + (1 if w < extra else 0)
        assignments.append((start, length))
        start += length
    return WorkerPlan(p, tuple(assignments))


@dataclass
class CommStats:
    broadcasts: int = 0
    broadcast_bytes: int = 0
    pivot_search_msgs: int = 0
    scatter_seconds: float = 0.0
    comm_seconds: float = 0.0
    compute_seconds: float = 0.0


@dataclass
class RunResult:
    logdet: LogDet
    stats: CommStats
    n_workers: int
    # extra diagnostics beyond the headline counters
    total_seconds: float = 0.0  # post-scatter wall clock
    broadcast_payload_entries: list[int] = field(default_factory=list)
    row_updates: list[int] = field(default_factory=list)
    scalar_updates: int = 0


class _Fabric:
    """Collective layer shared by both parallel algorithms.

    Every collective is totally ordered (the simulation is sequential) and
    timed; receivers get independent copies so a transport backend could
    replace this without changing the algorithms.
    """

    def __init__(self, n_workers: int):
        self.n_workers = n_workers
        self.stats = CommStats()
        self.broadcast_payload_entries: list[int] = []

    def broadcast(self, payload: np.ndarray, extra_words: int = 0) -> list[np.ndarray]:
        """Deliver a copy of ``payload`` to every non-sender; returns the
        copies (index w holds worker w's copy; the sender reuses its own)."""
        t0 = time.perf_counter()
        copies = [payload.copy() for _ in range(self.n_workers - 1)]
        self.stats.broadcasts += 1
        self.stats.broadcast_bytes += payload.nbytes + 8 * extra_words
        self.stats.comm_seconds += time.perf_counter() - t0
        return copies

    def pivot_search(self, candidates: list[tuple[float, int]]) -> tuple[float, int]:
        """Global pivot agreement: every non-master worker sends its local
        candidate to the master, which announces the winner back. Returns
        (value, row) with max |value|, ties to the lowest row index."""
        t0 = time.perf_counter()
        inbox = [tuple(c) for c in candidates[1:]]  # copies arriving at master
        self.stats.pivot_search_msgs += self.n_workers - 1
        best_val, best_row = candidates[0]
        for val, row in inbox:
            if abs(val) > abs(best_val) or (abs(val) == abs(best_val) and row < best_row):
                best_val, best_row = val, row
        outbox = [(best_val, best_row) for _ in range(self.n_workers - 1)]
        self.stats.pivot_search_msgs += len(outbox)
        self.stats.comm_seconds += time.perf_counter() - t0
        return best_val, best_row

    def gather(self, rows: list[np.ndarray]) -> np.ndarray:
        t0 = time.perf_counter()
        out = np.vstack([r.copy() for r in rows])
        self.stats.comm_seconds += time.perf_counter() - t0
        return out

    def reduce_sum(self, values: list[float]) -> float:
        t0 = time.perf_counter()
        total = 0.0
        for v in values:
            total += v
        self.stats.comm_seconds += time.perf_counter() - t0
        return total


def mc_parallel(a: np.ndarray, p: int) -> RunResult:
    """Block-distributed parallel matrix condensation.

    Round-robin over workers: the owner picks the max-abs pivot in its
    topmost remaining row locally (no pivot-search traffic), normalizes and
    broadcasts it, and every worker applies the compact outer-product update
    with the pivot-column/last-column exchange on its own block. After N - p
    steps each worker holds one row; those are gathered and the master
    finishes the p x p remainder with serial elimination.
    """
    a = require_square(a)
    n = a.shape[0]
    plan = plan_blocks(n, p)
    fab = _Fabric(p)

    t0 = time.perf_counter()
    blocks = [a[s : s + ln].copy() for s, ln in plan.assignments]
    witnesses = [np.abs(b).max(axis=1) for b in blocks]
    fab.stats.scatter_seconds = time.perf_counter() - t0

    t_start = time.perf_counter()
    lens = [ln for _, ln in plan.assignments]
    consumed = [0] * p
    local_logs = [0.0] * p
    row_updates = [0] * p
    scalar_updates = 0
    n_col = n
    sign = 1
    aborted = False

    while not aborted and any(lens[w] - consumed[w] > 1 for w in range(p)):
        for w in range(p):
            if lens[w] - consumed[w] <= 1:
                continue
            block = blocks[w]
            i = consumed[w]
            m = n_col
            last = m - 1

            tc = time.perf_counter()
            row = block[i, :m]
            j = int(np.argmax(np.abs(row)))
            v = float(row[j])
            fab.stats.compute_seconds += time.perf_counter() - tc
            if abs(v) <= SINGULAR_RTOL * witnesses[w][i]:
                # abort token keeps the collective ordering intact
                fab.broadcast(np.zeros(1, dtype=np.uint8))
                aborted = True
                break

            tc = time.perf_counter()
            prow = row / v
            prow[j] = prow[last]
            local_logs[w] += math.log(abs(v))
            consumed[w] += 1
            # global active position of the owner's topmost row
            k_pos = sum(lens[r] - consumed[r] for r in range(w))
            swap_parity = -1 if j != last else 1
            parity = -1 if (k_pos + m - 1) % 2 else 1
            sign *= (1 if v > 0 else -1) * swap_parity * parity
            fab.stats.compute_seconds += time.perf_counter() - tc

            copies = fab.broadcast(prow[:last], extra_words=1)
            fab.broadcast_payload_entries.append(last)

            recv = iter(copies)
            for u in range(p):
                prow_u = prow[:last] if u == w else next(recv)
                rows = blocks[u][consumed[u] : lens[u]]
                if rows.shape[0] == 0:
                    continue
                tc = time.perf_counter()
                pc = rows[:, j].copy()
                rows[:, j] = rows[:, last]
                sub = rows[:, :last]
                sub -= pc[:, None] * prow_u
                wit = witnesses[u][consumed[u] : lens[u]]
                np.maximum(wit, np.abs(sub).max(axis=1), out=wit)
                row_updates[u] += rows.shape[0]
                scalar_updates += rows.shape[0] * last
                fab.stats.compute_seconds += time.perf_counter() - tc
            n_col = last

    if aborted:
        result = SINGULAR
    else:
        final_rows = [blocks[w][consumed[w], :p] for w in range(p)]
        final_wit = np.array([witnesses[w][consumed[w]] for w in range(p)])
        remainder = fab.gather(final_rows)
        local_total = fab.reduce_sum(local_logs)
        tc = time.perf_counter()
        rem = logdet_lu(remainder, row_witness=final_wit)
        fab.stats.compute_seconds += time.perf_counter() - tc
        if rem.sign == 0:
            result = SINGULAR
        else:
            result = LogDet(sign * rem.sign, local_total + rem.log_abs)

    return RunResult(
        logdet=result,
        stats=fab.stats,
        n_workers=p,
        total_seconds=time.perf_counter() - t_start,
        broadcast_payload_entries=fab.broadcast_payload_entries,
        row_updates=row_updates,
        scalar_updates=scalar_updates,
    )


def ge_parallel(a: np.ndarray, p: int) -> RunResult:
    """Cyclic-distributed parallel Gaussian elimination with partial pivoting.

    Per elimination column the pivot is agreed globally (counted as
    pivot-search traffic), the owner broadcasts the pivot row, and every
    worker eliminates its own unprocessed rows. Row i lives on worker
    i mod p; rows are never physically moved, the pivot permutation's
    parity is folded into the sign.
    """
    a = require_square(a)
    n = a.shape[0]
    if p < 1 or p > n:
        raise ValueError(f"invalid worker count: need 1 <= p <= n, got p={p}")
    fab = _Fabric(p)

    t0 = time.perf_counter()
    owned = [list(range(w, n, p)) for w in range(p)]
    blocks = [a[rows].copy() for rows in owned]
    local_of = {}
    for w, rows in enumerate(owned):
        for li, r in enumerate(rows):
            local_of[r] = (w, li)
    fab.stats.scatter_seconds = time.perf_counter() - t0

    t_start = time.perf_counter()
    unprocessed = [list(rows) for rows in owned]
    local_logs = [0.0] * p
    row_updates = [0] * p
    scalar_updates = 0
    perm: list[int] = []
    pivot_signs = 1
    singular = False

    for k in range(n):
        tc = time.perf_counter()
        candidates = []
        for w in range(p):
            best_val, best_row = 0.0, n
            for r in unprocessed[w]:
                val = float(blocks[w][local_of[r][1], k])
                if abs(val) > abs(best_val) or (abs(val) == abs(best_val) and r < best_row):
                    best_val, best_row = val, r
            candidates.append((best_val, best_row))
        fab.stats.compute_seconds += time.perf_counter() - tc

        if p > 1:
            piv, piv_row = fab.pivot_search(candidates)
        else:
            piv, piv_row = candidates[0]
        if piv == 0.0:
            singular = True
            break
        owner, li = local_of[piv_row]
        perm.append(piv_row)
        unprocessed[owner].remove(piv_row)
        local_logs[owner] += math.log(abs(piv))
        pivot_signs *= 1 if piv > 0 else -1
        if k == n - 1:
            break

        copies = fab.broadcast(blocks[owner][li, k + 1 :], extra_words=1)
        fab.broadcast_payload_entries.append(n - k - 1)
        recv = iter(copies)
        for w in range(p):
            prow = blocks[owner][li, k + 1 :] if w == owner else next(recv)
            if not unprocessed[w]:
                continue
            tc = time.perf_counter()
            rest = np.array([local_of[r][1] for r in unprocessed[w]], dtype=np.intp)
            factor = blocks[w][rest, k] / piv
            blocks[w][rest, k + 1 :] -= factor[:, None] * prow
            row_updates[w] += rest.size
            scalar_updates += rest.size * (n - k - 1)
            fab.stats.compute_seconds += time.perf_counter() - tc

    if singular:
        result = SINGULAR
    else:
        total_log = fab.reduce_sum(local_logs)
        result = LogDet(pivot_signs * _permutation_parity(perm), total_log)

    return RunResult(
        logdet=result,
        stats=fab.stats,
        n_workers=p,
        total_seconds=time.perf_counter() - t_start,
        broadcast_payload_entries=fab.broadcast_payload_entries,
        row_updates=row_updates,
        scalar_updates=scalar_updates,
    )
