"""Serial matrix condensation kernel.

One condensation step shrinks an active m-by-m submatrix to (m-1)-by-(m-1):
the pivot is the max-absolute entry of the chosen pivot row, the pivot
column is exchanged with the last active column to keep the live data
contiguous, the pivot row is normalized and broadcast-subtracted from every
other active row, and ln|pivot| plus a sign contribution are accumulated.

``condense_once_reference`` is the literal four-quadrant 2x2-minor
construction; it exists purely as a cross-check for the compact in-place
update and shares no code with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .matrix import require_square

# A pivot row whose max |entry| has fallen below this fraction of the
# largest magnitude the row ever held is roundoff residue of an exact
# cancellation (e.g. a duplicated row): treat the matrix as singular.
# Genuinely tiny pivots in fresh data are untouched rows where the witness
# equals the current max, so they always pass.
SINGULAR_RTOL = 1e-12


class SingularRowError(ArithmeticError):
    """A pivot row is (numerically) all zero: the determinant is 0."""


class LogDet(NamedTuple):
    """Determinant as (sign, ln|det|); sign 0 means singular, log_abs -inf."""

    sign: int
    log_abs: float


SINGULAR = LogDet(0, -math.inf)


class PivotChoice(NamedTuple):
    row: int
    col: int
    value: float


@dataclass
class CondenseState:
    """In-place condensation state over an N x N matrix.

    The active submatrix is ``mat[active_rows][:, :n_col_active]``; columns
    always shrink from the right, rows drop out of ``active_rows``.
    ``row_witness`` tracks, per original row, the largest |entry| the row's
    active slice has ever held (pivot normalization bounds every update by
    the row's own max, so this is a true magnitude bound).
    """

    mat: np.ndarray
    n_col_active: int
    active_rows: list[int]
    log_acc: float = 0.0
    sign_acc: int = 1
    row_witness: np.ndarray = None

    @classmethod
    def from_matrix(cls, a: np.ndarray) -> "CondenseState":
        a = require_square(a).copy()
        n = a.shape[0]
        return cls(
            mat=a,
            n_col_active=n,
            active_rows=list(range(n)),
            row_witness=np.abs(a).max(axis=1),
        )


def select_pivot(state: CondenseState, pivot_row: int) -> PivotChoice:
    """Max-absolute-value pivot within the active columns of ``pivot_row``;
    ties go to the lowest column index."""
    if pivot_row not in state.active_rows:
        raise ValueError(f"row {pivot_row} is not active")
    row = state.mat[pivot_row, : state.n_col_active]
    col = int(np.argmax(np.abs(row)))
    value = float(row[col])
    if abs(value) <= SINGULAR_RTOL * state.row_witness[pivot_row]:
        raise SingularRowError(f"pivot row {pivot_row} is numerically zero")
    return PivotChoice(pivot_row, col, value)


def condense_step(state: CondenseState, pivot_row: int) -> CondenseState:
    """One in-place condensation step; mutates and returns ``state``."""
    m = state.n_col_active
    if m < 2:
        raise ValueError("need at least a 2x2 active submatrix")
    choice = select_pivot(state, pivot_row)
    a = state.mat
    last = m - 1

    swap_parity = 1
    if choice.col != last:
        a[:, [choice.col, last]] = a[:, [last, choice.col]]
        swap_parity = -1

    v = choice.value
    prow = a[pivot_row, :last] / v
    a[pivot_row, :last] = prow

    k_pos = state.active_rows.index(pivot_row)
    others = np.array([r for r in state.active_rows if r != pivot_row], dtype=np.intp)
    if others.size:
        col = a[others, last]
        sub = a[others, :last]
        sub -= col[:, None] * prow
        a[others, :last] = sub
        state.row_witness[others] = np.maximum(
            state.row_witness[others], np.abs(sub).max(axis=1)
        )

    state.log_acc += math.log(abs(v))
    # Cofactor expansion along the (post-swap) last column: position parity
    # (-1)^(k_pos + m - 1) with k_pos the 0-based active position.
    parity = -1 if (k_pos + m - 1) % 2 else 1
    state.sign_acc *= (1 if v > 0 else -1) * swap_parity * parity
    state.active_rows.remove(pivot_row)
    state.n_col_active = last
    return state


def logdet_condensation(
    a: np.ndarray, pivot_sequence: Sequence[int] | None = None
) -> LogDet:
    """Full serial log-determinant by repeated condensation.

    ``pivot_sequence`` optionally fixes the order in which original row
    indices are consumed as pivot rows (N-1 entries); the default is
    top-to-bottom active order.
    """
    a = require_square(a)
    n = a.shape[0]
    state = CondenseState.from_matrix(a)
    try:
        for step in range(n - 1):
            if pivot_sequence is None:
                pivot_row = state.active_rows[0]
            else:
                pivot_row = pivot_sequence[step]
            condense_step(state, pivot_row)
    except SingularRowError:
        return SINGULAR
    final_row = state.active_rows[0]
    v = float(state.mat[final_row, 0])
    if abs(v) <= SINGULAR_RTOL * state.row_witness[final_row]:
        return SINGULAR
    sign = state.sign_acc * (1 if v > 0 else -1)
    return LogDet(sign, state.log_acc + math.log(abs(v)))


def condense_once_reference(a: np.ndarray, k: int, l: int) -> np.ndarray:
    """One condensation by the explicit four-quadrant 2x2-minor formulas.

    No pivoting, no column exchange, no in-place tricks: the (N-1)x(N-1)
    result B satisfies det(B) = det(A) * a[k,l]^(N-2). Testing reference
    only; quadratically slower than the compact step.
    """
    a = require_square(a)
    n = a.shape[0]
    if n <= 2:
        raise ValueError("reference condensation requires N > 2")
    if not 0 <= k < n or not 0 <= l < n:
        raise IndexError(f"pivot ({k}, {l}) out of range for size {n}")
    akl = a[k, l]
    if akl == 0.0:
        raise ZeroDivisionError("zero pivot in reference condensation")

    # Each entry is the 2x2 minor on rows {i', k} and columns {j', l} taken
    # in their natural (ascending) order, so the signed identity
    # det(B) = det(A) * a[k,l]^(N-2) holds for every pivot position.
    b = np.empty((n - 1, n - 1))
    for i in range(n - 1):
        for j in range(n - 1):
            if i < k and j < l:
                b[i, j] = a[i, j] * akl - a[i, l] * a[k, j]
            elif i < k and j >= l:
                b[i, j] = a[i, l] * a[k, j + 1] - a[i, j + 1] * akl
            elif i >= k and j < l:
                b[i, j] = a[k, j] * a[i + 1, l] - akl * a[i + 1, j]
            else:
                b[i, j] = akl * a[i + 1, j + 1] - a[k, j + 1] * a[i + 1, l]
    return b
