"""Gaussian-elimination log-determinant and the brute-force cofactor oracle."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .condense import LogDet, SINGULAR, SINGULAR_RTOL
from .matrix import require_square

COFACTOR_MAX_SIZE = 10


def _permutation_parity(perm: list[int]) -> int:
    """Parity of the permutation step -> pivot row, by cycle decomposition."""
    seen = [False] * len(perm)
    parity = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def logdet_lu(a: np.ndarray, row_witness: np.ndarray | None = None) -> LogDet:
    """Row-pivoted elimination log-determinant.

    Pivot per column is the max-absolute candidate among unprocessed rows,
    ties to the lowest row index. Rows are never physically moved; the pivot
    permutation's parity is folded into the sign at the end.

    ``row_witness`` (optional, per-row magnitude bounds) enables the same
    relative roundoff-zero detection as the condensation kernel; without it
    only an exactly zero pivot column signals singularity.
    """
    a = require_square(a).copy()
    n = a.shape[0]
    unprocessed = list(range(n))
    perm: list[int] = []
    log_acc = 0.0
    pivot_signs = 1
    for k in range(n):
        cand = np.array(unprocessed, dtype=np.intp)
        local = int(np.argmax(np.abs(a[cand, k])))
        piv_row = int(cand[local])
        piv = float(a[piv_row, k])
        if piv == 0.0:
            return SINGULAR
        if row_witness is not None and abs(piv) <= SINGULAR_RTOL * row_witness[piv_row]:
            return SINGULAR
        perm.append(piv_row)
        unprocessed.remove(piv_row)
        log_acc += math.log(abs(piv))
        pivot_signs *= 1 if piv > 0 else -1
        if unprocessed:
            rest = np.array(unprocessed, dtype=np.intp)
            factor = a[rest, k] / piv
            a[rest, k + 1 :] -= factor[:, None] * a[piv_row, k + 1 :]
    return LogDet(pivot_signs * _permutation_parity(perm), log_acc)


def det_cofactor(a: np.ndarray) -> float:
    """Recursive Laplace expansion along the first row in exact rational
    arithmetic (doubles convert to Fractions losslessly), rounded once at
    the end. Ground truth for tiny matrices; memoized over column subsets,
    so N <= 10 is cheap."""
    a = require_square(a)
    n = a.shape[0]
    if n > COFACTOR_MAX_SIZE:
        raise ValueError(f"cofactor oracle limited to N <= {COFACTOR_MAX_SIZE}")

    exact = [[Fraction(float(v)) for v in row] for row in a]
    cache: dict[tuple[int, ...], Fraction] = {}

    def expand(row: int, cols: tuple[int, ...]) -> Fraction:
        if len(cols) == 1:
            return exact[row][cols[0]]
        if cols in cache:
            return cache[cols]
        total = Fraction(0)
        for pos, c in enumerate(cols):
            minor_cols = cols[:pos] + cols[pos + 1 :]
            term = exact[row][c] * expand(row + 1, minor_cols)
            total += term if pos % 2 == 0 else -term
        cache[cols] = total
        return total

    return float(expand(0, tuple(range(n))))
