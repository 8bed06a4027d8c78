"""Dense matrix storage, deterministic test-matrix generators, and file I/O.

Matrices are plain C-contiguous float64 numpy arrays in row-major order.
``as_matrix`` is the single entry point that enforces the storage contract
(2-D, finite entries); everything downstream assumes it has been applied.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"MCND"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQQ")

GENERATOR_KINDS = (
    "uniform-random",
    "diagonally-dominant",
    "scaled-correlation",
    "identity",
    "singular-planted",
)


class FormatError(ValueError):
    """Raised on malformed matrix files (bad magic, truncation, bad dims)."""


def as_matrix(data) -> np.ndarray:
    """Validate and normalize input into the canonical dense-matrix form."""
    a = np.ascontiguousarray(data, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got {a.ndim}-D")
    if a.shape[0] == 0 or a.shape[1] == 0:
        raise ValueError("matrix dimensions must be positive")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def require_square(a: np.ndarray) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got {a.shape}")
    return a


@dataclass(frozen=True)
class MatrixSpec:
    """Deterministic recipe for a generated matrix."""

    size: int
    kind: str
    seed: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("invalid size: must be >= 1")
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(
                f"unknown generator kind {self.kind!r}; "
                f"expected one of {GENERATOR_KINDS}"
            )


def generate(spec: MatrixSpec) -> np.ndarray:
    """Build the matrix described by ``spec``; identical specs give
    bit-identical matrices."""
    n = spec.size
    rng = np.random.default_rng(spec.seed)

    if spec.kind == "identity":
        return np.eye(n)

    if spec.kind == "uniform-random":
        return rng.uniform(-1.0, 1.0, size=(n, n))

    if spec.kind == "diagonally-dominant":
        a = rng.uniform(-1.0, 1.0, size=(n, n))
        a[np.diag_indices(n)] += float(n)
        return a

    if spec.kind == "scaled-correlation":
        # SPD Gram matrix with a ridge, then a symmetric rescale so entry
        # magnitudes span roughly [1e-10, 2.5]: alternating row scales of
        # sqrt(2) and 1e-5 put tiny-tiny products near 1e-10 and big-big
        # products near 2.
        x = rng.normal(size=(n, n))
        g = x @ x.T / n + 0.5 * np.eye(n)
        g = (g + g.T) / 2.0  # BLAS output is only symmetric up to rounding
        d = np.sqrt(np.diag(g))
        corr = g / np.outer(d, d)  # unit diagonal, |off-diagonal| < 1
        s = np.where(np.arange(n) % 2 == 0, np.sqrt(2.0), 1e-5)
        return corr * np.outer(s, s)

    if spec.kind == "singular-planted":
        if n == 1:
            return np.zeros((1, 1))
        a = rng.uniform(-1.0, 1.0, size=(n, n))
        a[n // 2] = a[0]
        return a

    raise AssertionError(spec.kind)


def swap_columns(m: np.ndarray, j1: int, j2: int) -> int:
    """Exchange two columns in place; returns the determinant sign effect
    (-1 for a real exchange, +1 for j1 == j2)."""
    n_cols = m.shape[1]
    for j in (j1, j2):
        if not 0 <= j < n_cols:
            raise IndexError(f"column index {j} out of range for {n_cols} columns")
    if j1 == j2:
        return 1
    m[:, [j1, j2]] = m[:, [j2, j1]]
    return -1


def write_matrix(m: np.ndarray, path) -> None:
    """Write in the MCND binary format (little-endian, bit-exact round trip)."""
    m = as_matrix(m)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, FORMAT_VERSION, m.shape[0], m.shape[1]))
        f.write(m.astype("<f8", copy=False).tobytes())


def read_matrix(path) -> np.ndarray:
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise FormatError("truncated header")
        magic, version, n_rows, n_cols = _HEADER.unpack(header)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {version}")
        if n_rows == 0 or n_cols == 0:
            raise FormatError("zero dimension in header")
        n_bytes = n_rows * n_cols * 8
        if n_bytes > (1 << 40):
            raise FormatError(f"dimensions overflow sanity bound: {n_rows}x{n_cols}")
        payload = f.read(n_bytes)
        if len(payload) < n_bytes:
            raise FormatError(
                f"truncated payload: expected {n_bytes} bytes, got {len(payload)}"
            )
    a = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(n_rows, n_cols)
    return as_matrix(a)


def write_matrix_csv(m: np.ndarray, path) -> None:
    """One row per line, comma-separated decimal floats, no header."""
    m = as_matrix(m)
    with open(path, "w") as f:
        for row in m:
            f.write(",".join(repr(float(v)) for v in row))
            f.write("\n")


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path) as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise FormatError(f"line {line_no}: {exc}") from exc
    if not rows:
        raise FormatError("empty CSV matrix")
    width = len(rows[0])
    for line_no, row in enumerate(rows, 1):
        if len(row) != width:
            raise FormatError(f"line {line_no}: ragged row width {len(row)} != {width}")
    return as_matrix(rows)
