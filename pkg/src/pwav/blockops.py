"""Block-matrix concatenation primitives and a banded SPD solver.

The merge operators interleave the columns (rows) of a coarse block and a
surplus block according to explicit index sets.  The stacking operators glue
element-level blocks into level-wide operators, with or without a one-entry
overlap along the shared element boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

__all__ = [
    "IndexSets",
    "BandedSPDMatrix",
    "NotSPDError",
    "merge_cols",
    "merge_rows",
    "stack_col_overlap",
    "stack_row_overlap",
    "stack_overlap_sum",
    "block_diag",
    "repeat_stack",
    "banded_cholesky_solve",
]


class NotSPDError(np.linalg.LinAlgError):
    """Raised when a Cholesky factorization meets a non-positive pivot."""


@dataclass(frozen=True)
class IndexSets:
    """Coarse (``delta``) and surplus (``nabla``) node indices of one fine level."""

    delta: np.ndarray
    nabla: np.ndarray

    def __post_init__(self):
        delta = np.asarray(self.delta, dtype=np.intp)
        nabla = np.asarray(self.nabla, dtype=np.intp)
        n = delta.size + nabla.size
        seen = np.zeros(n, dtype=bool)
        both = np.concatenate([delta, nabla])
        if both.size and (both.min() < 0 or both.max() >= n):
            raise ValueError("index sets must partition range(len(delta) + len(nabla))")
        seen[both] = True
        if not seen.all():
            raise ValueError("index sets overlap or leave gaps")
        if np.any(np.diff(delta) <= 0) or np.any(np.diff(nabla) <= 0):
            raise ValueError("index sets must be strictly increasing")
        delta.setflags(write=False)
        nabla.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "nabla", nabla)

    @property
    def size(self) -> int:
        return self.delta.size + self.nabla.size

    @classmethod
    def even_odd(cls, n: int) -> "IndexSets":
        idx = np.arange(n)
        return cls(idx[0::2], idx[1::2])


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def merge_cols(a, b, idx: IndexSets) -> np.ndarray:
    """Merge the columns of ``a`` (over delta) and ``b`` (over nabla)."""
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row count mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[1] != idx.delta.size or b.shape[1] != idx.nabla.size:
        raise ValueError(
            f"column counts {a.shape[1]}, {b.shape[1]} do not match index sets "
            f"{idx.delta.size}, {idx.nabla.size}"
        )
    out = np.empty((a.shape[0], idx.size))
    out[:, idx.delta] = a
    out[:, idx.nabla] = b
    return out


def merge_rows(a, b, idx: IndexSets) -> np.ndarray:
    """Merge the rows of ``a`` (over delta) and ``b`` (over nabla)."""
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"column count mismatch: {a.shape[1]} vs {b.shape[1]}")
    if a.shape[0] != idx.delta.size or b.shape[0] != idx.nabla.size:
        raise ValueError(
            f"row counts {a.shape[0]}, {b.shape[0]} do not match index sets "
            f"{idx.delta.size}, {idx.nabla.size}"
        )
    out = np.empty((idx.size, a.shape[1]))
    out[idx.delta] = a
    out[idx.nabla] = b
    return out


def stack_col_overlap(a, b) -> np.ndarray:
    """Stack ``b`` below ``a`` sharing one column: shape (m+p, n+q-1)."""
    a, b = _as_matrix(a), _as_matrix(b)
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m + p, n + q - 1))
    out[:m, :n] = a
    out[m:, n - 1:] = b
    return out


def stack_row_overlap(a, b) -> np.ndarray:
    """Stack ``b`` right of ``a`` sharing one row: shape (m+p-1, n+q)."""
    a, b = _as_matrix(a), _as_matrix(b)
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m + p - 1, n + q))
    out[:m, :n] = a
    out[m - 1:, n:] = b
    return out


def stack_overlap_sum(a, b) -> np.ndarray:
    """Stack diagonally with the corner entries summed: shape (m+p-1, n+q-1)."""
    a, b = _as_matrix(a), _as_matrix(b)
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m + p - 1, n + q - 1))
    out[:m, :n] = a
    out[m - 1:, n - 1:] += b
    return out


def block_diag(a, b) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    return scipy.linalg.block_diag(a, b)


def repeat_stack(op, block, times: int) -> np.ndarray:
    """Fold ``op`` over ``times`` copies of ``block``."""
    if times < 1:
        raise ValueError("times must be positive")
    block = _as_matrix(block)
    return reduce(op, [block] * times)


@dataclass(frozen=True)
class BandedSPDMatrix:
    """Symmetric banded matrix stored as its lower band.

    ``band[i, k]`` holds ``A[k + i, k]`` for ``i = 0..bandwidth``; entries
    past the end of a diagonal are zero padding.
    """

    band: np.ndarray

    def __post_init__(self):
        band = np.array(self.band, dtype=np.float64)
        if band.ndim != 2:
            raise ValueError("band storage must be 2-d")
        if not np.all(np.isfinite(band)):
            raise ValueError("band entries must be finite")
        band.setflags(write=False)
        object.__setattr__(self, "band", band)

    @property
    def dim(self) -> int:
        return self.band.shape[1]

    @property
    def bandwidth(self) -> int:
        return self.band.shape[0] - 1

    @classmethod
    def from_dense(cls, a, bandwidth: int) -> "BandedSPDMatrix":
        a = _as_matrix(a)
        n = a.shape[0]
        band = np.zeros((bandwidth + 1, n))
        for i in range(bandwidth + 1):
            band[i, : n - i] = np.diagonal(a, -i)
        return cls(band)

    def to_dense(self) -> np.ndarray:
        n, b = self.dim, self.bandwidth
        out = np.zeros((n, n))
        for i in range(b + 1):
            d = self.band[i, : n - i]
            out += np.diag(d, -i)
            if i:
                out += np.diag(d, i)
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Multiply along axis 0 of ``x``."""
        x = np.asarray(x, dtype=np.float64)
        n = self.dim
        y = self.band[0].reshape((n,) + (1,) * (x.ndim - 1)) * x
        for i in range(1, self.bandwidth + 1):
            d = self.band[i, : n - i].reshape((n - i,) + (1,) * (x.ndim - 1))
            y[i:] += d * x[:-i]
            y[:-i] += d * x[i:]
        return y

    def factor(self) -> "BandedCholesky":
        try:
            c = scipy.linalg.cholesky_banded(self.band, lower=True)
        except np.linalg.LinAlgError as exc:
            raise NotSPDError(str(exc)) from None
        return BandedCholesky(c)


@dataclass(frozen=True)
class BandedCholesky:
    """Lower banded Cholesky factor, reusable across right-hand sides."""

    factor_band: np.ndarray

    def solve(self, rhs: np.ndarray, overwrite: bool = False) -> np.ndarray:
        """Solve along axis 0; ``overwrite`` lets LAPACK reuse a Fortran-ordered ``rhs``."""
        rhs = np.asarray(rhs, dtype=np.float64)
        shape = rhs.shape
        flat = rhs.reshape(shape[0], -1)
        out = scipy.linalg.cho_solve_banded(
            (self.factor_band, True), flat, overwrite_b=overwrite, check_finite=False
        )
        return out.reshape(shape)


def banded_cholesky_solve(g: BandedSPDMatrix, rhs) -> np.ndarray:
    """Solve ``g @ X = rhs`` by banded Cholesky in O(dim * bandwidth**2)."""
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape[0] != g.dim:
        raise ValueError(f"rhs has {rhs.shape[0]} rows, matrix has dimension {g.dim}")
    return g.factor().solve(rhs)
