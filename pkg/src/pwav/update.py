"""Update operators for the interpolating, CG and DG projector families.

Each operator maps the detail coefficients of one level to the correction
of the coarse nodal values, ``alpha_j = alpha_{j+1}[coarse] + U_j beta_j``.
Operators act along the last axis and accept arbitrary leading batch axes.

* interpolation: ``U = 0``.
* piecewise constant (``q == 0`` with CG or DG): ``U = I / 2``, the Haar case.
* DG: the single-element solve ``G_dd^{-1} G_dn`` applied per element, then
  divided by the node multiplicity (2 at interior element boundaries).
* CG: the global banded Gram system, factored once and re-solved per apply.
"""

from __future__ import annotations

import enum

import numpy as np

from .blockops import BandedCholesky, NotSPDError, repeat_stack, stack_overlap_sum, stack_row_overlap
from .gram import assemble_global_gram_dd, assemble_global_gram_dn, element_gram

__all__ = [
    "ProjectorKind",
    "UpdateOperator",
    "ZeroUpdate",
    "HaarUpdate",
    "DGUpdate",
    "CGUpdate",
    "build_update",
    "element_update",
    "cg_update_dense_oracle",
    "iter_cg_update_columns",
]


class ProjectorKind(enum.IntEnum):
    """Projector family; the integer value is the blob-file kind code."""

    INTERP = 0
    CG = 1
    DG = 2

    @classmethod
    def parse(cls, value) -> "ProjectorKind":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            key = value.strip().upper()
            if key == "INTERPOLATION":
                key = "INTERP"
            try:
                return cls[key]
            except KeyError:
                raise ValueError(f"unknown projector kind {value!r}") from None
        return cls(int(value))


def _scatter_elements(contrib: np.ndarray, q: int) -> np.ndarray:
    """Sum per-element contributions ``(..., E, q + 1)`` into shared nodes."""
    *batch, ne, _ = contrib.shape
    out = np.zeros(tuple(batch) + (ne * q + 1,))
    for k in range(q):
        out[..., k : ne * q : q] += contrib[..., k]
    out[..., q::q] += contrib[..., q]
    return out


class UpdateOperator:
    kind: ProjectorKind
    q: int
    j: int

    @property
    def shape(self):
        if self.q == 0:
            return (2**self.j, 2**self.j)
        return (self.q * 2**self.j + 1, self.q * 2**self.j)

    def apply(self, beta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        return self.apply(np.eye(self.shape[1])).T

    def __repr__(self):
        return f"{type(self).__name__}(q={self.q}, j={self.j})"


class ZeroUpdate(UpdateOperator):
    kind = ProjectorKind.INTERP

    def __init__(self, q: int, j: int):
        self.q, self.j = q, j

    def apply(self, beta):
        beta = np.asarray(beta, dtype=np.float64)
        return np.zeros(beta.shape[:-1] + (self.shape[0],))


class HaarUpdate(UpdateOperator):
    def __init__(self, kind: ProjectorKind, j: int):
        self.kind, self.q, self.j = kind, 0, j

    def apply(self, beta):
        return 0.5 * np.asarray(beta, dtype=np.float64)


def element_update(q: int) -> np.ndarray:
    """Single-element update ``G_dd^{-1} G_dn`` of shape ``(q + 1, q)``.

    The Gram blocks scale linearly in the spacing, so the result does not
    depend on it.
    """
    eg = element_gram(q, 1.0)
    try:
        c = np.linalg.cholesky(eg.gdd)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError(str(exc)) from None
    y = np.linalg.solve(c, eg.gdn)
    return np.linalg.solve(c.T, y)


class DGUpdate(UpdateOperator):
    kind = ProjectorKind.DG

    def __init__(self, q: int, j: int):
        self.q, self.j = q, j
        self.block = element_update(q)

    def apply(self, beta):
        beta = np.asarray(beta, dtype=np.float64)
        ne = 2**self.j
        local = beta.reshape(beta.shape[:-1] + (ne, self.q)) @ self.block.T
        out = _scatter_elements(local, self.q)
        out[..., self.q : -1 : self.q] *= 0.5
        return out

    def dense_by_stacking(self) -> np.ndarray:
        """``(I + ... + I)^{-1} (U ⊖ ... ⊖ U)`` with the stacking operators."""
        ne = 2**self.j
        mult = np.diag(repeat_stack(stack_overlap_sum, np.eye(self.q + 1), ne))
        return repeat_stack(stack_row_overlap, self.block, ne) / mult[:, None]


class CGUpdate(UpdateOperator):
    kind = ProjectorKind.CG

    def __init__(self, q: int, j: int):
        self.q, self.j = q, j
        self.gram = assemble_global_gram_dd(q, j)
        self.factor: BandedCholesky = self.gram.factor()
        self.gdn_block = element_gram(q, 1.0 / (q * 2 ** (j + 1))).gdn

    def rhs(self, beta: np.ndarray) -> np.ndarray:
        """``G_dn @ beta`` along the last axis, element by element."""
        beta = np.asarray(beta, dtype=np.float64)
        local = beta.reshape(beta.shape[:-1] + (2**self.j, self.q)) @ self.gdn_block.T
        return _scatter_elements(local, self.q)

    def apply(self, beta):
        r = self.rhs(beta)
        sol = self.factor.solve(np.moveaxis(r, -1, 0))
        return np.moveaxis(sol, 0, -1)

    def columns(self, start: int, stop: int) -> np.ndarray:
        """Columns ``start:stop`` of the dense update matrix."""
        # column m of G_dn is the m % q column of the element block, placed
        # on the q + 1 coarse nodes of element m // q
        m = np.arange(start, stop)
        first, local = (m // self.q) * self.q, m % self.q
        rhs = np.zeros((self.shape[0], m.size), order="F")
        cols = np.arange(m.size)
        for i in range(self.q + 1):
            rhs[first + i, cols] = self.gdn_block[i, local]
        return self.factor.solve(rhs, overwrite=True)


def iter_cg_update_columns(q: int, j: int, chunk: int = 512):
    """Assemble, factor and solve for every column of the CG update in chunks.

    The dense matrix has ``O(N^2)`` entries; streaming the column blocks
    keeps memory bounded while doing the full amount of solver work.
    """
    op = CGUpdate(q, j)
    n = op.shape[1]
    for start in range(0, n, chunk):
        yield start, op.columns(start, min(n, start + chunk))


def build_update(kind, q: int, j: int) -> UpdateOperator:
    kind = ProjectorKind.parse(kind)
    if q < 0:
        raise ValueError("order must be non-negative")
    if kind is ProjectorKind.INTERP:
        return ZeroUpdate(q, j)
    if q == 0:
        return HaarUpdate(kind, j)
    if kind is ProjectorKind.DG:
        return DGUpdate(q, j)
    return CGUpdate(q, j)


def cg_update_dense_oracle(q: int, j: int) -> np.ndarray:
    """CG update from dense Gram matrices and a general dense solver."""
    if q == 0:
        return 0.5 * np.eye(2**j)
    gdd = repeat_stack(stack_overlap_sum, element_gram(q, 1.0 / (q * 2 ** (j + 1))).gdd, 2**j)
    gdn = assemble_global_gram_dn(q, j)
    return np.linalg.solve(gdd, gdn)

