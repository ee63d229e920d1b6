"""Forward and inverse multilevel lifting transform on one axis.

One forward level splits the fine nodal values into coarse and surplus
entries, records the prediction mismatch at the surplus nodes as details,
and corrects the coarse values with the update operator::

    beta_j  = alpha_{j+1}[odd] - P_j alpha_{j+1}[even]
    alpha_j = alpha_{j+1}[even] + U_j beta_j

The inverse runs the same steps backwards, so reconstruction is exact up to
floating-point rounding whatever the update operator is.  All functions act
along the last axis of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blockops import IndexSets, merge_cols, merge_rows
from .grid import CoefficientPyramid, GridHierarchy, merge, split, validate_input_length
from .predictor import apply_predict, assemble_predictor
from .update import ProjectorKind, UpdateOperator, build_update

__all__ = [
    "LevelOperators",
    "TransformPlan",
    "make_plan",
    "forward_level",
    "inverse_level",
    "forward",
    "inverse",
    "forward_partial",
    "inverse_partial",
    "level_matrices",
    "composite_matrix",
]


@dataclass(frozen=True)
class LevelOperators:
    j: int
    q: int
    update: UpdateOperator
    idx: IndexSets

    def predictor_matrix(self) -> np.ndarray:
        if self.q == 0:
            return np.eye(2**self.j)
        return assemble_predictor(self.q, self.j)

    def update_matrix(self) -> np.ndarray:
        return self.update.to_dense()


@dataclass(frozen=True)
class TransformPlan:
    """Precomputed level operators for one (kind, order, depth) triple."""

    kind: ProjectorKind
    q: int
    levels: int
    ops: tuple = field(repr=False)

    @property
    def hierarchy(self) -> GridHierarchy:
        return GridHierarchy(self.q, self.levels)

    @property
    def size(self) -> int:
        return self.hierarchy.size


def make_plan(kind, q: int, levels: int) -> TransformPlan:
    kind = ProjectorKind.parse(kind)
    hier = GridHierarchy(q, levels)
    ops = tuple(
        LevelOperators(j, q, build_update(kind, q, j), hier.index_sets(j)) for j in range(levels)
    )
    return TransformPlan(kind, q, levels, ops)


def forward_level(ops: LevelOperators, alpha_next):
    """One analysis step: ``alpha_{j+1} -> (alpha_j, beta_j)``."""
    coarse, surplus = split(np.asarray(alpha_next, dtype=np.float64), ops.idx)
    beta = surplus - apply_predict(ops.q, coarse)
    alpha = coarse + ops.update.apply(beta)
    return alpha, beta


def inverse_level(ops: LevelOperators, alpha, beta) -> np.ndarray:
    """One synthesis step: ``(alpha_j, beta_j) -> alpha_{j+1}``."""
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if alpha.shape[-1] != ops.idx.delta.size or beta.shape[-1] != ops.idx.nabla.size:
        raise ValueError("alpha/beta lengths do not match the level")
    coarse = alpha - ops.update.apply(beta)
    surplus = beta + apply_predict(ops.q, coarse)
    return merge(coarse, surplus, ops.idx)


def forward_partial(plan: TransformPlan, data, stop: int = 0):
    """Analyse down to level ``stop``; returns ``(alpha_stop, [beta_stop..beta_{J-1}])``."""
    alpha = np.asarray(data, dtype=np.float64)
    validate_input_length(alpha.shape[-1], plan.q, plan.levels)
    betas = []
    for ops in reversed(plan.ops[stop:]):
        alpha, beta = forward_level(ops, alpha)
        betas.append(beta)
    return alpha, betas[::-1]


def inverse_partial(plan: TransformPlan, alpha, betas, start: int = 0, stop: int | None = None):
    """Synthesise from level ``start`` up to level ``stop`` (default: finest).

    ``betas[i]`` holds the details of level ``start + i``.
    """
    stop = plan.levels if stop is None else stop
    alpha = np.asarray(alpha, dtype=np.float64)
    for ops, beta in zip(plan.ops[start:stop], betas):
        alpha = inverse_level(ops, alpha, beta)
    return alpha


def forward(plan: TransformPlan, data) -> CoefficientPyramid:
    alpha, betas = forward_partial(plan, data, 0)
    return CoefficientPyramid(alpha, betas, plan.q, plan.levels)


def inverse(plan: TransformPlan, pyr: CoefficientPyramid) -> np.ndarray:
    if (pyr.q, pyr.levels) != (plan.q, plan.levels):
        raise ValueError("pyramid does not belong to this plan")
    return inverse_partial(plan, pyr.alpha0, pyr.betas)


def level_matrices(ops: LevelOperators):
    """Dense ``A, B, C, D`` with ``M_j = [A; B]`` and ``M_j^{-1} = [C, D]``."""
    p = ops.predictor_matrix()
    u = ops.update_matrix()
    nd, nn = ops.idx.delta.size, ops.idx.nabla.size
    a = merge_cols(np.eye(nd) - u @ p, u, ops.idx)
    b = merge_cols(-p, np.eye(nn), ops.idx)
    c = merge_rows(np.eye(nd), p, ops.idx)
    d = merge_rows(-u, np.eye(nn) - p @ u, ops.idx)
    return a, b, c, d


def composite_matrix(plan: TransformPlan):
    """Dense transform matrix ``M`` and its inverse (test-sized grids only)."""
    n = plan.size
    m = np.eye(n)
    minv = np.eye(n)
    for ops in reversed(plan.ops):
        a, b, c, d = level_matrices(ops)
        k = ops.idx.size
        step = np.eye(n)
        step[:k, :k] = np.vstack([a, b])
        inv = np.eye(n)
        inv[:k, :k] = np.hstack([c, d])
        m = step @ m
        minv = minv @ inv
    return m, minv
