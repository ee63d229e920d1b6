"""Primal and dual basis functions sampled by the cascade algorithm.

Primal functions are obtained by synthesising unit pyramids; dual functions
by analysing scaled unit vectors ``delta_p / eps_p`` where ``eps_p`` is the
integral of the finest nodal function at node ``p``.  Samples are returned
as nodal values on a deep level ``J``; the primal ones are exact nodal
representations, the dual ones converge only weakly as ``J`` grows (for the
interpolating kind they approximate Dirac measures).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gram import lagrange_eval, newton_cotes_weights
from .grid import node_count
from .lifting import TransformPlan, forward_level, inverse_level, make_plan
from .update import ProjectorKind

__all__ = [
    "cascade_primal",
    "cascade_dual",
    "scaling_epsilon",
    "function_norms",
    "basis_norms",
    "level_norms",
    "support_interval",
]


def _depth(plan: TransformPlan, j: int, J: int | None) -> int:
    J = plan.levels if J is None else J
    if not 0 <= j < J <= plan.levels:
        raise ValueError(f"need 0 <= j < J <= {plan.levels}, got j={j}, J={J}")
    return J


def cascade_primal(plan: TransformPlan, j: int, J: int | None = None):
    """Scaling and wavelet functions of level ``j`` sampled on level ``J``.

    Returns ``(phi, psi)`` with one function per row.
    """
    J = _depth(plan, j, J)
    nd, nn = node_count(plan.q, j), node_count(plan.q, j + 1) - node_count(plan.q, j)
    ops = plan.ops[j]
    phi = inverse_level(ops, np.eye(nd), np.zeros((nd, nn)))
    psi = inverse_level(ops, np.zeros((nn, nd)), np.eye(nn))
    for level in plan.ops[j + 1 : J]:
        zeros_phi = np.zeros((nd, level.idx.nabla.size))
        zeros_psi = np.zeros((nn, level.idx.nabla.size))
        phi = inverse_level(level, phi, zeros_phi)
        psi = inverse_level(level, psi, zeros_psi)
    return phi, psi


def scaling_epsilon(q: int, J: int) -> np.ndarray:
    """Integrals of the level-``J`` nodal basis functions."""
    if q == 0:
        return np.full(2**J, 2.0**-J)
    h = 1.0 / (q * 2**J)
    w = _element_weights(q)
    eps = np.zeros(q * 2**J + 1)
    for k in range(q):
        eps[k : q * 2**J : q] += h * w[k]
    eps[q::q] += h * w[q]
    return eps


def _element_weights(q: int) -> np.ndarray:
    if q <= 8:
        return newton_cotes_weights(q)
    x, w = np.polynomial.legendre.leggauss(q + 1)
    return (0.5 * q * w) @ lagrange_eval(np.arange(q + 1.0), 0.5 * q * (x + 1)).T


def cascade_dual(plan: TransformPlan, j: int, J: int | None = None):
    """Dual scaling and wavelet functions of level ``j`` sampled on level ``J``.

    Returns ``(dual_phi, dual_psi)`` with one function per row.
    """
    J = _depth(plan, j, J)
    eps = scaling_epsilon(plan.q, J)
    alpha = np.diag(1.0 / eps)
    beta = None
    for level in reversed(plan.ops[j:J]):
        alpha, beta = forward_level(level, alpha)
    return alpha.T.copy(), beta.T.copy()


@lru_cache(maxsize=None)
def _norm_rule(q: int):
    """Sample matrix and weights integrating squared degree-q polynomials on a unit element."""
    if q == 0:
        return np.ones((1, 1)), np.ones(1)
    if 2 * q <= 8:
        t = np.arange(2 * q + 1) / 2.0
        w = newton_cotes_weights(2 * q) / (2 * q)
    else:
        x, w = np.polynomial.legendre.leggauss(q + 1)
        t = 0.5 * q * (x + 1)
        w = 0.5 * w
    return lagrange_eval(np.arange(q + 1.0), t), w


def function_norms(values, q: int, level: int) -> np.ndarray:
    """Exact L2 norms of the level-``level`` nodal functions given row-wise."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    ne = 2**level
    if q == 0:
        return np.sqrt(np.sum(values**2, axis=-1) / ne)
    sample, w = _norm_rule(q)
    elems = np.lib.stride_tricks.sliding_window_view(values, q + 1, axis=-1)[..., ::q, :]
    vals = elems @ sample
    return np.sqrt(np.sum(vals**2 @ w, axis=-1) / ne)


def basis_norms(plan: TransformPlan, j: int, chunk: int = 1024):
    """L2 norms of the level-``j`` scaling and wavelet functions."""
    ops = plan.ops[j]
    nd, nn = ops.idx.delta.size, ops.idx.nabla.size
    phi_norms = function_norms(np.eye(nd), plan.q, j)
    psi_norms = np.empty(nn)
    for start in range(0, nn, chunk):
        stop = min(nn, start + chunk)
        e = np.zeros((stop - start, nn))
        e[np.arange(stop - start), np.arange(start, stop)] = 1.0
        cols = inverse_level(ops, np.zeros((stop - start, nd)), e)
        psi_norms[start:stop] = function_norms(cols, plan.q, j + 1)
    return phi_norms, psi_norms


@lru_cache(maxsize=64)
def level_norms(kind: ProjectorKind, q: int, j: int):
    """Cached :func:`basis_norms` keyed on (kind, order, level)."""
    plan = make_plan(kind, q, j + 1)
    phi, psi = basis_norms(plan, j)
    phi.setflags(write=False)
    psi.setflags(write=False)
    return phi, psi


def support_interval(q: int, j: int, k: int):
    """Element holding the ``k``-th surplus node of level ``j``, widened by one
    element on each side and clipped to [0, 1]."""
    e = k // q if q else k
    width = 2.0**-j
    return max(0.0, (e - 1) * width), min(1.0, (e + 2) * width)
