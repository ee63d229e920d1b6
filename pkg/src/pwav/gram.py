"""Element and level Gram matrices of the nodal Lagrange bases.

Local coordinates on one coarse element use the fine spacing ``h``: coarse
nodes sit at ``2 n h`` (``n = 0..q``) and the element spans ``[0, 2 q h]``.
The fine basis functions live on the two halves ``[0, q h]`` and
``[q h, 2 q h]``, so products with them are integrated half by half.

For ``q == 0`` the basis is piecewise constant and right-continuous: the
coarse function covers ``[0, 2h)`` and the surplus fine function ``[h, 2h)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import newton_cotes

from .blockops import (
    BandedSPDMatrix,
    block_diag,
    repeat_stack,
    stack_overlap_sum,
    stack_row_overlap,
)

__all__ = [
    "ElementGram",
    "lagrange_eval",
    "element_gram",
    "newton_cotes_weights",
    "assemble_global_gram_dd",
    "assemble_global_gram_dn",
    "level_mass_matrix",
]


@dataclass(frozen=True)
class ElementGram:
    q: int
    h: float
    gdd: np.ndarray
    gdn: np.ndarray


def lagrange_eval(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Values of every Lagrange basis polynomial on ``nodes`` at points ``x``.

    Returns shape ``(len(nodes), len(x))``.
    """
    nodes = np.asarray(nodes, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    out = np.ones((nodes.size, x.size))
    for n in range(nodes.size):
        for k in range(nodes.size):
            if k != n:
                out[n] *= (x - nodes[k]) / (nodes[n] - nodes[k])
    return out


def _gauss(a: float, b: float, npts: int):
    t, w = np.polynomial.legendre.leggauss(npts)
    return 0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w


@lru_cache(maxsize=None)
def _unit_element_gram(q: int):
    # h = 1; q + 1 Gauss points integrate the degree-2q products exactly
    if q == 0:
        return np.array([[2.0]]), np.array([[1.0]])
    coarse = 2.0 * np.arange(q + 1)
    x, w = _gauss(0.0, 2.0 * q, q + 1)
    phi = lagrange_eval(coarse, x)
    gdd = (phi * w) @ phi.T

    gdn = np.zeros((q + 1, q))
    for lo in (0, q):
        x, w = _gauss(lo, lo + q, q + 1)
        phi = lagrange_eval(coarse, x)
        fine = lagrange_eval(lo + np.arange(q + 1.0), x)
        for m in range(q):
            pos = 2 * m + 1 - lo
            if 0 <= pos <= q:
                gdn[:, m] += (phi * w) @ fine[pos]
    return gdd, gdn


def element_gram(q: int, h: float) -> ElementGram:
    """Gram blocks of one coarse element with fine spacing ``h``."""
    if q < 0 or h <= 0:
        raise ValueError("need q >= 0 and h > 0")
    gdd, gdn = _unit_element_gram(q)
    return ElementGram(q, h, h * gdd, h * gdn)


def newton_cotes_weights(n: int) -> np.ndarray:
    """Closed Newton-Cotes weights on ``n + 1`` unit-spaced nodes (sum ``n``)."""
    if not 1 <= n <= 8:
        raise ValueError("Newton-Cotes rules are provided for 1 <= n <= 8")
    weights, _ = newton_cotes(n, 1)
    return np.asarray(weights, dtype=np.float64)


def _level_fine_spacing(q: int, j: int) -> float:
    # spacing of level j + 1
    return 2.0 ** -(j + 1) if q == 0 else 1.0 / (q * 2 ** (j + 1))


def assemble_global_gram_dd(q: int, j: int) -> BandedSPDMatrix:
    """Level-``j`` nodal Gram matrix, bandwidth ``q``.

    Elements share their boundary node for ``q >= 1``; for ``q == 0`` no node
    is shared and the blocks are placed on the diagonal.
    """
    eg = element_gram(q, _level_fine_spacing(q, j))
    if q == 0:
        return BandedSPDMatrix(np.full((1, 2**j), eg.gdd[0, 0]))
    n = q * 2**j + 1
    band = np.zeros((q + 1, n))
    for i in range(q + 1):
        diag = np.diagonal(eg.gdd, -i)
        # entry k of diagonal i of element e lands at column e*q + k
        vals = np.zeros(n - i)
        for k, d in enumerate(diag):
            vals[k : k + q * 2**j : q] += d
        band[i, : n - i] = vals
    return BandedSPDMatrix(band)


def assemble_global_gram_dd_dense(q: int, j: int) -> np.ndarray:
    """Same matrix built with the stacking operators (dense; for checks)."""
    eg = element_gram(q, _level_fine_spacing(q, j))
    op = block_diag if q == 0 else stack_overlap_sum
    return repeat_stack(op, eg.gdd, 2**j)


def assemble_global_gram_dn(q: int, j: int) -> np.ndarray:
    """Dense ``(|coarse|, |surplus|)`` Gram matrix between level-j and surplus basis."""
    eg = element_gram(q, _level_fine_spacing(q, j))
    op = block_diag if q == 0 else stack_row_overlap
    return repeat_stack(op, eg.gdn, 2**j)


def level_mass_matrix(q: int, j: int) -> BandedSPDMatrix:
    """Gram matrix of the level-``j`` nodal basis (the L2 mass matrix)."""
    return assemble_global_gram_dd(q, j)
