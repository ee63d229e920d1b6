"""Lagrange interpolation stencils on dyadically refined elements.

An element of order ``q`` carries ``q + 1`` equispaced coarse nodes at the
even fine positions ``0, 2, ..., 2q``; refinement adds the ``q`` surplus nodes
at the odd positions ``1, 3, ..., 2q - 1``.  The stencil maps the coarse
values of one element to the interpolated values at its surplus nodes.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial, prod

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .blockops import repeat_stack, stack_col_overlap

__all__ = [
    "OrderTooLarge",
    "MAX_ORDER",
    "stencil_closed_form",
    "stencil_oracle",
    "stencil",
    "assemble_predictor",
    "apply_predict",
    "element_view",
]

MAX_ORDER = 12


class OrderTooLarge(ValueError):
    pass


def _double_factorial(n: int) -> int:
    # (-1)!! == 1 by convention
    return prod(range(n, 0, -2)) if n > 0 else 1


def stencil_closed_form(q: int) -> np.ndarray:
    """Interpolation matrix of shape ``(q, q + 1)`` from the double-factorial formula.

    ``q == 0`` returns ``[[1.0]]`` (piecewise-constant prediction).
    """
    if q < 0:
        raise ValueError("order must be non-negative")
    if q > MAX_ORDER:
        raise OrderTooLarge(f"order {q} exceeds the supported maximum {MAX_ORDER}")
    if q == 0:
        return np.ones((1, 1))
    out = np.empty((q, q + 1))
    for m in range(q):
        num = _double_factorial(2 * m + 1) * _double_factorial(2 * q - 2 * m - 1)
        for n in range(q + 1):
            sign = -1.0 if (m + n) % 2 else 1.0
            den = 2**q * (1 + 2 * m - 2 * n) * factorial(n) * factorial(q - n)
            out[m, n] = sign * num / den
    return out


def stencil_oracle(q: int) -> np.ndarray:
    """Brute-force Lagrange evaluation of the same stencil."""
    if q == 0:
        return np.ones((1, 1))
    coarse = 2.0 * np.arange(q + 1)
    out = np.empty((q, q + 1))
    for m in range(q):
        x = 2.0 * m + 1.0
        for n in range(q + 1):
            others = np.delete(coarse, n)
            out[m, n] = np.prod((x - others) / (coarse[n] - others))
    return out


@lru_cache(maxsize=None)
def _cached_stencil(q: int) -> np.ndarray:
    s = stencil_closed_form(q)
    s.setflags(write=False)
    return s


def stencil(q: int) -> np.ndarray:
    """Read-only cached closed-form stencil."""
    return _cached_stencil(q)


def assemble_predictor(q: int, j: int) -> np.ndarray:
    """Dense level-``j`` predictor of shape ``(q 2^j, q 2^j + 1)``."""
    if q < 1:
        raise ValueError("the q = 0 predictor is the identity; assemble it directly")
    return repeat_stack(stack_col_overlap, stencil(q), 2**j)


def element_view(coarse: np.ndarray, q: int) -> np.ndarray:
    """View of shape ``(..., elements, q + 1)`` over the last axis of ``coarse``."""
    return sliding_window_view(coarse, q + 1, axis=-1)[..., ::q, :]


def apply_predict(q: int, coarse: np.ndarray) -> np.ndarray:
    """Predicted surplus values from coarse nodal values along the last axis.

    Applies the stencil element by element, never forming the level matrix.
    """
    coarse = np.asarray(coarse, dtype=np.float64)
    if q == 0:
        return coarse.copy()
    if (coarse.shape[-1] - 1) % q:
        raise ValueError(f"{coarse.shape[-1]} nodes do not form whole order-{q} elements")
    pred = element_view(coarse, q) @ stencil(q).T
    return pred.reshape(coarse.shape[:-1] + (-1,))
