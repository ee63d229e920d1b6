"""Dyadic grid hierarchy on [0, 1] and the split/merge steps.

For order ``q >= 1`` level ``j`` has ``2**j`` elements of ``q + 1`` nodes each,
``q * 2**j + 1`` nodes in total.  For ``q == 0`` each element is represented
by its left endpoint, so level ``j`` has ``2**j`` nodes.  In both cases the
nodes of level ``j`` sit at the even indices of level ``j + 1`` and the surplus
nodes at the odd ones.  Node coordinates are ``k * spacing(j)`` and are never
stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .blockops import IndexSets

__all__ = [
    "GridHierarchy",
    "CoefficientPyramid",
    "InadmissibleSizeError",
    "node_count",
    "make_hierarchy",
    "split",
    "merge",
    "validate_input_length",
    "levels_for_length",
]


class InadmissibleSizeError(ValueError):
    """Raised when an array length is not ``q * 2**J + 1`` (or ``2**J``)."""


def node_count(q: int, j: int) -> int:
    return 2**j if q == 0 else q * 2**j + 1


@dataclass(frozen=True)
class GridHierarchy:
    q: int
    levels: int

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("order q must be non-negative")
        if self.levels < 1:
            raise ValueError("the hierarchy needs at least one level")

    def nodes(self, j: int) -> int:
        return node_count(self.q, j)

    def surplus(self, j: int) -> int:
        """Number of surplus nodes introduced going from level j to j + 1."""
        return self.nodes(j + 1) - self.nodes(j)

    def spacing(self, j: int) -> float:
        return 2.0**-j if self.q == 0 else 1.0 / (self.q * 2**j)

    def coordinates(self, j: int) -> np.ndarray:
        return np.arange(self.nodes(j)) * self.spacing(j)

    def index_sets(self, j: int) -> IndexSets:
        """Coarse/surplus split of the level ``j + 1`` nodes."""
        return IndexSets.even_odd(self.nodes(j + 1))

    @property
    def size(self) -> int:
        return self.nodes(self.levels)

    @cached_property
    def pyramid_sizes(self) -> tuple:
        return (self.nodes(0),) + tuple(self.surplus(j) for j in range(self.levels))


def make_hierarchy(q: int, J: int) -> GridHierarchy:
    return GridHierarchy(q, J)


@dataclass
class CoefficientPyramid:
    """Coarsest nodal values plus the detail vectors of every level."""

    alpha0: np.ndarray
    betas: list
    q: int
    levels: int

    def __post_init__(self):
        hier = GridHierarchy(self.q, self.levels)
        sizes = hier.pyramid_sizes
        self.alpha0 = np.asarray(self.alpha0, dtype=np.float64)
        self.betas = [np.asarray(b, dtype=np.float64) for b in self.betas]
        if len(self.betas) != self.levels:
            raise ValueError(f"expected {self.levels} detail vectors, got {len(self.betas)}")
        got = (self.alpha0.shape[-1],) + tuple(b.shape[-1] for b in self.betas)
        if got != sizes:
            raise ValueError(f"pyramid sizes {got} do not match hierarchy {sizes}")

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha0] + self.betas, axis=-1)

    @classmethod
    def from_vector(cls, v, q: int, levels: int) -> "CoefficientPyramid":
        v = np.asarray(v, dtype=np.float64)
        sizes = GridHierarchy(q, levels).pyramid_sizes
        if v.shape[-1] != sum(sizes):
            raise ValueError(f"vector length {v.shape[-1]} != {sum(sizes)}")
        parts = np.split(v, np.cumsum(sizes)[:-1], axis=-1)
        return cls(parts[0], parts[1:], q, levels)

    def level_of_entries(self) -> np.ndarray:
        """Level tag per pyramid entry; -1 marks the coarsest nodal values."""
        sizes = GridHierarchy(self.q, self.levels).pyramid_sizes
        return np.repeat(np.arange(-1, self.levels), sizes)


def split(v, idx: IndexSets):
    """Separate ``v`` into its coarse and surplus entries (last axis)."""
    v = np.asarray(v)
    if v.shape[-1] != idx.size:
        raise ValueError(f"vector length {v.shape[-1]} != index set size {idx.size}")
    return v[..., idx.delta], v[..., idx.nabla]


def merge(coarse, surplus, idx: IndexSets) -> np.ndarray:
    """Inverse of :func:`split`."""
    coarse = np.asarray(coarse)
    surplus = np.asarray(surplus)
    if coarse.shape[-1] != idx.delta.size or surplus.shape[-1] != idx.nabla.size:
        raise ValueError("coarse/surplus lengths do not match the index sets")
    shape = np.broadcast_shapes(coarse.shape[:-1], surplus.shape[:-1]) + (idx.size,)
    out = np.empty(shape, dtype=np.result_type(coarse, surplus))
    out[..., idx.delta] = coarse
    out[..., idx.nabla] = surplus
    return out


def levels_for_length(n: int, q: int):
    """Return J with ``node_count(q, J) == n``, or None."""
    m = n if q == 0 else n - 1
    if q > 0:
        if m <= 0 or m % q:
            return None
        m //= q
    if m < 2 or m & (m - 1):
        return None
    return m.bit_length() - 1


def validate_input_length(n: int, q: int, J: int | None = None) -> int:
    """Check that ``n`` is an admissible length and return its level count.

    With ``J`` given the length must match that depth exactly.
    """
    found = levels_for_length(n, q)
    if found is not None and (J is None or found == J):
        return found
    lower = [node_count(q, j) for j in range(1, 64) if node_count(q, j) <= n]
    upper = next(node_count(q, j) for j in range(1, 64) if node_count(q, j) > n)
    near = ([lower[-1]] if lower else []) + [upper]
    expected = "" if J is None else f" with {J} levels (expected {node_count(q, J)})"
    raise InadmissibleSizeError(
        f"length {n} is not admissible for order {q}{expected}; nearest admissible sizes: "
        + ", ".join(map(str, near))
    )
